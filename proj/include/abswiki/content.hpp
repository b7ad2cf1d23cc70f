#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "abswiki/value.hpp"

namespace abswiki {

class Catalog;

/// A whole abstract article: the root instantiation (e.g. `Article(content: [...])`).
struct Content {
  Instantiation root;

  friend bool operator==(const Content&, const Content&) = default;
};

/// One step into a content tree: a key of an instantiation or an index into a list.
using PathStep = std::variant<std::string, std::size_t>;
using Path = std::vector<PathStep>;

/// `content[1].subject`; the empty path prints as "".
std::string to_string(const Path& path);
/// Inverse of to_string(Path). Throws SyntaxError on malformed input.
Path parse_path(std::string_view text);

/// Parses the abstract-content notation. Names are not resolved against any catalog.
/// Throws SyntaxError (with line, column and expected-token set) on malformed input.
Content parse_content(std::string_view text);
/// Parses a single value in the same notation (`4`, `[Q65, Q16552]`, `cultural`).
Value parse_value(std::string_view text);

/// Canonical single-line notation. With a catalog keys follow the constructor's key order
/// (unknown keys last, alphabetical); without one keys are alphabetical.
std::string serialize_content(const Content& content, const Catalog* catalog = nullptr);
std::string serialize_value(const Value& value, const Catalog* catalog = nullptr);

/// Value at `path`, or nullptr when the path does not resolve.
const Value* value_at(const Content& content, const Path& path);

/// Returns a copy of `content` with the value at `path` replaced by `value`. The last
/// step may name a key that is absent from its instantiation, which adds the key.
/// The input is never modified. Throws Error(path_not_found).
Content edit_value(const Content& content, const Path& path, Value value);
/// Returns a copy with the key or list element at `path` removed. Throws Error(path_not_found).
Content remove_value(const Content& content, const Path& path);

}  // namespace abswiki
