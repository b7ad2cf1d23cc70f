#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "abswiki/content.hpp"
#include "abswiki/phrase.hpp"

namespace abswiki {

/// Accepted value type of a key: `integer`, `text`, `item`, `enum(<type>)`,
/// `constructor(<type>)` or `list(<descriptor>)`, where <type> is a grammatical type.
struct ValueDescriptor {
  enum class Kind : std::uint8_t { integer, text, item, enumeration, constructor, list };

  Kind kind = Kind::text;
  GrammaticalType result_type = GrammaticalType::text_fragment;
  std::shared_ptr<const ValueDescriptor> element;

  std::string to_string() const;
  /// Throws Error(invalid_document).
  static ValueDescriptor parse(std::string_view text);
  friend bool operator==(const ValueDescriptor& a, const ValueDescriptor& b);
};

struct KeySpec {
  std::string id;
  std::map<std::string, std::string> labels;
  bool required = false;
  std::vector<ValueDescriptor> accepted;
};

struct ConstructorSpec {
  std::string id;
  std::map<std::string, std::string> labels;
  std::string doc;
  std::vector<KeySpec> keys;
  GrammaticalType result_type = GrammaticalType::text_fragment;

  const KeySpec* key(std::string_view key_id) const noexcept;
  bool is_enumeration() const noexcept { return keys.empty(); }
};

/// Editable set of constructor specs. Reads are concurrent; writes are serialized.
class Catalog {
 public:
  Catalog() = default;
  Catalog(const Catalog& other);
  Catalog& operator=(const Catalog& other);

  /// Inserts or replaces. Throws Error(invalid_document) if key ids repeat or a key
  /// accepts nothing.
  void put(ConstructorSpec spec);
  bool remove(std::string_view id);
  std::shared_ptr<const ConstructorSpec> find(std::string_view id) const;
  std::vector<std::string> ids() const;
  std::size_t size() const;

  /// Loads every `*.json` document in `dir`. Throws Error(invalid_document / io_error).
  static Catalog load_directory(const std::filesystem::path& dir);
  static void save_spec(const std::filesystem::path& dir, const ConstructorSpec& spec);

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const ConstructorSpec>, std::less<>> specs_;
};

struct Diagnostic {
  Path path;
  std::string code;  // MISSING_REQUIRED_KEY, TYPE_MISMATCH, ...
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

struct ValidationOptions {
  /// Return type id of a registered function, or nullopt if the function is unknown.
  /// When unset, function-call values are accepted without checks.
  std::function<std::optional<std::string>(std::string_view)> function_return_type;
};

/// Checks every instantiation in `content` against the catalog. Reports all problems;
/// the result is empty iff the content is valid.
std::vector<Diagnostic> validate(const Content& content, const Catalog& catalog,
                                 const ValidationOptions& options = {});

/// Validates a value as if it were stored under a key accepting `accepted`.
std::vector<Diagnostic> validate_value(const Value& value,
                                       const std::vector<ValueDescriptor>& accepted,
                                       const Catalog& catalog, const Path& at = {},
                                       const ValidationOptions& options = {});

}  // namespace abswiki
