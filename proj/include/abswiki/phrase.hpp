#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "abswiki/features.hpp"

namespace abswiki {

enum class GrammaticalType : std::uint8_t {
  text_fragment,
  noun_phrase,
  modifier,
  clause,
  sentence,
  article_text,
};

std::string_view to_string(GrammaticalType type) noexcept;
std::optional<GrammaticalType> parse_grammatical_type(std::string_view text) noexcept;

/// Placeholder for something a renderer could not produce (absent form, no renderer).
struct MissingPart {
  std::string reason;

  bool operator==(const MissingPart&) const = default;
};

struct Phrase;
using PhrasePart = std::variant<std::string, std::shared_ptr<const Phrase>, MissingPart>;

/// Intermediate rendering result; turned into text by linearize().
struct Phrase {
  GrammaticalType type = GrammaticalType::text_fragment;
  FeatureBundle features;
  std::vector<PhrasePart> parts;
  // Children are concatenated without separating spaces ("viert" + "größte").
  bool glued = false;
  // Item this phrase denotes, when it is a reference to one.
  std::optional<std::string> referent;
  // Set when this phrase is only valid if the sentence introducing the group was rendered.
  std::optional<std::string> dependency_group;

  bool complete() const;
  /// Reason of the first MissingPart in depth-first order.
  std::optional<std::string> first_missing() const;
  /// Union of dependency groups over the whole subtree.
  std::set<std::string> dependency_groups() const;
  /// Unambiguous structural dump, used for cache keys and debugging.
  std::string debug_string() const;

  friend bool operator==(const Phrase& a, const Phrase& b);
};

std::shared_ptr<const Phrase> make_missing(std::string reason,
                                           GrammaticalType type = GrammaticalType::text_fragment);
std::shared_ptr<const Phrase> make_text_phrase(std::string text,
                                               GrammaticalType type = GrammaticalType::text_fragment,
                                               FeatureBundle features = {});

}  // namespace abswiki
