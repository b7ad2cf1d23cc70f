#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "abswiki/catalog.hpp"
#include "abswiki/value.hpp"

namespace abswiki {

class EntityStore;
class Lexicon;

/// Text pattern mapped to a content skeleton.
///
/// The pattern mixes literal text with typed slots, e.g.
/// `{subject:item} is the {rank:ordinal}-{by:superlative} {object:item} in {place:item}`.
/// Slot types: `item` (a Q-id or an exact label), `ordinal` (ordinal word -> integer),
/// `superlative` (superlative lexicalization -> property item), `integer`.
/// The template is content notation whose `{slot}` markers are replaced by the
/// matched values.
struct SuggestRule {
  std::string id;
  std::string language;
  std::string pattern;
  std::string templ;
  double score = 1.0;
};

struct Suggestion {
  std::string rule;
  double score = 0.0;
  Value content;  // an instantiation
  std::string notation;
  std::vector<Diagnostic> diagnostics;
};

class SuggestRules {
 public:
  /// Throws Error(invalid_document) for malformed patterns.
  void add(SuggestRule rule);
  const std::vector<SuggestRule>& rules() const noexcept { return rules_; }
  /// Reads `{"rules": [{id, language, pattern, template, score}]}`.
  void load_file(const std::filesystem::path& file);

 private:
  std::vector<SuggestRule> rules_;
};

/// Candidates for `text` in `language`, best first. Read-only: never modifies any store.
/// An empty result means no rule matched.
std::vector<Suggestion> suggest(std::string_view text, std::string_view language,
                                const SuggestRules& rules, const Catalog& catalog,
                                const Lexicon& lexicon, const EntityStore& items);

}  // namespace abswiki
