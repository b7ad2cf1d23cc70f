#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "abswiki/catalog.hpp"
#include "abswiki/content.hpp"
#include "abswiki/phrase.hpp"
#include "abswiki/registry.hpp"

namespace abswiki {

class EntityStore;
class Lexicon;

/// Renderer manifest of one language: constructor id -> registry function id.
/// Missing entries are legal; the constructor then renders as a missing part.
struct RendererSet {
  std::string language;
  std::string conjunction;  // word joining the last two list elements
  std::map<std::string, std::string> renderers;

  bool operator==(const RendererSet&) const = default;
};

class RendererSets {
 public:
  void put(RendererSet set);
  bool remove(std::string_view language);
  std::optional<RendererSet> find(std::string_view language) const;
  std::vector<std::string> languages() const;

  /// Loads one `<language>.json` manifest per file.
  void load_directory(const std::filesystem::path& dir);
  static void save(const std::filesystem::path& dir, const RendererSet& set);

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, RendererSet, std::less<>> sets_;
};

struct Omission {
  Path path;
  std::string reason;

  bool operator==(const Omission&) const = default;
};

struct RenderOutcome {
  std::string text;
  std::vector<Omission> omissions;
  bool complete = true;
};

/// Stores the language functions read from. They must outlive every registry the
/// functions are registered in.
struct LanguageResources {
  const Catalog& catalog;
  const Lexicon& lexicon;
  const EntityStore& items;
  const RendererSets& renderers;
};

/// Registers the lexicon helpers (lookup_form, ordinal, superlative, article, gender_of,
/// inflect_np, genitive, dative), the phrase builders used by renderer compositions
/// (render_value, arg, has, bundle, merge_features, with_gender, word, np, glue, sentence,
/// render_list, pronoun_or_name) and `render(content, language) -> text`.
/// Call after register_core_functions.
void register_language_functions(Registry& registry, const LanguageResources& resources);

/// Validation options that type function-call values by their registry return type.
ValidationOptions registry_validation_options(const Registry& registry);

/// Renders each sentence of `content` (each element of the root's list argument) and
/// concatenates the complete ones. Incomplete sentences, sentences whose evaluation
/// failed and sentences depending on a sentence that was not rendered right before
/// them are omitted and reported.
/// Throws Error(validation_failed) or Error(unsupported_language).
RenderOutcome render(const Registry& registry, const LanguageResources& resources,
                     const Content& content, std::string_view language,
                     const EvalOptions& options = {});

/// Phrase of one instantiation. Throws Error(no_renderer) when the language has no
/// renderer for its constructor.
std::shared_ptr<const Phrase> render_constructor(const Registry& registry,
                                                 const LanguageResources& resources,
                                                 const Instantiation& inst,
                                                 std::string_view language,
                                                 const FeatureBundle& context = {},
                                                 const std::string& antecedent = {});

/// Joins rendered values with commas and the language's conjunction. Style "serial"
/// puts a comma before the conjunction when there are three or more elements; "plain"
/// does not.
std::shared_ptr<const Phrase> render_list(const Registry& registry,
                                          const LanguageResources& resources,
                                          const Value::List& values, std::string_view language,
                                          std::string_view style,
                                          const FeatureBundle& context = {});

/// Surface text: single spaces, no space before "," or ".", glued phrases joined
/// without spaces, and for sentences an upper-case first letter and a final period.
/// Throws Error(incomplete_phrase).
std::string linearize(const Phrase& phrase, std::string_view language);

}  // namespace abswiki
