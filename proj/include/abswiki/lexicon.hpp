#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "abswiki/features.hpp"

namespace abswiki {

class EntityStore;

enum class Category : std::uint8_t {
  verb,
  noun,
  adjective,
  proper_noun,
  preposition,
  article,
  pronoun,
};

std::string_view to_string(Category c) noexcept;
std::optional<Category> parse_category(std::string_view text) noexcept;

/// Dimensions an inflected form of this category may be keyed by.
FeatureBundle category_dimensions(Category c);

struct Lexeme {
  std::string id;  // L-prefixed
  std::string language;
  std::string lemma;
  Category category = Category::noun;
  FeatureBundle features;  // static, e.g. gender of a noun
  std::map<FeatureBundle, std::string> forms;

  bool operator==(const Lexeme&) const = default;
};

/// True for `L[1-9][0-9]*`.
bool is_lexeme_id(std::string_view text) noexcept;

/// Absence of a form or lexicalization. A value, not a failure.
struct MissingForm {
  std::string reason;

  bool operator==(const MissingForm&) const = default;
};

template <typename T>
using OrMissing = std::variant<T, MissingForm>;

/// Lexemes, ordinal tables and per-property superlative lexicalizations.
/// Reads are concurrent; reloads and edits are serialized.
class Lexicon {
 public:
  /// Throws Error(invalid_document) for a bad id, empty lemma or a form keyed by a
  /// dimension the category does not inflect for.
  void put(Lexeme lexeme);
  bool remove(std::string_view id);
  std::shared_ptr<const Lexeme> find(std::string_view id) const;
  std::vector<std::string> ids() const;
  /// First lexeme of `category` in `language` (by id), e.g. the article lexeme.
  std::shared_ptr<const Lexeme> find_by_category(Category category,
                                                 std::string_view language) const;

  void set_ordinals(std::string language, std::map<int, std::string> table);
  bool remove_ordinal(std::string_view language, int n);
  void set_superlative(std::string property, std::string language, std::string text);
  bool remove_superlative(std::string_view property, std::string_view language);
  std::vector<std::string> languages() const;

  /// Exact-bundle match. Throws Error(unknown_lexeme).
  OrMissing<std::string> lookup_form(std::string_view lexeme_id,
                                     const FeatureBundle& features) const;
  /// Throws Error(unsupported_language) or Error(out_of_table).
  std::string ordinal(std::int64_t n, std::string_view language) const;
  OrMissing<std::string> superlative(std::string_view property, std::string_view language) const;
  /// Form of the language's article lexeme for the dimensions its paradigm uses
  /// (nominative singular unless `features` says otherwise).
  /// Throws Error(unsupported_language).
  OrMissing<std::string> article(Definiteness definiteness, std::optional<Gender> gender,
                                 std::string_view language,
                                 const FeatureBundle& features = {}) const;
  /// Reverse lookups used by the suggestion rules.
  std::optional<int> ordinal_value(std::string_view text, std::string_view language) const;
  std::vector<std::string> properties_with_superlative(std::string_view text,
                                                       std::string_view language) const;

  /// Static gender of a lexeme. Throws Error(unknown_lexeme).
  OrMissing<Gender> gender_of(std::string_view lexeme_id) const;

  /// Loads lexemes/*.json, lexicon/ordinals/*.json and lexicon/properties/*.json
  /// below `data_dir`. Missing directories are skipped.
  void load(const std::filesystem::path& data_dir);
  static void save_lexeme(const std::filesystem::path& dir, const Lexeme& lexeme);

  /// Records which entries are read on the current thread while alive. Keys look like
  /// `lexeme:L1883`, `ordinal:de:4`, `superlative:Q1613416:de`.
  class AccessLog {
   public:
    AccessLog();
    ~AccessLog();
    AccessLog(const AccessLog&) = delete;
    AccessLog& operator=(const AccessLog&) = delete;
    const std::set<std::string>& keys() const noexcept { return keys_; }

   private:
    friend class Lexicon;
    std::set<std::string> keys_;
    AccessLog* previous_;
  };

 private:
  static void note(std::string key);

  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const Lexeme>, std::less<>> lexemes_;
  std::map<std::string, std::map<int, std::string>, std::less<>> ordinals_;
  // property id -> language -> superlative text
  std::map<std::string, std::map<std::string, std::string, std::less<>>, std::less<>>
      superlatives_;
};

/// Lexeme that lexicalizes `item_id` in `language`, if the item links one.
std::optional<std::string> linked_lexeme(const EntityStore& items, std::string_view item_id,
                                         std::string_view language);

/// Case form of an item used as a noun phrase. Uses the linked lexeme's singular form;
/// without a link the label serves as the nominative and other cases are missing.
/// Throws Error(unknown_item).
OrMissing<std::string> inflect_np(const Lexicon& lexicon, const EntityStore& items,
                                  std::string_view item_id, Case grammatical_case,
                                  std::string_view language);

/// Gender of a lexeme id or of the lexeme linked from an item id.
OrMissing<Gender> gender_of(const Lexicon& lexicon, const EntityStore& items,
                            std::string_view ref, std::string_view language);

}  // namespace abswiki
