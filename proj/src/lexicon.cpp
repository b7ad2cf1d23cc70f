#include "abswiki/lexicon.hpp"

#include <algorithm>
#include <limits>
#include <mutex>

#include "abswiki/entity_store.hpp"
#include "abswiki/error.hpp"
#include "abswiki/json_io.hpp"

namespace abswiki {

namespace {

constexpr std::pair<Category, std::string_view> category_names[] = {
    {Category::verb, "verb"},
    {Category::noun, "noun"},
    {Category::adjective, "adjective"},
    {Category::proper_noun, "proper-noun"},
    {Category::preposition, "preposition"},
    {Category::article, "article"},
    {Category::pronoun, "pronoun"},
};

thread_local Lexicon::AccessLog* active_log = nullptr;

std::vector<std::filesystem::path> json_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) return files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

FeatureBundle used_dimensions(const Lexeme& lexeme) {
  FeatureBundle mask;
  for (const auto& [bundle, form] : lexeme.forms) mask = mask.merged(bundle);
  return mask;
}

}  // namespace

std::string_view to_string(Category c) noexcept {
  for (const auto& [cat, name] : category_names) {
    if (cat == c) return name;
  }
  return "?";
}

std::optional<Category> parse_category(std::string_view text) noexcept {
  for (const auto& [cat, name] : category_names) {
    if (name == text) return cat;
  }
  return std::nullopt;
}

FeatureBundle category_dimensions(Category c) {
  FeatureBundle mask;
  switch (c) {
    case Category::verb:
      mask.person = Person::third;
      mask.number = Number::singular;
      mask.tense = Tense::present;
      break;
    case Category::noun:
    case Category::proper_noun:
      mask.number = Number::singular;
      mask.grammatical_case = Case::nominative;
      break;
    case Category::adjective:
      mask.grammatical_case = Case::nominative;
      mask.number = Number::singular;
      mask.gender = Gender::neuter;
      mask.degree = Degree::positive;
      mask.definiteness = Definiteness::definite;
      break;
    case Category::preposition: break;
    case Category::article:
      mask.definiteness = Definiteness::definite;
      mask.gender = Gender::neuter;
      mask.number = Number::singular;
      mask.grammatical_case = Case::nominative;
      break;
    case Category::pronoun:
      mask.person = Person::third;
      mask.number = Number::singular;
      mask.gender = Gender::neuter;
      mask.grammatical_case = Case::nominative;
      break;
  }
  return mask;
}

bool is_lexeme_id(std::string_view text) noexcept {
  if (text.size() < 2 || text[0] != 'L' || text[1] < '1' || text[1] > '9') return false;
  return std::all_of(text.begin() + 1, text.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// ---- JSON -------------------------------------------------------------------

void to_json(json& j, const Lexeme& lexeme) {
  json forms = json::array();
  for (const auto& [bundle, form] : lexeme.forms) {
    forms.push_back({{"features", bundle.to_string()}, {"form", form}});
  }
  j = json{{"id", lexeme.id},
           {"language", lexeme.language},
           {"lemma", lexeme.lemma},
           {"category", std::string(to_string(lexeme.category))},
           {"features", lexeme.features.to_string()},
           {"forms", forms}};
}

void from_json(const json& j, Lexeme& lexeme) {
  lexeme.id = j.at("id").get<std::string>();
  lexeme.language = j.at("language").get<std::string>();
  lexeme.lemma = j.at("lemma").get<std::string>();
  auto category = j.at("category").get<std::string>();
  auto parsed = parse_category(category);
  if (!parsed) throw Error(ErrorCode::invalid_document, "unknown category '" + category + "'");
  lexeme.category = *parsed;
  lexeme.features = FeatureBundle::parse(j.value("features", std::string{}));
  lexeme.forms.clear();
  for (const auto& f : j.value("forms", json::array())) {
    auto bundle = FeatureBundle::parse(f.at("features").get<std::string>());
    if (!lexeme.forms.emplace(bundle, f.at("form").get<std::string>()).second) {
      throw Error(ErrorCode::invalid_document,
                  lexeme.id + " repeats the form key '" + bundle.to_string() + "'");
    }
  }
}

// ---- access log -------------------------------------------------------------

Lexicon::AccessLog::AccessLog() : previous_(active_log) { active_log = this; }

Lexicon::AccessLog::~AccessLog() {
  active_log = previous_;
  if (previous_ != nullptr) previous_->keys_.insert(keys_.begin(), keys_.end());
}

void Lexicon::note(std::string key) {
  if (active_log != nullptr) active_log->keys_.insert(std::move(key));
}

// ---- store ------------------------------------------------------------------

void Lexicon::put(Lexeme lexeme) {
  if (!is_lexeme_id(lexeme.id)) {
    throw Error(ErrorCode::invalid_document, "'" + lexeme.id + "' is not a lexeme id");
  }
  if (lexeme.lemma.empty()) throw Error(ErrorCode::invalid_document, lexeme.id + " has no lemma");
  if (lexeme.language.empty()) {
    throw Error(ErrorCode::invalid_document, lexeme.id + " has no language");
  }
  const FeatureBundle allowed = category_dimensions(lexeme.category);
  for (const auto& [bundle, form] : lexeme.forms) {
    if (bundle.restricted_to(allowed) != bundle) {
      throw Error(ErrorCode::invalid_document,
                  lexeme.id + ": form key '" + bundle.to_string() + "' is not valid for a " +
                      std::string(to_string(lexeme.category)));
    }
  }
  auto ptr = std::make_shared<const Lexeme>(std::move(lexeme));
  std::unique_lock lock(mutex_);
  lexemes_[ptr->id] = std::move(ptr);
}

bool Lexicon::remove(std::string_view id) {
  std::unique_lock lock(mutex_);
  auto it = lexemes_.find(id);
  if (it == lexemes_.end()) return false;
  lexemes_.erase(it);
  return true;
}

std::shared_ptr<const Lexeme> Lexicon::find(std::string_view id) const {
  note("lexeme:" + std::string(id));
  std::shared_lock lock(mutex_);
  auto it = lexemes_.find(id);
  return it == lexemes_.end() ? nullptr : it->second;
}

std::vector<std::string> Lexicon::ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, l] : lexemes_) out.push_back(id);
  return out;
}

std::shared_ptr<const Lexeme> Lexicon::find_by_category(Category category,
                                                        std::string_view language) const {
  std::shared_ptr<const Lexeme> found;
  {
    std::shared_lock lock(mutex_);
    for (const auto& [id, l] : lexemes_) {
      if (l->category == category && l->language == language) {
        found = l;
        break;
      }
    }
  }
  if (found) note("lexeme:" + found->id);
  return found;
}

void Lexicon::set_ordinals(std::string language, std::map<int, std::string> table) {
  std::unique_lock lock(mutex_);
  ordinals_[std::move(language)] = std::move(table);
}

bool Lexicon::remove_ordinal(std::string_view language, int n) {
  std::unique_lock lock(mutex_);
  auto it = ordinals_.find(language);
  return it != ordinals_.end() && it->second.erase(n) > 0;
}

void Lexicon::set_superlative(std::string property, std::string language, std::string text) {
  std::unique_lock lock(mutex_);
  superlatives_[std::move(property)][std::move(language)] = std::move(text);
}

bool Lexicon::remove_superlative(std::string_view property, std::string_view language) {
  std::unique_lock lock(mutex_);
  auto it = superlatives_.find(property);
  if (it == superlatives_.end()) return false;
  auto l = it->second.find(language);
  if (l == it->second.end()) return false;
  it->second.erase(l);
  return true;
}

std::vector<std::string> Lexicon::languages() const {
  std::shared_lock lock(mutex_);
  std::set<std::string> langs;
  for (const auto& [id, l] : lexemes_) langs.insert(l->language);
  for (const auto& [lang, t] : ordinals_) langs.insert(lang);
  return {langs.begin(), langs.end()};
}

// ---- operations -------------------------------------------------------------

OrMissing<std::string> Lexicon::lookup_form(std::string_view lexeme_id,
                                            const FeatureBundle& features) const {
  auto lexeme = find(lexeme_id);
  if (!lexeme) {
    throw Error(ErrorCode::unknown_lexeme, "unknown lexeme " + std::string(lexeme_id));
  }
  auto it = lexeme->forms.find(features);
  if (it == lexeme->forms.end()) {
    return MissingForm{lexeme->id + " (" + lexeme->lemma + ") has no form for " +
                       (features.empty() ? std::string("{}") : features.to_string())};
  }
  return it->second;
}

std::string Lexicon::ordinal(std::int64_t n, std::string_view language) const {
  note("ordinal:" + std::string(language) + ":" + std::to_string(n));
  std::shared_lock lock(mutex_);
  auto table = ordinals_.find(language);
  if (table == ordinals_.end()) {
    throw Error(ErrorCode::unsupported_language,
                "no ordinal table for language '" + std::string(language) + "'");
  }
  auto it = n >= 1 && n <= std::numeric_limits<int>::max()
                ? table->second.find(static_cast<int>(n))
                : table->second.end();
  if (it == table->second.end()) {
    throw Error(ErrorCode::out_of_table,
                "no ordinal for " + std::to_string(n) + " in '" + std::string(language) + "'");
  }
  return it->second;
}

OrMissing<std::string> Lexicon::superlative(std::string_view property,
                                            std::string_view language) const {
  note("superlative:" + std::string(property) + ":" + std::string(language));
  std::shared_lock lock(mutex_);
  auto it = superlatives_.find(property);
  if (it != superlatives_.end()) {
    if (auto l = it->second.find(language); l != it->second.end()) return l->second;
  }
  return MissingForm{"no superlative of " + std::string(property) + " in '" +
                     std::string(language) + "'"};
}

OrMissing<std::string> Lexicon::article(Definiteness definiteness, std::optional<Gender> gender,
                                        std::string_view language,
                                        const FeatureBundle& features) const {
  auto lexeme = find_by_category(Category::article, language);
  if (!lexeme) {
    throw Error(ErrorCode::unsupported_language,
                "no article paradigm for language '" + std::string(language) + "'");
  }
  FeatureBundle wanted;
  wanted.definiteness = definiteness;
  wanted.gender = gender;
  wanted.grammatical_case = features.grammatical_case.value_or(Case::nominative);
  wanted.number = features.number.value_or(Number::singular);
  const FeatureBundle used = used_dimensions(*lexeme);
  if (used.gender && !gender) {
    return MissingForm{"article in '" + std::string(language) + "' needs a gender"};
  }
  return lookup_form(lexeme->id, wanted.restricted_to(used));
}

std::optional<int> Lexicon::ordinal_value(std::string_view text,
                                          std::string_view language) const {
  std::shared_lock lock(mutex_);
  auto table = ordinals_.find(language);
  if (table == ordinals_.end()) return std::nullopt;
  for (const auto& [n, word] : table->second) {
    if (word == text) return n;
  }
  return std::nullopt;
}

std::vector<std::string> Lexicon::properties_with_superlative(std::string_view text,
                                                              std::string_view language) const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [property, by_language] : superlatives_) {
    auto it = by_language.find(language);
    if (it != by_language.end() && it->second == text) out.push_back(property);
  }
  return out;
}

OrMissing<Gender> Lexicon::gender_of(std::string_view lexeme_id) const {
  auto lexeme = find(lexeme_id);
  if (!lexeme) {
    throw Error(ErrorCode::unknown_lexeme, "unknown lexeme " + std::string(lexeme_id));
  }
  if (lexeme->features.gender) return *lexeme->features.gender;
  return MissingForm{lexeme->id + " (" + lexeme->lemma + ") has no gender"};
}

// ---- files ------------------------------------------------------------------

void Lexicon::load(const std::filesystem::path& data_dir) {
  for (const auto& file : json_files(data_dir / "lexemes")) {
    json doc = read_json_file(file);
    put(with_document_errors(file.string(), [&] { return doc.get<Lexeme>(); }));
  }
  for (const auto& file : json_files(data_dir / "lexicon" / "ordinals")) {
    json doc = read_json_file(file);
    with_document_errors(file.string(), [&] {
      std::map<int, std::string> table;
      for (const auto& [key, text] : doc.at("ordinals").items()) {
        table[std::stoi(key)] = text.get<std::string>();
      }
      set_ordinals(doc.at("language").get<std::string>(), std::move(table));
    });
  }
  for (const auto& file : json_files(data_dir / "lexicon" / "properties")) {
    json doc = read_json_file(file);
    with_document_errors(file.string(), [&] {
      auto id = doc.at("id").get<std::string>();
      for (const auto& [lang, text] : doc.at("superlative").items()) {
        set_superlative(id, lang, text.get<std::string>());
      }
    });
  }
}

void Lexicon::save_lexeme(const std::filesystem::path& dir, const Lexeme& lexeme) {
  write_json_file(dir / (lexeme.id + ".json"), json(lexeme));
}

// ---- item-level helpers -----------------------------------------------------

std::optional<std::string> linked_lexeme(const EntityStore& items, std::string_view item_id,
                                         std::string_view language) {
  auto item = items.find(item_id);
  if (!item) throw Error(ErrorCode::unknown_item, "unknown item " + std::string(item_id));
  auto it = item->lexemes.find(std::string(language));
  if (it == item->lexemes.end()) return std::nullopt;
  return it->second;
}

OrMissing<std::string> inflect_np(const Lexicon& lexicon, const EntityStore& items,
                                  std::string_view item_id, Case grammatical_case,
                                  std::string_view language) {
  auto link = linked_lexeme(items, item_id, language);
  if (!link) {
    if (grammatical_case == Case::nominative) return items.get_label(item_id, language).text;
    return MissingForm{std::string(item_id) + " has no " + std::string(to_string(grammatical_case)) +
                       " form in '" + std::string(language) + "'"};
  }
  if (!lexicon.find(*link)) {
    return MissingForm{std::string(item_id) + " links missing lexeme " + *link};
  }
  FeatureBundle b;
  b.grammatical_case = grammatical_case;
  b.number = Number::singular;
  return lexicon.lookup_form(*link, b);
}

OrMissing<Gender> gender_of(const Lexicon& lexicon, const EntityStore& items,
                            std::string_view ref, std::string_view language) {
  std::string lexeme_id(ref);
  if (is_item_id(ref)) {
    auto link = linked_lexeme(items, ref, language);
    if (!link) return MissingForm{std::string(ref) + " has no lexeme in '" + std::string(language) + "'"};
    lexeme_id = *link;
  }
  if (!lexicon.find(lexeme_id)) return MissingForm{"missing lexeme " + lexeme_id};
  return lexicon.gender_of(lexeme_id);
}

}  // namespace abswiki
