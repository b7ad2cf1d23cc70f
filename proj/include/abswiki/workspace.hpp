#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "abswiki/catalog.hpp"
#include "abswiki/entity_store.hpp"
#include "abswiki/lexicon.hpp"
#include "abswiki/registry.hpp"
#include "abswiki/renderer.hpp"
#include "abswiki/suggest.hpp"

namespace abswiki {

struct Config {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_dir = "fixtures";
  std::size_t cache_size = 10'000;
  int depth_limit = 256;
  bool remote_fetch = false;
  std::string remote_url = "https://www.wikidata.org";

  /// Reads an optional JSON config file, then applies ABSWIKI_LISTEN (host:port),
  /// ABSWIKI_DATA_DIR, ABSWIKI_CACHE_SIZE, ABSWIKI_DEPTH_LIMIT, ABSWIKI_REMOTE_FETCH
  /// and ABSWIKI_REMOTE_URL. A relative data_dir in the file is relative to the file.
  static Config load(const std::optional<std::filesystem::path>& file = std::nullopt);
};

struct StoredContent {
  std::string id;
  std::vector<Diagnostic> diagnostics;
};

/// All stores of one running instance plus the registry wired to them.
class Workspace {
 public:
  explicit Workspace(Config config = {});
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  /// Loads {constructors,functions,renderers,lexemes,lexicon,items,content,suggest}/ below
  /// config().data_dir. Missing directories are skipped.
  void load();

  const Config& config() const noexcept { return config_; }
  Catalog& catalog() noexcept { return catalog_; }
  Lexicon& lexicon() noexcept { return lexicon_; }
  EntityStore& items() noexcept { return items_; }
  RendererSets& renderers() noexcept { return renderers_; }
  SuggestRules& suggest_rules() noexcept { return rules_; }
  Registry& registry() noexcept { return *registry_; }
  const Registry& registry() const noexcept { return *registry_; }
  LanguageResources resources() const noexcept;

  std::vector<Diagnostic> validate(const Content& content) const;
  /// Validation diagnostics plus UNKNOWN_ITEM for items missing from the store.
  std::vector<Diagnostic> check(const Content& content) const;
  RenderOutcome render(const Content& content, std::string_view language) const;
  std::vector<Suggestion> suggest(std::string_view text, std::string_view language) const;

  /// Parses and stores content under `item` (an item id) or a fresh scratch id.
  /// Throws SyntaxError; invalid content is stored and its diagnostics returned.
  StoredContent store_content(std::string_view text, const std::optional<std::string>& item);
  std::optional<Content> find_content(std::string_view id) const;
  std::vector<std::string> content_ids() const;

  /// Edits that change what renders. Each clears the evaluation cache.
  /// put_constructor returns ids of stored content that no longer validates.
  std::vector<std::string> put_constructor(ConstructorSpec spec);
  void put_function(FunctionDef def);
  void put_lexeme(Lexeme lexeme);
  void put_item(Item item);
  bool remove_lexeme(std::string_view id);

 private:
  Config config_;
  Catalog catalog_;
  Lexicon lexicon_;
  EntityStore items_;
  RendererSets renderers_;
  SuggestRules rules_;
  std::unique_ptr<Registry> registry_;
  mutable std::shared_mutex content_mutex_;
  std::map<std::string, Content, std::less<>> contents_;
  std::size_t next_scratch_ = 1;
};

}  // namespace abswiki
