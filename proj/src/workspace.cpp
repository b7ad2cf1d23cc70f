#include "abswiki/workspace.hpp"

#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>

#include "abswiki/error.hpp"
#include "abswiki/json_io.hpp"

namespace abswiki {

namespace {

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

bool parse_flag(const std::string& v) {
  return v == "1" || v == "true" || v == "yes" || v == "on";
}

void set_listen(Config& c, const std::string& listen) {
  auto colon = listen.rfind(':');
  if (colon == std::string::npos) {
    c.host = listen;
    return;
  }
  c.host = listen.substr(0, colon);
  c.port = std::stoi(listen.substr(colon + 1));
}

std::string read_text(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool is_dir(const std::filesystem::path& p) {
  std::error_code ec;
  return std::filesystem::is_directory(p, ec);
}

}  // namespace

Config Config::load(const std::optional<std::filesystem::path>& file) {
  Config c;
  try {
    if (file) {
      json doc = read_json_file(*file);
      if (doc.contains("listen")) set_listen(c, doc.at("listen").get<std::string>());
      if (doc.contains("data_dir")) {
        std::filesystem::path dir = doc.at("data_dir").get<std::string>();
        c.data_dir = dir.is_relative() ? file->parent_path() / dir : dir;
      }
      c.cache_size = doc.value("cache_size", c.cache_size);
      c.depth_limit = doc.value("depth_limit", c.depth_limit);
      c.remote_fetch = doc.value("remote_fetch", c.remote_fetch);
      c.remote_url = doc.value("remote_url", c.remote_url);
    }
    if (auto v = env("ABSWIKI_LISTEN")) set_listen(c, *v);
    if (auto v = env("ABSWIKI_DATA_DIR")) c.data_dir = *v;
    if (auto v = env("ABSWIKI_CACHE_SIZE")) c.cache_size = std::stoul(*v);
    if (auto v = env("ABSWIKI_DEPTH_LIMIT")) c.depth_limit = std::stoi(*v);
    if (auto v = env("ABSWIKI_REMOTE_FETCH")) c.remote_fetch = parse_flag(*v);
    if (auto v = env("ABSWIKI_REMOTE_URL")) c.remote_url = *v;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_document, std::string("config: ") + e.what());
  } catch (const std::logic_error& e) {
    throw Error(ErrorCode::invalid_document, std::string("config: bad number: ") + e.what());
  }
  return c;
}

Workspace::Workspace(Config config) : config_(std::move(config)) {
  RegistryOptions options;
  options.cache_capacity = config_.cache_size;
  options.depth_limit = config_.depth_limit;
  registry_ = std::make_unique<Registry>(options);
  register_core_functions(*registry_);
  register_language_functions(*registry_, resources());
}

LanguageResources Workspace::resources() const noexcept {
  return LanguageResources{catalog_, lexicon_, items_, renderers_};
}

void Workspace::load() {
  const auto& dir = config_.data_dir;
  if (!is_dir(dir)) throw Error(ErrorCode::io_error, "data directory not found: " + dir.string());
  if (is_dir(dir / "constructors")) catalog_ = Catalog::load_directory(dir / "constructors");
  lexicon_.load(dir);
  if (is_dir(dir / "items")) items_.load_directory(dir / "items");
  if (is_dir(dir / "renderers")) renderers_.load_directory(dir / "renderers");
  if (is_dir(dir / "functions")) registry_->load_directory(dir / "functions");
  if (std::filesystem::exists(dir / "suggest" / "rules.json")) {
    rules_.load_file(dir / "suggest" / "rules.json");
  }
  if (is_dir(dir / "content")) {
    std::unique_lock lock(content_mutex_);
    for (const auto& entry : std::filesystem::directory_iterator(dir / "content")) {
      if (entry.path().extension() != ".abstract") continue;
      contents_[entry.path().stem().string()] = parse_content(read_text(entry.path()));
    }
  }
  registry_->clear_cache();
}

std::vector<Diagnostic> Workspace::validate(const Content& content) const {
  return abswiki::validate(content, catalog_, registry_validation_options(*registry_));
}

std::vector<Diagnostic> Workspace::check(const Content& content) const {
  auto out = validate(content);
  for (const auto& id : items_.missing_items(content)) {
    out.push_back(Diagnostic{{}, "UNKNOWN_ITEM", "item " + id + " is not in the entity store"});
  }
  return out;
}

RenderOutcome Workspace::render(const Content& content, std::string_view language) const {
  return abswiki::render(*registry_, resources(), content, language);
}

std::vector<Suggestion> Workspace::suggest(std::string_view text,
                                           std::string_view language) const {
  return abswiki::suggest(text, language, rules_, catalog_, lexicon_, items_);
}

StoredContent Workspace::store_content(std::string_view text,
                                       const std::optional<std::string>& item) {
  Content content = parse_content(text);
  if (item && !is_item_id(*item)) {
    throw Error(ErrorCode::invalid_document, "'" + *item + "' is not an item id");
  }
  StoredContent out;
  out.diagnostics = check(content);
  std::unique_lock lock(content_mutex_);
  if (item) {
    out.id = *item;
  } else {
    do {
      out.id = "scratch-" + std::to_string(next_scratch_++);
    } while (contents_.count(out.id) > 0);
  }
  contents_[out.id] = std::move(content);
  return out;
}

std::optional<Content> Workspace::find_content(std::string_view id) const {
  std::shared_lock lock(content_mutex_);
  auto it = contents_.find(id);
  if (it == contents_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Workspace::content_ids() const {
  std::shared_lock lock(content_mutex_);
  std::vector<std::string> out;
  for (const auto& [id, c] : contents_) out.push_back(id);
  return out;
}

std::vector<std::string> Workspace::put_constructor(ConstructorSpec spec) {
  catalog_.put(std::move(spec));
  registry_->clear_cache();
  std::vector<std::string> broken;
  std::shared_lock lock(content_mutex_);
  for (const auto& [id, content] : contents_) {
    if (!validate(content).empty()) broken.push_back(id);
  }
  return broken;
}

void Workspace::put_function(FunctionDef def) {
  if (registry_->contains(def.id)) {
    registry_->update_function(std::move(def));
  } else {
    registry_->register_function(std::move(def));
  }
}

void Workspace::put_lexeme(Lexeme lexeme) {
  lexicon_.put(std::move(lexeme));
  registry_->clear_cache();
}

void Workspace::put_item(Item item) {
  items_.put(std::move(item));
  registry_->clear_cache();
}

bool Workspace::remove_lexeme(std::string_view id) {
  bool removed = lexicon_.remove(id);
  registry_->clear_cache();
  return removed;
}

}  // namespace abswiki
