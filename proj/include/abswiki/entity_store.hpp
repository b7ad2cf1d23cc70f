#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "abswiki/content.hpp"

namespace abswiki {

/// Knowledge-base entity: per-language labels plus optional links from a language to
/// the lexeme that lexicalizes the item as a noun phrase.
struct Item {
  std::string id;
  std::map<std::string, std::string> labels;
  std::map<std::string, std::string> lexemes;

  bool operator==(const Item&) const = default;
};

struct Label {
  std::string text;
  std::string language;  // language the label was actually found in
  bool fallback = false;
};

struct RemoteConfig {
  bool enabled = false;
  std::string base_url = "https://www.wikidata.org";
  int timeout_seconds = 10;
};

class EntityStore {
 public:
  /// Fallback chain: language, then "en", then the first labelled language.
  /// Throws Error(unknown_item).
  Label get_label(std::string_view id, std::string_view language) const;

  std::optional<Item> find(std::string_view id) const;
  bool contains(std::string_view id) const;
  std::vector<std::string> ids() const;
  std::map<std::string, Item> snapshot() const;

  /// Insert or replace. Throws Error(invalid_document) for a bad id or no labels.
  void put(Item item);
  bool remove(std::string_view id);

  /// Upserts every item of `document` (an array of items or `{"items": [...]}`).
  /// All-or-nothing: throws Error(parse_error) and leaves the store unchanged if any
  /// item is malformed.
  std::size_t import_items(std::string_view document);
  std::size_t import_file(const std::filesystem::path& file);
  /// Imports every `*.json` file in `dir`.
  std::size_t load_directory(const std::filesystem::path& dir);
  static void save_item(const std::filesystem::path& dir, const Item& item);

  /// Items referenced by `content` that the store does not know, sorted.
  std::vector<std::string> missing_items(const Content& content) const;

  /// Ids whose label in `language` equals `label` exactly.
  std::vector<std::string> find_by_label(std::string_view label, std::string_view language) const;

  /// Fetches `{base}/wiki/Special:EntityData/{id}.json`, maps it to an Item and upserts it.
  /// Throws Error(network_error) when disabled or unreachable, Error(parse_error) on a
  /// malformed response.
  Item fetch_remote(std::string_view id, const RemoteConfig& config);

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, Item, std::less<>> items_;
};

/// Every item id mentioned anywhere in `content`, sorted and unique.
std::vector<std::string> referenced_items(const Content& content);

}  // namespace abswiki
