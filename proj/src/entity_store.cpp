#include "abswiki/entity_store.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "httplib.h"

#include "abswiki/error.hpp"
#include "abswiki/json_io.hpp"

namespace abswiki {

namespace {

void check_item(const Item& item) {
  if (!is_item_id(item.id)) {
    throw Error(ErrorCode::invalid_document, "'" + item.id + "' is not an item id");
  }
  if (item.labels.empty()) {
    throw Error(ErrorCode::invalid_document, "item " + item.id + " has no label");
  }
}

void collect(const Value& v, std::set<std::string>& out) {
  switch (v.kind()) {
    case Value::Kind::item: out.insert(v.as_item().id); break;
    case Value::Kind::list:
      for (const auto& e : v.as_list()) collect(e, out);
      break;
    case Value::Kind::instantiation:
      for (const auto& a : v.as_instantiation().arguments) collect(a.value, out);
      break;
    case Value::Kind::function_call:
      for (const auto& a : v.as_function_call().args) collect(a, out);
      break;
    default: break;
  }
}

std::vector<Item> parse_items(std::string_view document) {
  try {
    json doc = json::parse(document);
    const json& list = doc.is_object() && doc.contains("items") ? doc.at("items") : doc;
    if (!list.is_array()) throw Error(ErrorCode::parse_error, "expected an array of items");
    std::vector<Item> items;
    for (const auto& j : list) {
      Item item = j.get<Item>();
      check_item(item);
      items.push_back(std::move(item));
    }
    return items;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
}

}  // namespace

void to_json(json& j, const Item& item) {
  j = json{{"id", item.id}, {"labels", item.labels}};
  if (!item.lexemes.empty()) j["lexemes"] = item.lexemes;
}

void from_json(const json& j, Item& item) {
  item.id = j.at("id").get<std::string>();
  item.labels = j.at("labels").get<std::map<std::string, std::string>>();
  item.lexemes = j.value("lexemes", std::map<std::string, std::string>{});
}

Label EntityStore::get_label(std::string_view id, std::string_view language) const {
  std::shared_lock lock(mutex_);
  auto it = items_.find(id);
  if (it == items_.end()) throw Error(ErrorCode::unknown_item, "unknown item " + std::string(id));
  const auto& labels = it->second.labels;
  if (auto l = labels.find(std::string(language)); l != labels.end()) {
    return Label{l->second, l->first, false};
  }
  if (auto l = labels.find("en"); l != labels.end()) return Label{l->second, l->first, true};
  return Label{labels.begin()->second, labels.begin()->first, true};
}

std::optional<Item> EntityStore::find(std::string_view id) const {
  std::shared_lock lock(mutex_);
  auto it = items_.find(id);
  if (it == items_.end()) return std::nullopt;
  return it->second;
}

bool EntityStore::contains(std::string_view id) const {
  std::shared_lock lock(mutex_);
  return items_.count(id) > 0;
}

std::vector<std::string> EntityStore::ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, item] : items_) out.push_back(id);
  return out;
}

std::map<std::string, Item> EntityStore::snapshot() const {
  std::shared_lock lock(mutex_);
  return {items_.begin(), items_.end()};
}

void EntityStore::put(Item item) {
  check_item(item);
  std::unique_lock lock(mutex_);
  items_[item.id] = std::move(item);
}

bool EntityStore::remove(std::string_view id) {
  std::unique_lock lock(mutex_);
  auto it = items_.find(id);
  if (it == items_.end()) return false;
  items_.erase(it);
  return true;
}

std::size_t EntityStore::import_items(std::string_view document) {
  auto items = parse_items(document);
  std::unique_lock lock(mutex_);
  for (auto& item : items) items_[item.id] = std::move(item);
  return items.size();
}

std::size_t EntityStore::import_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return import_items(buffer.str());
}

std::size_t EntityStore::load_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::io_error, "not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::size_t count = 0;
  for (const auto& file : files) {
    // Single-item files are plain objects; wrap them so import_items accepts them.
    json doc = read_json_file(file);
    if (doc.is_object() && !doc.contains("items")) doc = json::array({doc});
    count += import_items(doc.dump());
  }
  return count;
}

void EntityStore::save_item(const std::filesystem::path& dir, const Item& item) {
  write_json_file(dir / (item.id + ".json"), json(item));
}

std::vector<std::string> EntityStore::missing_items(const Content& content) const {
  std::vector<std::string> out;
  std::shared_lock lock(mutex_);
  for (auto& id : referenced_items(content)) {
    if (items_.count(id) == 0) out.push_back(std::move(id));
  }
  return out;
}

std::vector<std::string> EntityStore::find_by_label(std::string_view label,
                                                    std::string_view language) const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, item] : items_) {
    auto l = item.labels.find(std::string(language));
    if (l != item.labels.end() && l->second == label) out.push_back(id);
  }
  return out;
}

Item EntityStore::fetch_remote(std::string_view id, const RemoteConfig& config) {
  if (!config.enabled) throw Error(ErrorCode::network_error, "remote fetch is disabled");
  if (!is_item_id(id)) {
    throw Error(ErrorCode::invalid_document, "'" + std::string(id) + "' is not an item id");
  }
  httplib::Client client(config.base_url);
  client.set_connection_timeout(config.timeout_seconds, 0);
  client.set_read_timeout(config.timeout_seconds, 0);
  client.set_follow_location(true);
  const std::string path = "/wiki/Special:EntityData/" + std::string(id) + ".json";
  auto res = client.Get(path);
  if (!res) {
    throw Error(ErrorCode::network_error,
                config.base_url + path + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::network_error,
                config.base_url + path + ": HTTP " + std::to_string(res->status));
  }
  Item item;
  try {
    json doc = json::parse(res->body);
    const json& entity = doc.at("entities").at(std::string(id));
    item.id = entity.at("id").get<std::string>();
    for (const auto& [lang, label] : entity.at("labels").items()) {
      item.labels[lang] = label.at("value").get<std::string>();
    }
    check_item(item);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("entity response: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::parse_error, std::string("entity response: ") + e.what());
  }
  std::unique_lock lock(mutex_);
  // Keep locally authored lexeme links when refreshing labels.
  if (auto it = items_.find(item.id); it != items_.end()) item.lexemes = it->second.lexemes;
  items_[item.id] = item;
  return item;
}

std::vector<std::string> referenced_items(const Content& content) {
  std::set<std::string> ids;
  for (const auto& a : content.root.arguments) collect(a.value, ids);
  return {ids.begin(), ids.end()};
}

}  // namespace abswiki
