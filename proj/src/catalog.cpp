#include "abswiki/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <set>

#include "abswiki/error.hpp"
#include "abswiki/json_io.hpp"

namespace abswiki {

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

}  // namespace

// ---- ValueDescriptor --------------------------------------------------------

std::string ValueDescriptor::to_string() const {
  switch (kind) {
    case Kind::integer: return "integer";
    case Kind::text: return "text";
    case Kind::item: return "item";
    case Kind::enumeration: return "enum(" + std::string(abswiki::to_string(result_type)) + ")";
    case Kind::constructor:
      return "constructor(" + std::string(abswiki::to_string(result_type)) + ")";
    case Kind::list: return "list(" + element->to_string() + ")";
  }
  return "?";
}

ValueDescriptor ValueDescriptor::parse(std::string_view text) {
  text = strip(text);
  ValueDescriptor d;
  if (text == "integer") {
    d.kind = Kind::integer;
    return d;
  }
  if (text == "text") {
    d.kind = Kind::text;
    return d;
  }
  if (text == "item") {
    d.kind = Kind::item;
    return d;
  }
  auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw Error(ErrorCode::invalid_document, "bad value descriptor '" + std::string(text) + "'");
  }
  auto head = text.substr(0, open);
  auto inner = text.substr(open + 1, text.size() - open - 2);
  if (head == "list") {
    d.kind = Kind::list;
    d.element = std::make_shared<const ValueDescriptor>(parse(inner));
    return d;
  }
  if (head == "enum" || head == "constructor") {
    auto type = parse_grammatical_type(strip(inner));
    if (!type) {
      throw Error(ErrorCode::invalid_document,
                  "unknown grammatical type '" + std::string(inner) + "'");
    }
    d.kind = head == "enum" ? Kind::enumeration : Kind::constructor;
    d.result_type = *type;
    return d;
  }
  throw Error(ErrorCode::invalid_document, "bad value descriptor '" + std::string(text) + "'");
}

bool operator==(const ValueDescriptor& a, const ValueDescriptor& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ValueDescriptor::Kind::enumeration:
    case ValueDescriptor::Kind::constructor: return a.result_type == b.result_type;
    case ValueDescriptor::Kind::list: return *a.element == *b.element;
    default: return true;
  }
}

const KeySpec* ConstructorSpec::key(std::string_view key_id) const noexcept {
  for (const auto& k : keys) {
    if (k.id == key_id) return &k;
  }
  return nullptr;
}

// ---- JSON -------------------------------------------------------------------

void to_json(json& j, const ConstructorSpec& spec) {
  json keys = json::array();
  for (const auto& k : spec.keys) {
    json accepted = json::array();
    for (const auto& d : k.accepted) accepted.push_back(d.to_string());
    keys.push_back({{"id", k.id}, {"labels", k.labels}, {"required", k.required},
                    {"accepted", accepted}});
  }
  j = json{{"id", spec.id},
           {"labels", spec.labels},
           {"doc", spec.doc},
           {"keys", keys},
           {"result_type", std::string(to_string(spec.result_type))}};
}

void from_json(const json& j, ConstructorSpec& spec) {
  spec.id = j.at("id").get<std::string>();
  spec.labels = j.value("labels", std::map<std::string, std::string>{});
  spec.doc = j.value("doc", std::string{});
  auto type = j.at("result_type").get<std::string>();
  auto parsed = parse_grammatical_type(type);
  if (!parsed) throw Error(ErrorCode::invalid_document, "unknown result_type '" + type + "'");
  spec.result_type = *parsed;
  spec.keys.clear();
  for (const auto& k : j.value("keys", json::array())) {
    KeySpec key;
    key.id = k.at("id").get<std::string>();
    key.labels = k.value("labels", std::map<std::string, std::string>{});
    key.required = k.value("required", false);
    for (const auto& d : k.at("accepted")) {
      key.accepted.push_back(ValueDescriptor::parse(d.get<std::string>()));
    }
    spec.keys.push_back(std::move(key));
  }
}

void to_json(json& j, const Diagnostic& d) {
  j = json{{"path", to_string(d.path)}, {"code", d.code}, {"message", d.message}};
}

// ---- Catalog ----------------------------------------------------------------

Catalog::Catalog(const Catalog& other) {
  std::shared_lock lock(other.mutex_);
  specs_ = other.specs_;
}

Catalog& Catalog::operator=(const Catalog& other) {
  if (this == &other) return *this;
  std::map<std::string, std::shared_ptr<const ConstructorSpec>, std::less<>> copy;
  {
    std::shared_lock lock(other.mutex_);
    copy = other.specs_;
  }
  std::unique_lock lock(mutex_);
  specs_ = std::move(copy);
  return *this;
}

void Catalog::put(ConstructorSpec spec) {
  if (spec.id.empty()) throw Error(ErrorCode::invalid_document, "constructor id is empty");
  std::set<std::string> seen;
  for (const auto& k : spec.keys) {
    if (!seen.insert(k.id).second) {
      throw Error(ErrorCode::invalid_document,
                  "constructor " + spec.id + " repeats key '" + k.id + "'");
    }
    if (k.accepted.empty()) {
      throw Error(ErrorCode::invalid_document,
                  "key " + spec.id + "." + k.id + " accepts no value types");
    }
  }
  auto ptr = std::make_shared<const ConstructorSpec>(std::move(spec));
  std::unique_lock lock(mutex_);
  specs_[ptr->id] = std::move(ptr);
}

bool Catalog::remove(std::string_view id) {
  std::unique_lock lock(mutex_);
  auto it = specs_.find(id);
  if (it == specs_.end()) return false;
  specs_.erase(it);
  return true;
}

std::shared_ptr<const ConstructorSpec> Catalog::find(std::string_view id) const {
  std::shared_lock lock(mutex_);
  auto it = specs_.find(id);
  return it == specs_.end() ? nullptr : it->second;
}

std::vector<std::string> Catalog::ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  out.reserve(specs_.size());
  for (const auto& [id, spec] : specs_) out.push_back(id);
  return out;
}

std::size_t Catalog::size() const {
  std::shared_lock lock(mutex_);
  return specs_.size();
}

Catalog Catalog::load_directory(const std::filesystem::path& dir) {
  Catalog catalog;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::io_error, "not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    json doc = read_json_file(file);
    auto spec = with_document_errors(file.string(), [&] { return doc.get<ConstructorSpec>(); });
    catalog.put(std::move(spec));
  }
  return catalog;
}

void Catalog::save_spec(const std::filesystem::path& dir, const ConstructorSpec& spec) {
  write_json_file(dir / (spec.id + ".json"), json(spec));
}

// ---- Validation -------------------------------------------------------------

namespace {

class Validator {
 public:
  Validator(const Catalog& catalog, const ValidationOptions& options)
      : catalog_(catalog), options_(options) {}

  std::vector<Diagnostic> take() { return std::move(diagnostics_); }

  void root(const Instantiation& inst) {
    auto spec = catalog_.find(inst.constructor);
    if (!spec) {
      report({}, "UNKNOWN_CONSTRUCTOR", "unknown constructor '" + inst.constructor + "'");
      return;
    }
    if (spec->result_type != GrammaticalType::article_text) {
      report({}, "NOT_AN_ARTICLE",
             "root constructor '" + inst.constructor + "' does not produce article-text");
    }
    arguments(inst, *spec, {});
  }

  void value(const Value& v, const std::vector<ValueDescriptor>& accepted, const Path& path) {
    switch (v.kind()) {
      case Value::Kind::integer:
      case Value::Kind::text:
        if (!any_shallow(v, accepted)) mismatch(v, accepted, path);
        return;
      case Value::Kind::item:
        if (!is_item_id(v.as_item().id)) {
          report(path, "INVALID_ITEM_ID", "'" + v.as_item().id + "' is not a Q-identifier");
          return;
        }
        if (!any_shallow(v, accepted)) mismatch(v, accepted, path);
        return;
      case Value::Kind::list: list(v.as_list(), accepted, path); return;
      case Value::Kind::instantiation: {
        const auto& inst = v.as_instantiation();
        auto spec = catalog_.find(inst.constructor);
        if (!spec) {
          report(path, "UNKNOWN_CONSTRUCTOR", "unknown constructor '" + inst.constructor + "'");
          return;
        }
        if (!any_shallow(v, accepted)) mismatch(v, accepted, path);
        arguments(inst, *spec, path);
        return;
      }
      case Value::Kind::function_call: {
        if (!options_.function_return_type) return;
        const auto& call = v.as_function_call();
        auto type = options_.function_return_type(call.function);
        if (!type) {
          report(path, "UNKNOWN_FUNCTION", "unknown function '" + call.function + "'");
          return;
        }
        if (!function_result_accepted(*type, accepted)) {
          report(path, "TYPE_MISMATCH",
                 "function '" + call.function + "' returns " + *type + ", expected " +
                     describe(accepted));
        }
        return;
      }
      default: mismatch(v, accepted, path);
    }
  }

 private:
  void arguments(const Instantiation& inst, const ConstructorSpec& spec, const Path& path) {
    std::set<std::string> seen;
    for (const auto& arg : inst.arguments) {
      Path at = path;
      at.emplace_back(arg.key);
      if (!seen.insert(arg.key).second) {
        report(at, "DUPLICATE_KEY", "key '" + arg.key + "' given twice");
        continue;
      }
      const KeySpec* key = spec.key(arg.key);
      if (key == nullptr) {
        report(at, "UNKNOWN_KEY", "constructor '" + spec.id + "' has no key '" + arg.key + "'");
        continue;
      }
      value(arg.value, key->accepted, at);
    }
    for (const auto& key : spec.keys) {
      if (key.required && inst.find(key.id) == nullptr) {
        Path at = path;
        at.emplace_back(key.id);
        report(at, "MISSING_REQUIRED_KEY",
               "constructor '" + spec.id + "' requires key '" + key.id + "'");
      }
    }
  }

  void list(const Value::List& items, const std::vector<ValueDescriptor>& accepted,
            const Path& path) {
    std::vector<const ValueDescriptor*> candidates;
    for (const auto& d : accepted) {
      if (d.kind == ValueDescriptor::Kind::list) candidates.push_back(d.element.get());
    }
    if (candidates.empty()) {
      report(path, "TYPE_MISMATCH", "list given where " + describe(accepted) + " expected");
      return;
    }
    // Elements must all conform to one element descriptor.
    for (const ValueDescriptor* element : candidates) {
      bool all = std::all_of(items.begin(), items.end(),
                             [&](const Value& v) { return shallow(v, *element); });
      if (all) {
        for (std::size_t i = 0; i < items.size(); ++i) {
          Path at = path;
          at.emplace_back(i);
          value(items[i], {*element}, at);
        }
        return;
      }
    }
    std::vector<ValueDescriptor> elements;
    for (const auto* e : candidates) elements.push_back(*e);
    bool each_fits_something = true;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (!any_shallow(items[i], elements)) {
        each_fits_something = false;
        Path at = path;
        at.emplace_back(i);
        mismatch(items[i], elements, at);
      }
    }
    if (each_fits_something) {
      report(path, "HETEROGENEOUS_LIST", "list elements do not share one accepted type");
    }
  }

  bool shallow(const Value& v, const ValueDescriptor& d) const {
    using K = ValueDescriptor::Kind;
    switch (v.kind()) {
      case Value::Kind::integer: return d.kind == K::integer;
      case Value::Kind::text: return d.kind == K::text;
      case Value::Kind::item: return d.kind == K::item;
      case Value::Kind::list:
        if (d.kind != K::list) return false;
        return std::all_of(v.as_list().begin(), v.as_list().end(),
                           [&](const Value& e) { return shallow(e, *d.element); });
      case Value::Kind::instantiation: {
        if (d.kind != K::enumeration && d.kind != K::constructor) return false;
        auto spec = catalog_.find(v.as_instantiation().constructor);
        if (!spec || spec->result_type != d.result_type) return false;
        return d.kind == K::constructor || spec->is_enumeration();
      }
      case Value::Kind::function_call: return true;
      default: return false;
    }
  }

  bool any_shallow(const Value& v, const std::vector<ValueDescriptor>& accepted) const {
    return std::any_of(accepted.begin(), accepted.end(),
                       [&](const ValueDescriptor& d) { return shallow(v, d); });
  }

  static bool function_result_accepted(const std::string& type,
                                       const std::vector<ValueDescriptor>& accepted) {
    using K = ValueDescriptor::Kind;
    std::optional<K> kind;
    if (type == "integer" || type == "positive_integer") kind = K::integer;
    if (type == "text") kind = K::text;
    if (type == "item") kind = K::item;
    if (type.rfind("list", 0) == 0) kind = K::list;
    if (!kind) return true;  // opaque or dynamic result; checked when evaluated
    return std::any_of(accepted.begin(), accepted.end(),
                       [&](const ValueDescriptor& d) { return d.kind == *kind; });
  }

  static std::string describe(const std::vector<ValueDescriptor>& accepted) {
    std::string out;
    for (std::size_t i = 0; i < accepted.size(); ++i) {
      if (i > 0) out += " | ";
      out += accepted[i].to_string();
    }
    return out;
  }

  void mismatch(const Value& v, const std::vector<ValueDescriptor>& accepted, const Path& path) {
    std::string what(to_string(v.kind()));
    if (v.is(Value::Kind::instantiation)) {
      auto spec = catalog_.find(v.as_instantiation().constructor);
      what = "constructor '" + v.as_instantiation().constructor + "'";
      if (spec) what += " (" + std::string(to_string(spec->result_type)) + ")";
    }
    report(path, "TYPE_MISMATCH", what + " given where " + describe(accepted) + " expected");
  }

  void report(const Path& path, std::string code, std::string message) {
    diagnostics_.push_back(Diagnostic{path, std::move(code), std::move(message)});
  }

  const Catalog& catalog_;
  const ValidationOptions& options_;
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace

std::vector<Diagnostic> validate(const Content& content, const Catalog& catalog,
                                 const ValidationOptions& options) {
  Validator v(catalog, options);
  v.root(content.root);
  return v.take();
}

std::vector<Diagnostic> validate_value(const Value& value,
                                       const std::vector<ValueDescriptor>& accepted,
                                       const Catalog& catalog, const Path& at,
                                       const ValidationOptions& options) {
  Validator v(catalog, options);
  v.value(value, accepted, at);
  return v.take();
}

}  // namespace abswiki
