#include "abswiki/content.hpp"

#include <algorithm>
#include <charconv>

#include "abswiki/catalog.hpp"
#include "abswiki/error.hpp"
#include "abswiki/notation.hpp"
#include "abswiki/phrase.hpp"

namespace abswiki {

namespace {

using notation::Token;
using notation::TokenKind;
using notation::TokenStream;

constexpr std::size_t max_nesting = 256;

class ContentParser {
 public:
  explicit ContentParser(std::string_view text) : tokens_(notation::tokenize(text)) {}

  Content parse_document() {
    if (!tokens_.at(TokenKind::identifier)) tokens_.fail({"constructor"});
    // A single-word label followed by `(Qid)` is an item, which is not a document root.
    if (tokens_.at(TokenKind::identifier, 1) ||
        (tokens_.at(TokenKind::lparen, 1) && tokens_.at(TokenKind::item_id, 2) &&
         tokens_.at(TokenKind::rparen, 3))) {
      tokens_.fail({"constructor"});
    }
    Content content{parse_instantiation()};
    tokens_.expect(TokenKind::end);
    return content;
  }

  Value parse_single_value() {
    Value v = parse_value();
    tokens_.expect(TokenKind::end);
    return v;
  }

 private:
  struct DepthGuard {
    explicit DepthGuard(ContentParser& p) : parser(p) {
      if (++parser.depth_ > max_nesting) parser.tokens_.fail({}, "nesting too deep");
    }
    ~DepthGuard() { --parser.depth_; }
    ContentParser& parser;
  };

  Value parse_value() {
    DepthGuard guard(*this);
    const Token& t = tokens_.peek();
    switch (t.kind) {
      case TokenKind::integer: return Value::integer(tokens_.take().integer);
      case TokenKind::item_id: return Value::item(tokens_.take().text);
      case TokenKind::text: {
        Token text = tokens_.take();
        if (tokens_.at(TokenKind::lparen)) {
          return parse_item_annotation(std::move(text.text));
        }
        return Value::text(std::move(text.text));
      }
      case TokenKind::lbracket: return parse_list();
      case TokenKind::equals: return parse_function_call();
      case TokenKind::identifier: return parse_named();
      default: tokens_.fail({"value"});
    }
  }

  Value parse_item_annotation(std::string label) {
    tokens_.expect(TokenKind::lparen);
    Token id = tokens_.expect(TokenKind::item_id);
    tokens_.expect(TokenKind::rparen);
    return Value::item(std::move(id.text), std::move(label));
  }

  Value parse_list() {
    tokens_.expect(TokenKind::lbracket);
    Value::List items;
    if (!tokens_.at(TokenKind::rbracket)) {
      items.push_back(parse_value());
      while (tokens_.at(TokenKind::comma)) {
        tokens_.take();
        items.push_back(parse_value());
      }
    }
    if (!tokens_.at(TokenKind::rbracket)) tokens_.fail({"','", "']'"});
    tokens_.take();
    return Value::list(std::move(items));
  }

  Value parse_function_call() {
    tokens_.expect(TokenKind::equals);
    Token name = tokens_.expect(TokenKind::identifier);
    tokens_.expect(TokenKind::lparen);
    FunctionCall call{std::move(name.text), {}};
    if (!tokens_.at(TokenKind::rparen)) {
      call.args.push_back(parse_value());
      while (tokens_.at(TokenKind::comma)) {
        tokens_.take();
        call.args.push_back(parse_value());
      }
    }
    if (!tokens_.at(TokenKind::rparen)) tokens_.fail({"','", "')'"});
    tokens_.take();
    return Value::call(std::move(call));
  }

  // identifier-led values: `Name`, `Name(key: v, ...)`, `word word (Qid)`, `word (Qid)`.
  Value parse_named() {
    if (tokens_.at(TokenKind::identifier, 1)) {
      std::string label = tokens_.take().text;
      while (tokens_.at(TokenKind::identifier)) {
        label += ' ';
        label += tokens_.take().text;
      }
      if (!tokens_.at(TokenKind::lparen)) tokens_.fail({"identifier", "'('"});
      return parse_item_annotation(std::move(label));
    }
    if (tokens_.at(TokenKind::lparen, 1) && tokens_.at(TokenKind::item_id, 2) &&
        tokens_.at(TokenKind::rparen, 3)) {
      std::string label = tokens_.take().text;
      return parse_item_annotation(std::move(label));
    }
    return Value::instantiation(parse_instantiation());
  }

  Instantiation parse_instantiation() {
    Instantiation inst;
    inst.constructor = tokens_.expect(TokenKind::identifier).text;
    if (!tokens_.at(TokenKind::lparen)) return inst;
    tokens_.take();
    if (!tokens_.at(TokenKind::rparen)) {
      parse_argument(inst);
      while (tokens_.at(TokenKind::comma)) {
        tokens_.take();
        parse_argument(inst);
      }
    }
    if (!tokens_.at(TokenKind::rparen)) tokens_.fail({"','", "')'"});
    tokens_.take();
    return inst;
  }

  void parse_argument(Instantiation& inst) {
    if (!tokens_.at(TokenKind::identifier)) tokens_.fail({"key"});
    const Token& key_token = tokens_.peek();
    std::string key = key_token.text;
    if (inst.find(key) != nullptr) tokens_.fail({"key"}, "duplicate key '" + key + "'");
    tokens_.take();
    tokens_.expect(TokenKind::colon);
    inst.arguments.push_back(Argument{std::move(key), parse_value()});
  }

  TokenStream tokens_;
  std::size_t depth_ = 0;
};

// Bare words when every word is a plain identifier separated by single spaces.
bool label_is_bare(std::string_view label) {
  if (label.empty()) return false;
  std::size_t start = 0;
  for (;;) {
    auto space = label.find(' ', start);
    auto word = label.substr(start, space == std::string_view::npos ? label.npos : space - start);
    if (!notation::is_plain_identifier(word)) return false;
    if (space == std::string_view::npos) return true;
    start = space + 1;
  }
}

class Serializer {
 public:
  explicit Serializer(const Catalog* catalog) : catalog_(catalog) {}

  void value(std::string& out, const Value& v) const {
    switch (v.kind()) {
      case Value::Kind::integer: out += std::to_string(v.as_integer()); break;
      case Value::Kind::boolean: out += v.as_boolean() ? "true" : "false"; break;
      case Value::Kind::text: out += notation::quote(v.as_text()); break;
      case Value::Kind::item: {
        const auto& item = v.as_item();
        if (!item.label.empty()) {
          out += label_is_bare(item.label) ? item.label : notation::quote(item.label);
          out += " (";
          out += item.id;
          out += ')';
        } else {
          out += item.id;
        }
        break;
      }
      case Value::Kind::list: {
        out += '[';
        bool first = true;
        for (const auto& element : v.as_list()) {
          if (!first) out += ", ";
          first = false;
          value(out, element);
        }
        out += ']';
        break;
      }
      case Value::Kind::function_call: {
        const auto& call = v.as_function_call();
        out += '=';
        out += call.function;
        out += '(';
        for (std::size_t i = 0; i < call.args.size(); ++i) {
          if (i > 0) out += ", ";
          value(out, call.args[i]);
        }
        out += ')';
        break;
      }
      case Value::Kind::instantiation: instantiation(out, v.as_instantiation()); break;
      case Value::Kind::features:
        out += '{';
        out += v.as_features().to_string();
        out += '}';
        break;
      case Value::Kind::phrase: out += v.as_phrase().debug_string(); break;
    }
  }

  void instantiation(std::string& out, const Instantiation& inst) const {
    out += inst.constructor;
    if (inst.arguments.empty()) return;
    out += '(';
    bool first = true;
    for (const Argument* arg : ordered(inst)) {
      if (!first) out += ", ";
      first = false;
      out += arg->key;
      out += ": ";
      value(out, arg->value);
    }
    out += ')';
  }

 private:
  std::vector<const Argument*> ordered(const Instantiation& inst) const {
    std::vector<const Argument*> args;
    args.reserve(inst.arguments.size());
    for (const auto& a : inst.arguments) args.push_back(&a);
    std::shared_ptr<const ConstructorSpec> spec =
        catalog_ != nullptr ? catalog_->find(inst.constructor) : nullptr;
    auto rank = [&](const Argument* a) -> std::size_t {
      if (!spec) return 0;
      for (std::size_t i = 0; i < spec->keys.size(); ++i) {
        if (spec->keys[i].id == a->key) return i;
      }
      return spec->keys.size();
    };
    std::sort(args.begin(), args.end(), [&](const Argument* a, const Argument* b) {
      auto ra = rank(a);
      auto rb = rank(b);
      return ra != rb ? ra < rb : a->key < b->key;
    });
    return args;
  }

  const Catalog* catalog_;
};

// Rebuilds the spine from the root down to `path`, applying `leaf` at the end.
template <typename Leaf>
Value rebuild(const Value& current, const Path& path, std::size_t step, Leaf&& leaf);

template <typename Leaf>
Instantiation rebuild_instantiation(const Instantiation& inst, const Path& path,
                                    std::size_t step, Leaf&& leaf) {
  const auto* key = std::get_if<std::string>(&path[step]);
  if (key == nullptr) {
    throw Error(ErrorCode::path_not_found, "cannot index a constructor with a number",
                to_string(path));
  }
  Instantiation out = inst;
  auto it = std::find_if(out.arguments.begin(), out.arguments.end(),
                         [&](const Argument& a) { return a.key == *key; });
  bool last = step + 1 == path.size();
  if (last) {
    std::optional<Value> replacement = leaf(it == out.arguments.end() ? nullptr : &it->value);
    if (!replacement) {
      if (it == out.arguments.end()) {
        throw Error(ErrorCode::path_not_found, "no key '" + *key + "'", to_string(path));
      }
      out.arguments.erase(it);
    } else if (it == out.arguments.end()) {
      out.arguments.push_back(Argument{*key, std::move(*replacement)});
    } else {
      it->value = std::move(*replacement);
    }
    return out;
  }
  if (it == out.arguments.end()) {
    throw Error(ErrorCode::path_not_found, "no key '" + *key + "'", to_string(path));
  }
  it->value = rebuild(it->value, path, step + 1, leaf);
  return out;
}

template <typename Leaf>
Value rebuild(const Value& current, const Path& path, std::size_t step, Leaf&& leaf) {
  if (current.is(Value::Kind::instantiation)) {
    return Value::instantiation(
        rebuild_instantiation(current.as_instantiation(), path, step, leaf));
  }
  if (current.is(Value::Kind::list)) {
    const auto* index = std::get_if<std::size_t>(&path[step]);
    const auto& items = current.as_list();
    if (index == nullptr || *index >= items.size()) {
      throw Error(ErrorCode::path_not_found, "list index out of range", to_string(path));
    }
    Value::List out = items;
    if (step + 1 == path.size()) {
      std::optional<Value> replacement = leaf(&out[*index]);
      if (replacement) {
        out[*index] = std::move(*replacement);
      } else {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(*index));
      }
    } else {
      out[*index] = rebuild(out[*index], path, step + 1, leaf);
    }
    return Value::list(std::move(out));
  }
  throw Error(ErrorCode::path_not_found,
              "cannot descend into " + std::string(to_string(current.kind())), to_string(path));
}

}  // namespace

std::string to_string(const Path& path) {
  std::string out;
  for (const auto& step : path) {
    if (const auto* key = std::get_if<std::string>(&step)) {
      if (!out.empty()) out += '.';
      out += *key;
    } else {
      out += '[';
      out += std::to_string(std::get<std::size_t>(step));
      out += ']';
    }
  }
  return out;
}

Path parse_path(std::string_view text) {
  Path path;
  std::size_t i = 0;
  auto fail = [&](const std::string& what) -> void {
    throw SyntaxError(1, i + 1, what, {"key", "'['"});
  };
  while (i < text.size()) {
    if (text[i] == '[') {
      std::size_t close = text.find(']', i);
      if (close == std::string_view::npos) fail("unterminated index");
      std::size_t index = 0;
      auto digits = text.substr(i + 1, close - i - 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
      if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) {
        fail("index '" + std::string(digits) + "'");
      }
      path.emplace_back(index);
      i = close + 1;
      continue;
    }
    if (text[i] == '.') {
      if (path.empty()) fail("'.'");
      ++i;
    }
    std::size_t end = i;
    while (end < text.size() && text[end] != '.' && text[end] != '[') ++end;
    auto key = text.substr(i, end - i);
    if (!notation::is_plain_identifier(key)) fail("key '" + std::string(key) + "'");
    path.emplace_back(std::string(key));
    i = end;
  }
  return path;
}

Content parse_content(std::string_view text) { return ContentParser(text).parse_document(); }

Value parse_value(std::string_view text) { return ContentParser(text).parse_single_value(); }

std::string serialize_content(const Content& content, const Catalog* catalog) {
  std::string out;
  Serializer(catalog).instantiation(out, content.root);
  return out;
}

std::string serialize_value(const Value& value, const Catalog* catalog) {
  std::string out;
  Serializer(catalog).value(out, value);
  return out;
}

const Value* value_at(const Content& content, const Path& path) {
  if (path.empty()) return nullptr;
  const auto* key = std::get_if<std::string>(&path[0]);
  if (key == nullptr) return nullptr;
  const Value* current = content.root.find(*key);
  for (std::size_t i = 1; current != nullptr && i < path.size(); ++i) {
    if (const auto* k = std::get_if<std::string>(&path[i])) {
      current = current->is(Value::Kind::instantiation) ? current->as_instantiation().find(*k)
                                                        : nullptr;
    } else {
      auto index = std::get<std::size_t>(path[i]);
      if (!current->is(Value::Kind::list) || index >= current->as_list().size()) return nullptr;
      current = &current->as_list()[index];
    }
  }
  return current;
}

Content edit_value(const Content& content, const Path& path, Value value) {
  if (path.empty()) {
    throw Error(ErrorCode::path_not_found, "cannot replace the document root", "");
  }
  auto leaf = [&](const Value*) -> std::optional<Value> { return value; };
  return Content{rebuild_instantiation(content.root, path, 0, leaf)};
}

Content remove_value(const Content& content, const Path& path) {
  if (path.empty()) {
    throw Error(ErrorCode::path_not_found, "cannot remove the document root", "");
  }
  auto leaf = [](const Value*) -> std::optional<Value> { return std::nullopt; };
  return Content{rebuild_instantiation(content.root, path, 0, leaf)};
}

}  // namespace abswiki
