#include "abswiki/value.hpp"

#include <algorithm>

#include "abswiki/error.hpp"
#include "abswiki/phrase.hpp"

namespace abswiki {

bool is_item_id(std::string_view text) noexcept {
  if (text.size() < 2 || text[0] != 'Q' || text[1] < '1' || text[1] > '9') return false;
  return std::all_of(text.begin() + 2, text.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string_view to_string(Value::Kind kind) noexcept {
  switch (kind) {
    case Value::Kind::integer: return "integer";
    case Value::Kind::boolean: return "boolean";
    case Value::Kind::text: return "text";
    case Value::Kind::item: return "item";
    case Value::Kind::list: return "list";
    case Value::Kind::function_call: return "function call";
    case Value::Kind::instantiation: return "instantiation";
    case Value::Kind::features: return "features";
    case Value::Kind::phrase: return "phrase";
  }
  return "?";
}

namespace {

[[noreturn]] void mismatch(Value::Kind want, Value::Kind got) {
  throw Error(ErrorCode::type_error, "expected " + std::string(to_string(want)) + ", got " +
                                         std::string(to_string(got)));
}

}  // namespace

Value Value::call(FunctionCall call) {
  return Value(Data{std::make_shared<const FunctionCall>(std::move(call))});
}

Value Value::instantiation(Instantiation inst) {
  return Value(Data{std::make_shared<const Instantiation>(std::move(inst))});
}

std::int64_t Value::as_integer() const {
  if (!is(Kind::integer)) mismatch(Kind::integer, kind());
  return std::get<std::int64_t>(data_);
}

bool Value::as_boolean() const {
  if (!is(Kind::boolean)) mismatch(Kind::boolean, kind());
  return std::get<bool>(data_);
}

const std::string& Value::as_text() const {
  if (!is(Kind::text)) mismatch(Kind::text, kind());
  return std::get<std::string>(data_);
}

const ItemRef& Value::as_item() const {
  if (!is(Kind::item)) mismatch(Kind::item, kind());
  return std::get<ItemRef>(data_);
}

const Value::List& Value::as_list() const {
  if (!is(Kind::list)) mismatch(Kind::list, kind());
  return *std::get<std::shared_ptr<const List>>(data_);
}

const FunctionCall& Value::as_function_call() const {
  if (!is(Kind::function_call)) mismatch(Kind::function_call, kind());
  return *std::get<std::shared_ptr<const FunctionCall>>(data_);
}

const Instantiation& Value::as_instantiation() const {
  if (!is(Kind::instantiation)) mismatch(Kind::instantiation, kind());
  return *std::get<std::shared_ptr<const Instantiation>>(data_);
}

const FeatureBundle& Value::as_features() const {
  if (!is(Kind::features)) mismatch(Kind::features, kind());
  return std::get<FeatureBundle>(data_);
}

const Phrase& Value::as_phrase() const { return *phrase_ptr(); }

const std::shared_ptr<const Phrase>& Value::phrase_ptr() const {
  if (!is(Kind::phrase)) mismatch(Kind::phrase, kind());
  return std::get<std::shared_ptr<const Phrase>>(data_);
}

bool operator==(const Value& a, const Value& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Value::Kind::integer: return a.as_integer() == b.as_integer();
    case Value::Kind::boolean: return a.as_boolean() == b.as_boolean();
    case Value::Kind::text: return a.as_text() == b.as_text();
    case Value::Kind::item: return a.as_item() == b.as_item();
    case Value::Kind::list: return a.as_list() == b.as_list();
    case Value::Kind::function_call: return a.as_function_call() == b.as_function_call();
    case Value::Kind::instantiation: return a.as_instantiation() == b.as_instantiation();
    case Value::Kind::features: return a.as_features() == b.as_features();
    case Value::Kind::phrase: return a.as_phrase() == b.as_phrase();
  }
  return false;
}

const Value* Instantiation::find(std::string_view key) const noexcept {
  for (const auto& arg : arguments) {
    if (arg.key == key) return &arg.value;
  }
  return nullptr;
}

bool operator==(const Instantiation& a, const Instantiation& b) {
  if (a.constructor != b.constructor || a.arguments.size() != b.arguments.size()) return false;
  for (const auto& arg : a.arguments) {
    const Value* other = b.find(arg.key);
    if (other == nullptr || !(*other == arg.value)) return false;
  }
  return true;
}

}  // namespace abswiki
