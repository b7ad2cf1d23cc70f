#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "abswiki/features.hpp"

namespace abswiki {

struct Instantiation;
struct FunctionCall;
struct Phrase;

/// Reference to a knowledge-base item. `label` is the optional display annotation
/// carried by the notation (`San Francisco (Q62)`); it plays no part in resolution.
struct ItemRef {
  std::string id;
  std::string label;

  bool operator==(const ItemRef&) const = default;
};

/// True for `Q[1-9][0-9]*`.
bool is_item_id(std::string_view text) noexcept;

/// Immutable tagged value shared by content trees and the function evaluator.
///
/// Content documents only ever contain integers, text, items, lists, function calls
/// and instantiations. Booleans, feature bundles and phrases appear as intermediate
/// results of registry functions. Compound alternatives are held by shared pointer to
/// const, so copies are cheap and a Value can be shared across threads.
class Value {
 public:
  enum class Kind : std::uint8_t {
    integer,
    boolean,
    text,
    item,
    list,
    function_call,
    instantiation,
    features,
    phrase,
  };
  using List = std::vector<Value>;

  Value() : data_(std::int64_t{0}) {}

  static Value integer(std::int64_t v) { return Value(Data{v}); }
  static Value boolean(bool v) { return Value(Data{v}); }
  static Value text(std::string v) { return Value(Data{std::move(v)}); }
  static Value item(std::string id, std::string label = {}) {
    return Value(Data{ItemRef{std::move(id), std::move(label)}});
  }
  static Value list(List items) {
    return Value(Data{std::make_shared<const List>(std::move(items))});
  }
  static Value call(FunctionCall call);
  static Value instantiation(Instantiation inst);
  static Value features(FeatureBundle bundle) { return Value(Data{std::move(bundle)}); }
  static Value phrase(std::shared_ptr<const Phrase> p) { return Value(Data{std::move(p)}); }

  Kind kind() const noexcept { return static_cast<Kind>(data_.index()); }
  bool is(Kind k) const noexcept { return kind() == k; }

  // Accessors throw Error(type_error) on a kind mismatch.
  std::int64_t as_integer() const;
  bool as_boolean() const;
  const std::string& as_text() const;
  const ItemRef& as_item() const;
  const List& as_list() const;
  const FunctionCall& as_function_call() const;
  const Instantiation& as_instantiation() const;
  const FeatureBundle& as_features() const;
  const Phrase& as_phrase() const;
  const std::shared_ptr<const Phrase>& phrase_ptr() const;

  friend bool operator==(const Value& a, const Value& b);

 private:
  using Data = std::variant<std::int64_t, bool, std::string, ItemRef, std::shared_ptr<const List>,
                            std::shared_ptr<const FunctionCall>,
                            std::shared_ptr<const Instantiation>, FeatureBundle,
                            std::shared_ptr<const Phrase>>;
  explicit Value(Data d) : data_(std::move(d)) {}

  Data data_;
};

std::string_view to_string(Value::Kind kind) noexcept;

struct Argument {
  std::string key;
  Value value;
};

/// A constructor with its keys filled. Argument order is as written; equality ignores it.
struct Instantiation {
  std::string constructor;
  std::vector<Argument> arguments;

  const Value* find(std::string_view key) const noexcept;
  friend bool operator==(const Instantiation& a, const Instantiation& b);
};

struct FunctionCall {
  std::string function;
  std::vector<Value> args;

  friend bool operator==(const FunctionCall&, const FunctionCall&) = default;
};

}  // namespace abswiki
