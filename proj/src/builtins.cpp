#include <limits>

#include "abswiki/error.hpp"
#include "abswiki/registry.hpp"

namespace abswiki {

namespace {

TypeRef type(std::string_view text) { return TypeRef::parse(text); }

FunctionDef builtin_def(std::string id, std::vector<Param> params, std::string_view ret,
                        std::vector<TestCase> tests = {}) {
  FunctionDef def;
  def.id = id;
  def.labels["en"] = id;
  def.params = std::move(params);
  def.return_type = type(ret);
  def.tests = std::move(tests);
  def.implementations.push_back(
      Implementation{id + "_builtin", Implementation::Kind::builtin, id, {}});
  return def;
}

TestCase ints(std::int64_t x, std::int64_t y, std::int64_t expected) {
  return TestCase{{Value::integer(x), Value::integer(y)}, Value::integer(expected)};
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw Error(ErrorCode::type_error, "integer overflow");
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw Error(ErrorCode::type_error, "integer overflow");
  return out;
}

}  // namespace

void register_core_functions(Registry& registry) {
  registry.define_type(SemanticType{"positive_integer", SemanticType::Kind::registry_defined,
                                    [](const Value& v) {
                                      return v.is(Value::Kind::integer) && v.as_integer() >= 0;
                                    },
                                    "integers >= 0"});
  registry.define_type(SemanticType{"instantiation", SemanticType::Kind::registry_defined,
                                    [](const Value& v) {
                                      return v.is(Value::Kind::instantiation);
                                    },
                                    "constructor instantiation"});
  registry.define_type(SemanticType{
      "features", SemanticType::Kind::registry_defined,
      [](const Value& v) { return v.is(Value::Kind::features); }, "grammatical feature bundle"});
  registry.define_type(SemanticType{"phrase", SemanticType::Kind::registry_defined,
                                    [](const Value& v) { return v.is(Value::Kind::phrase); },
                                    "grammatical phrase"});

  registry.register_builtin("if", [](std::span<const Value> a, CallContext&) {
    return a[0].as_boolean() ? a[1] : a[2];
  });
  registry.register_builtin("is_zero", [](std::span<const Value> a, CallContext&) {
    return Value::boolean(a[0].as_integer() == 0);
  });
  registry.register_builtin("add", [](std::span<const Value> a, CallContext&) {
    return Value::integer(checked_add(a[0].as_integer(), a[1].as_integer()));
  });
  registry.register_builtin("subtract", [](std::span<const Value> a, CallContext&) {
    auto x = a[0].as_integer();
    auto y = a[1].as_integer();
    return Value::integer(x > y ? x - y : 0);
  });
  registry.register_builtin("multiply", [](std::span<const Value> a, CallContext&) {
    return Value::integer(checked_mul(a[0].as_integer(), a[1].as_integer()));
  });
  registry.register_builtin("equal", [](std::span<const Value> a, CallContext&) {
    return Value::boolean(a[0] == a[1]);
  });
  registry.register_builtin("not", [](std::span<const Value> a, CallContext&) {
    return Value::boolean(!a[0].as_boolean());
  });
  registry.register_builtin("concat", [](std::span<const Value> a, CallContext&) {
    Value::List out = a[0].as_list();
    const auto& tail = a[1].as_list();
    out.insert(out.end(), tail.begin(), tail.end());
    return Value::list(std::move(out));
  });
  registry.register_builtin("map", [](std::span<const Value> a, CallContext& ctx) {
    Value::List out;
    for (const auto& item : a[0].as_list()) out.push_back(ctx.call(a[1].as_text(), {item}));
    return Value::list(std::move(out));
  });
  registry.register_builtin("join", [](std::span<const Value> a, CallContext&) {
    std::string out;
    bool first = true;
    for (const auto& item : a[0].as_list()) {
      if (!first) out += a[1].as_text();
      first = false;
      out += item.as_text();
    }
    return Value::text(std::move(out));
  });
  registry.register_builtin("length", [](std::span<const Value> a, CallContext&) {
    return Value::integer(static_cast<std::int64_t>(a[0].as_list().size()));
  });

  const Param x{"x", type("positive_integer")};
  const Param y{"y", type("positive_integer")};
  std::vector<FunctionDef> defs;
  defs.push_back(builtin_def("if",
                             {{"condition", type("boolean")}, {"then", type("any")},
                              {"else", type("any")}},
                             "any"));
  defs.push_back(builtin_def("is_zero", {x}, "boolean",
                             {{{Value::integer(0)}, Value::boolean(true)},
                              {{Value::integer(3)}, Value::boolean(false)}}));
  defs.push_back(builtin_def("add", {x, y}, "positive_integer", {ints(2, 3, 5), ints(0, 0, 0)}));
  defs.push_back(
      builtin_def("subtract", {x, y}, "positive_integer", {ints(5, 3, 2), ints(1, 2, 0)}));

  FunctionDef multiply = builtin_def("multiply", {x, y}, "positive_integer",
                                     {ints(2, 3, 6), ints(0, 9, 0), ints(10, 10, 100),
                                      ints(12, 15, 180)});
  multiply.implementations.push_back(Implementation{"multiply_composition",
                                                    Implementation::Kind::composition,
                                                    {},
                                                    std::string(multiply_composition_source)});
  defs.push_back(std::move(multiply));

  defs.push_back(builtin_def("equal", {{"a", type("any")}, {"b", type("any")}}, "boolean"));
  defs.push_back(builtin_def("not", {{"value", type("boolean")}}, "boolean"));
  defs.push_back(builtin_def("concat", {{"a", type("list(any)")}, {"b", type("list(any)")}},
                             "list(any)"));
  defs.push_back(builtin_def("map", {{"items", type("list(any)")}, {"function", type("text")}},
                             "list(any)"));
  defs.push_back(builtin_def("join", {{"items", type("list(text)")}, {"separator", type("text")}},
                             "text"));
  defs.push_back(builtin_def("length", {{"items", type("list(any)")}}, "positive_integer"));
  registry.register_functions(std::move(defs));
}

}  // namespace abswiki
