#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "abswiki/error.hpp"
#include "abswiki/expression.hpp"
#include "abswiki/registry.hpp"

using namespace abswiki;

namespace {

Registry& core() {
  static Registry* r = [] {
    auto* reg = new Registry();
    register_core_functions(*reg);
    return reg;
  }();
  return *r;
}

EvalOptions pin(std::string fn, std::string impl) {
  EvalOptions o;
  o.pinned.emplace(std::move(fn), std::move(impl));
  return o;
}

std::vector<Value> ints(std::int64_t a, std::int64_t b) {
  return {Value::integer(a), Value::integer(b)};
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::io_error;
}

FunctionDef unary(std::string id, std::string body) {
  FunctionDef def;
  def.id = id;
  def.params = {{"x", TypeRef::parse("positive_integer")}};
  def.return_type = TypeRef::parse("positive_integer");
  def.implementations.push_back({id + "_c", Implementation::Kind::composition, {}, body});
  return def;
}

}  // namespace

TEST(TypeRef, ParsesNestedLists) {
  auto t = TypeRef::parse("list(list(text))");
  EXPECT_EQ(t.to_string(), "list(list(text))");
  EXPECT_THROW(TypeRef::parse("list(text"), Error);
  EXPECT_THROW(TypeRef::parse(""), Error);
}

TEST(Registry, MultiplyInterfaceRegisters) {
  Registry r;
  register_core_functions(r);
  auto def = r.find("multiply");
  ASSERT_TRUE(def);
  EXPECT_EQ(def->params.size(), 2u);
  EXPECT_EQ(def->params[0].type.to_string(), "positive_integer");
  EXPECT_EQ(def->return_type.to_string(), "positive_integer");
  EXPECT_EQ(def->implementations.size(), 2u);
}

TEST(Registry, DuplicateIdRejected) {
  Registry r;
  register_core_functions(r);
  EXPECT_EQ(code_of([&] { r.register_function(unary("add", "x")); }), ErrorCode::duplicate_id);
  EXPECT_EQ(r.find("add")->implementations.size(), 1u);
}

TEST(Registry, UnknownFunctionInComposition) {
  Registry r;
  register_core_functions(r);
  Implementation bad{"froz_user", Implementation::Kind::composition, {}, "froz(x)"};
  EXPECT_EQ(code_of([&] { r.add_implementation("is_zero", bad); }), ErrorCode::unknown_function);
  EXPECT_EQ(code_of([&] { r.add_implementation("nope", bad); }), ErrorCode::unknown_function);
  EXPECT_EQ(r.find("is_zero")->implementations.size(), 1u);
}

TEST(Registry, CompositionNameChecks) {
  Registry r;
  register_core_functions(r);
  EXPECT_EQ(code_of([&] { r.register_function(unary("f", "add(x, z)")); }),
            ErrorCode::unknown_param);
  EXPECT_EQ(code_of([&] { r.register_function(unary("g", "add(x)")); }),
            ErrorCode::arity_mismatch);
  EXPECT_EQ(code_of([&] { r.register_function(unary("h", "add(x: x, q: 1)")); }),
            ErrorCode::unknown_param);
  EXPECT_FALSE(r.contains("f"));
  r.register_function(unary("k", "add(y: 1, x: x)"));
  EXPECT_EQ(r.evaluate("k", {Value::integer(4)}), Value::integer(5));
}

TEST(Registry, InterfaceWithoutImplementations) {
  Registry r;
  register_core_functions(r);
  FunctionDef def = unary("bare", "x");
  def.implementations.clear();
  def.tests.push_back({{Value::integer(1)}, Value::integer(1)});
  r.register_function(def);
  EXPECT_EQ(code_of([&] { r.evaluate("bare", {Value::integer(1)}); }),
            ErrorCode::no_implementation);
  auto report = r.run_tests("bare");
  EXPECT_TRUE(report.implementations.empty());
  EXPECT_TRUE(report.agreement.empty());
}

TEST(Evaluate, MultiplyZeroBaseCase) {
  EXPECT_EQ(core().evaluate("multiply", ints(0, 7), pin("multiply", "multiply_composition")),
            Value::integer(0));
}

TEST(Evaluate, SubtractClampsAtZero) {
  EXPECT_EQ(core().evaluate("subtract", ints(1, 2)), Value::integer(0));
}

// Oracle: schoolbook repeated addition, independent of both implementations.
TEST(Evaluate, MultiplyCompositionMatchesOracleOnGrid) {
  for (std::int64_t x = 0; x <= 20; ++x) {
    for (std::int64_t y = 0; y <= 20; ++y) {
      std::int64_t expected = 0;
      for (std::int64_t i = 0; i < x; ++i) expected += y;
      auto c = core().evaluate("multiply", ints(x, y), pin("multiply", "multiply_composition"));
      auto b = core().evaluate("multiply", ints(x, y), pin("multiply", "multiply_builtin"));
      ASSERT_EQ(c, Value::integer(expected)) << x << "*" << y;
      ASSERT_EQ(b, c) << x << "*" << y;
    }
  }
}

TEST(Evaluate, NaturalSubtractionGrid) {
  for (std::int64_t x = 0; x <= 20; ++x) {
    for (std::int64_t y = 0; y <= 20; ++y) {
      std::int64_t expected = 0;
      for (std::int64_t v = x, k = 0; k < y && v > 0; ++k) expected = --v;
      if (y == 0) expected = x;
      ASSERT_EQ(core().evaluate("subtract", ints(x, y)), Value::integer(expected));
    }
  }
}

TEST(Evaluate, TypeErrors) {
  EXPECT_EQ(code_of([&] { core().evaluate("add", ints(-1, 2)); }), ErrorCode::type_error);
  EXPECT_EQ(code_of([&] { core().evaluate("add", {Value::integer(1)}); }), ErrorCode::type_error);
  EXPECT_EQ(code_of([&] { core().evaluate("add", {Value::text("1"), Value::integer(1)}); }),
            ErrorCode::type_error);
  EXPECT_EQ(code_of([&] { core().evaluate("nope", {}); }), ErrorCode::unknown_function);
  EXPECT_EQ(code_of([&] {
              core().evaluate("add", ints(std::numeric_limits<std::int64_t>::max(), 1));
            }),
            ErrorCode::type_error);
}

TEST(Evaluate, DepthLimit) {
  for (int d : {1, 5, 256, max_depth_limit}) {
    EvalOptions o = pin("multiply", "multiply_composition");
    o.depth_limit = d;
    // multiply(d, 1) needs d + 1 frames (the base case is its own frame).
    EXPECT_EQ(code_of([&] { core().evaluate("multiply", ints(d + 1, 1), o); }),
              ErrorCode::depth_exceeded)
        << d;
    EXPECT_EQ(core().evaluate("multiply", ints(d - 1, 1), o), Value::integer(d - 1)) << d;
  }
}

TEST(Evaluate, DepthLimitIsClamped) {
  EvalOptions o = pin("multiply", "multiply_composition");
  o.depth_limit = 1'000'000;
  EXPECT_EQ(code_of([&] { core().evaluate("multiply", ints(max_depth_limit + 1, 1), o); }),
            ErrorCode::depth_exceeded);
}

TEST(Evaluate, PreAndPostconditions) {
  Registry r;
  register_core_functions(r);
  FunctionDef half = unary("half", "subtract(x, 1)");
  half.preconditions = {"not(is_zero(x))"};
  half.postconditions = {"equal(result, 0)"};
  half.tests.push_back({{Value::integer(1)}, Value::integer(0)});
  r.register_function(half);
  EXPECT_EQ(code_of([&] { r.evaluate("half", {Value::integer(0)}); }),
            ErrorCode::precondition_failed);
  // Postconditions are test-only by default.
  EXPECT_EQ(r.evaluate("half", {Value::integer(5)}), Value::integer(4));
  EvalOptions strict;
  strict.check_postconditions = true;
  EXPECT_EQ(code_of([&] { r.evaluate("half", {Value::integer(5)}, strict); }),
            ErrorCode::postcondition_failed);
  EXPECT_TRUE(r.run_tests("half").implementations[0].all_passed);
}

TEST(Evaluate, IfIsLazy) {
  Registry r;
  register_core_functions(r);
  // The untaken branch would recurse forever.
  r.register_function(unary("loop", "if(condition: true, then: x, else: loop(x))"));
  EXPECT_EQ(r.evaluate("loop", {Value::integer(3)}), Value::integer(3));
}

TEST(Evaluate, ListHelpers) {
  auto list = Value::list({Value::text("a"), Value::text("b")});
  EXPECT_EQ(core().evaluate("join", {list, Value::text(", ")}), Value::text("a, b"));
  EXPECT_EQ(core().evaluate("length", {list}), Value::integer(2));
  EXPECT_EQ(core().evaluate("concat", {list, list}).as_list().size(), 4u);
  auto nums = Value::list({Value::integer(0), Value::integer(2)});
  EXPECT_EQ(core().evaluate("map", {nums, Value::text("is_zero")}),
            Value::list({Value::boolean(true), Value::boolean(false)}));
}

TEST(RunTests, MultiplyBothPass) {
  auto report = core().run_tests("multiply");
  ASSERT_EQ(report.implementations.size(), 2u);
  for (const auto& ir : report.implementations) {
    EXPECT_TRUE(ir.all_passed) << ir.implementation;
    EXPECT_EQ(ir.tests.size(), 4u);
  }
  EXPECT_EQ(report.agreement[0][1], 4u);
  EXPECT_EQ(report.agreement[0][1], report.agreement[1][0]);
}

TEST(RunTests, WrongImplementationFails) {
  Registry r;
  register_core_functions(r);
  r.add_implementation("multiply", {"multiply_wrong", Implementation::Kind::composition, {},
                                    "add(x, y)"});
  auto report = r.run_tests("multiply");
  ASSERT_EQ(report.implementations.size(), 3u);
  const auto& wrong = report.implementations[2];
  EXPECT_FALSE(wrong.all_passed);
  EXPECT_FALSE(wrong.tests[0].passed);
  EXPECT_EQ(*wrong.tests[0].actual, Value::integer(5));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(report.agreement[i][j], report.agreement[j][i]);
  }
  // (0, 9) -> 9 vs 0, (2,3) 5 vs 6 ... only (0,0)-style coincidences would agree.
  EXPECT_EQ(report.agreement[0][2], 0u);
}

TEST(Select, PrefersBuiltinMultiply) {
  EXPECT_EQ(core().select_implementation("multiply"), "multiply_builtin");
}

TEST(Select, SingleAndFailing) {
  Registry r;
  register_core_functions(r);
  EXPECT_EQ(r.select_implementation("add"), "add_builtin");
  FunctionDef def = unary("bad", "add(x, 1)");
  def.tests.push_back({{Value::integer(1)}, Value::integer(1)});
  r.register_function(def);
  EXPECT_EQ(code_of([&] { r.select_implementation("bad"); }),
            ErrorCode::no_passing_implementation);
}

TEST(Select, TieBreakIsLexicographic) {
  Registry r;
  register_core_functions(r);
  FunctionDef def = unary("ident", "x");
  def.implementations.push_back({"a_ident", Implementation::Kind::composition, {}, "x"});
  r.register_function(def);
  // No tests: both pass vacuously with equal zero time.
  EXPECT_EQ(r.select_implementation("ident"), "a_ident");
}

TEST(Cache, SecondPureCallHits) {
  Registry r;
  register_core_functions(r);
  auto first = r.evaluate("add", ints(2, 2));
  auto stats = r.cache_stats("add");
  EXPECT_EQ(stats.misses, 1u);
  EXPECT_EQ(stats.hits, 0u);
  auto second = r.evaluate("add", ints(2, 2));
  EXPECT_EQ(first, second);
  EXPECT_EQ(r.cache_stats("add").hits, 1u);
  r.clear_cache();
  EXPECT_EQ(r.cache_stats().entries, 0u);
  r.evaluate("add", ints(2, 2));
  r.evaluate("add", ints(2, 2));
  EXPECT_EQ(r.cache_stats("add").misses, 1u);
  EXPECT_EQ(r.cache_stats("add").hits, 1u);
}

TEST(Cache, ImpureBypasses) {
  Registry r;
  register_core_functions(r);
  FunctionDef def = unary("noisy", "add(x, 1)");
  def.pure = false;
  r.register_function(def);
  r.evaluate("noisy", {Value::integer(1)});
  r.evaluate("noisy", {Value::integer(1)});
  auto stats = r.cache_stats("noisy");
  EXPECT_EQ(stats.hits, 0u);
  EXPECT_EQ(stats.entries, 0u);
}

TEST(Cache, LruEvictsOldest) {
  RegistryOptions opts;
  opts.cache_capacity = 3;
  Registry r(opts);
  register_core_functions(r);
  for (int i = 0; i < 5; ++i) r.evaluate("is_zero", {Value::integer(i)});
  EXPECT_EQ(r.cache_stats("is_zero").entries, 3u);
  r.evaluate("is_zero", {Value::integer(4)});
  EXPECT_EQ(r.cache_stats("is_zero").hits, 1u);
  r.evaluate("is_zero", {Value::integer(0)});
  EXPECT_EQ(r.cache_stats("is_zero").hits, 1u);
}

TEST(Cache, StatsMonotoneUnderRandomCalls) {
  Registry r;
  register_core_functions(r);
  std::mt19937 rng(7);
  CacheStats prev;
  for (int i = 0; i < 500; ++i) {
    auto x = static_cast<std::int64_t>(rng() % 10);
    r.evaluate("add", ints(x, x));
    auto now = r.cache_stats();
    ASSERT_GE(now.hits, prev.hits);
    ASSERT_GE(now.misses, prev.misses);
    prev = now;
  }
  EXPECT_GE(prev.hits, 1u);
}

// Random well-typed calls never yield a value outside the return type.
TEST(Property, TypeSafety) {
  std::mt19937 rng(11);
  const std::vector<std::string> fns = {"add", "subtract", "multiply", "is_zero", "equal"};
  for (int i = 0; i < 2000; ++i) {
    const auto& fn = fns[rng() % fns.size()];
    auto def = core().find(fn);
    std::vector<Value> args;
    for (std::size_t p = 0; p < def->params.size(); ++p) {
      args.push_back(Value::integer(static_cast<std::int64_t>(rng() % 1000)));
    }
    Value out = core().evaluate(fn, args);
    ASSERT_TRUE(core().conforms(out, def->return_type)) << fn;
  }
}

TEST(Property, PurityAcrossClears) {
  Registry r;
  register_core_functions(r);
  auto before = r.evaluate("multiply", ints(7, 9), pin("multiply", "multiply_composition"));
  r.evaluate("multiply", ints(7, 9));
  r.clear_cache();
  EXPECT_EQ(r.evaluate("multiply", ints(7, 9)), before);
}

TEST(Concurrency, ParallelEvaluation) {
  Registry r;
  register_core_functions(r);
  std::vector<std::thread> threads;
  std::atomic<int> wrong{0};
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      for (std::int64_t i = 0; i < 200; ++i) {
        auto v = r.evaluate("multiply", ints(i % 15, t));
        if (v != Value::integer((i % 15) * t)) ++wrong;
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(wrong.load(), 0);
}

TEST(Persistence, RoundTrip) {
  auto dir = std::filesystem::temp_directory_path() / "abswiki_registry_rt";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  auto def = *core().find("multiply");
  Registry::save_function(dir, def);
  FunctionDef extra = unary("double_it", "multiply(x, 2)");
  extra.tests.push_back({{Value::integer(3)}, Value::integer(6)});
  Registry::save_function(dir, extra);

  Registry fresh;
  register_core_functions(fresh);
  std::filesystem::remove(dir / "multiply.json");
  fresh.load_directory(dir);
  EXPECT_EQ(fresh.evaluate("double_it", {Value::integer(21)}), Value::integer(42));
  EXPECT_TRUE(fresh.run_tests("double_it").implementations[0].all_passed);
  std::filesystem::remove_all(dir);
}
