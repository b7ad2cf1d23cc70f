#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "abswiki/expression.hpp"
#include "abswiki/value.hpp"

namespace abswiki {

/// Type expression: a type id, or `list(<type>)`.
struct TypeRef {
  std::string id;
  std::shared_ptr<const TypeRef> element;  // set iff id == "list"

  std::string to_string() const;
  /// Throws Error(invalid_document).
  static TypeRef parse(std::string_view text);
};

/// Primitive types (integer, text, boolean, item, any, list) are built in. Registry-defined
/// types such as positive_integer carry a validity predicate over values.
struct SemanticType {
  enum class Kind : std::uint8_t { primitive, registry_defined };

  std::string id;
  Kind kind = Kind::registry_defined;
  std::function<bool(const Value&)> predicate;
  std::string doc;
};

struct Param {
  std::string name;
  TypeRef type;
};

struct TestCase {
  std::vector<Value> args;
  Value expected;
};

struct Implementation {
  enum class Kind : std::uint8_t { builtin, composition };

  std::string id;
  Kind kind = Kind::builtin;
  std::string builtin;  // host builtin name, for Kind::builtin
  std::string body;     // composition expression source, for Kind::composition
};

struct FunctionDef {
  std::string id;
  std::map<std::string, std::string> labels;
  std::vector<Param> params;
  TypeRef return_type;
  bool pure = true;
  std::vector<TestCase> tests;
  std::vector<std::string> preconditions;   // boolean expressions over the params
  std::vector<std::string> postconditions;  // may also refer to `result`
  std::vector<Implementation> implementations;
};

struct EvalOptions {
  bool use_cache = true;
  /// function id -> implementation id, applied to every call of that function during
  /// this evaluation (including recursive ones). Pinned functions bypass the cache.
  std::map<std::string, std::string, std::less<>> pinned;
  std::optional<int> depth_limit;
  std::optional<bool> check_postconditions;
};

class Registry;

/// Handle passed to host builtins so they can call back into the evaluator with the
/// current options and depth.
class CallContext {
 public:
  Value call(std::string_view function, std::vector<Value> args);
  const Registry& registry() const noexcept { return registry_; }
  const EvalOptions& options() const noexcept;

 private:
  friend class Registry;
  struct State;
  CallContext(const Registry& registry, State& state) : registry_(registry), state_(state) {}

  const Registry& registry_;
  State& state_;
};

using BuiltinFn = std::function<Value(std::span<const Value> args, CallContext& ctx)>;

struct TestOutcome {
  bool passed = false;
  std::optional<Value> actual;
  std::string error;  // error code and message when the call threw
  std::chrono::nanoseconds median_time{0};
};

struct ImplementationReport {
  std::string implementation;
  std::vector<TestOutcome> tests;
  bool all_passed = true;
  double mean_time_ns = 0.0;
};

struct EvalReport {
  std::string function;
  std::vector<ImplementationReport> implementations;
  /// agreement[i][j]: number of tests where implementations i and j both returned
  /// and returned equal values. Symmetric by construction.
  std::vector<std::vector<std::size_t>> agreement;
};

struct CacheStats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::size_t entries = 0;
};

struct RegistryOptions {
  std::size_t cache_capacity = 10'000;  // per function
  int depth_limit = 256;
  bool check_postconditions = false;
  int timing_runs = 5;
};

/// Largest accepted depth limit; deeper settings are clamped.
inline constexpr int max_depth_limit = 2048;

/// Function registry and evaluator. Definitions: concurrent reads, serialized writes.
/// evaluate() is reentrant and may be called from several threads.
class Registry {
 public:
  explicit Registry(RegistryOptions options = {});
  ~Registry();
  Registry(const Registry&) = delete;
  Registry& operator=(const Registry&) = delete;

  const RegistryOptions& options() const noexcept { return options_; }

  void define_type(SemanticType type);
  bool has_type(std::string_view id) const;
  bool conforms(const Value& value, const TypeRef& type) const;

  /// Makes a host function available to `builtin` implementations.
  void register_builtin(std::string name, BuiltinFn fn);
  bool has_builtin(std::string_view name) const;

  /// Registers the interface, then each listed implementation. Throws DUPLICATE_ID
  /// (id taken) or the implementation's validation error (nothing is registered then).
  std::string register_function(FunctionDef def);
  /// Registers several definitions so that they may reference each other.
  void register_functions(std::vector<FunctionDef> defs);
  /// Replaces an existing definition under the same id (UNKNOWN_FUNCTION otherwise).
  void update_function(FunctionDef def);
  std::string add_implementation(std::string_view function, Implementation impl);

  bool contains(std::string_view id) const;
  std::optional<FunctionDef> find(std::string_view id) const;
  std::vector<std::string> ids() const;

  /// Throws UNKNOWN_FUNCTION, TYPE_ERROR, PRECONDITION_FAILED, POSTCONDITION_FAILED,
  /// DEPTH_EXCEEDED, NO_IMPLEMENTATION.
  Value evaluate(std::string_view function, std::vector<Value> args,
                 const EvalOptions& options = {}) const;

  /// Runs every implementation against every test case, timing each (median of
  /// options().timing_runs uncached runs). Throws UNKNOWN_FUNCTION.
  EvalReport run_tests(std::string_view function) const;
  /// Fastest implementation passing all tests; ties broken by implementation id.
  /// Throws UNKNOWN_FUNCTION, NO_PASSING_IMPLEMENTATION.
  std::string select_implementation(std::string_view function) const;

  void clear_cache();
  CacheStats cache_stats() const;
  CacheStats cache_stats(std::string_view function) const;

  /// Loads one function document per `*.json` file in `dir`.
  void load_directory(const std::filesystem::path& dir);
  static void save_function(const std::filesystem::path& dir, const FunctionDef& def);

 private:
  friend class CallContext;
  struct Entry;
  struct Cache;

  std::shared_ptr<const Entry> entry(std::string_view id) const;
  std::shared_ptr<const Entry> compile(const FunctionDef& def) const;
  ExprPtr resolve(const Expr& e, const std::vector<std::string>& scope,
                  const std::string& where) const;
  Value call(CallContext::State& state, std::string_view function,
             std::vector<Value> args) const;
  void check_postconditions(CallContext::State& state, const Entry& e,
                            std::span<const Value> args, const Value& result) const;
  Value eval(CallContext::State& state, const Expr& e, std::span<const Value> env) const;
  std::string choose(const Entry& entry, CallContext::State& state) const;
  void forget(std::string_view id);

  RegistryOptions options_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const Entry>, std::less<>> entries_;
  std::map<std::string, SemanticType, std::less<>> types_;
  std::map<std::string, BuiltinFn, std::less<>> builtins_;
  mutable std::mutex selection_mutex_;
  mutable std::map<std::string, std::string, std::less<>> selected_;
  std::unique_ptr<Cache> cache_;
};

/// Registers the primitive and arithmetic types and the core builtins: if, is_zero, add,
/// subtract (natural), multiply (builtin and composed), equal, not, concat, map, join,
/// length.
void register_core_functions(Registry& registry);

/// Source of the recursive multiply composition.
inline constexpr std::string_view multiply_composition_source =
    "if(condition: is_zero(x), then: 0, else: add(y, multiply(subtract(x, 1), y)))";

}  // namespace abswiki
