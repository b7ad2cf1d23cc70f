#include "abswiki/registry.hpp"

#include <algorithm>
#include <list>
#include <set>
#include <unordered_map>

#include "abswiki/content.hpp"
#include "abswiki/error.hpp"
#include "abswiki/json_io.hpp"

namespace abswiki {

// ---- TypeRef ----------------------------------------------------------------

std::string TypeRef::to_string() const {
  if (element) return "list(" + element->to_string() + ")";
  return id;
}

TypeRef TypeRef::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw Error(ErrorCode::invalid_document, "empty type");
  if (text.rfind("list(", 0) == 0) {
    if (text.back() != ')') {
      throw Error(ErrorCode::invalid_document, "bad type '" + std::string(text) + "'");
    }
    TypeRef t;
    t.id = "list";
    t.element = std::make_shared<const TypeRef>(parse(text.substr(5, text.size() - 6)));
    return t;
  }
  if (text.find_first_of("() ") != std::string_view::npos) {
    throw Error(ErrorCode::invalid_document, "bad type '" + std::string(text) + "'");
  }
  return TypeRef{std::string(text), nullptr};
}

// ---- internal structures ----------------------------------------------------

struct CallContext::State {
  const EvalOptions& options;
  int depth_limit;
  bool check_postconditions;
  int depth = 0;
};

Value CallContext::call(std::string_view function, std::vector<Value> args) {
  return registry_.call(state_, function, std::move(args));
}

const EvalOptions& CallContext::options() const noexcept { return state_.options; }

namespace {

struct CompiledImpl {
  Implementation impl;
  ExprPtr body;
  BuiltinFn builtin;
};

std::string cache_key(std::span<const Value> args) {
  std::string key;
  for (const auto& a : args) {
    key += serialize_value(a);
    key += '\x1f';
  }
  return key;
}

std::string located(const std::string& where, const Expr& e) {
  return where + " at " + std::to_string(e.line) + ":" + std::to_string(e.column);
}

// Guards against selection recursing into itself through the tests it runs.
thread_local std::set<std::string> selecting;

}  // namespace

struct Registry::Entry {
  FunctionDef def;
  std::vector<CompiledImpl> impls;
  std::vector<ExprPtr> pre;
  std::vector<ExprPtr> post;

  const CompiledImpl* impl(std::string_view id) const {
    for (const auto& c : impls) {
      if (c.impl.id == id) return &c;
    }
    return nullptr;
  }
};

struct Registry::Cache {
  struct PerFunction {
    std::list<std::pair<std::string, Value>> order;  // most recent first
    std::unordered_map<std::string, std::list<std::pair<std::string, Value>>::iterator> index;
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
  };

  explicit Cache(std::size_t cap) : capacity(cap) {}

  std::optional<Value> get(std::string_view function, const std::string& key) {
    std::lock_guard lock(mutex);
    auto& f = slot(function);
    auto it = f.index.find(key);
    if (it == f.index.end()) {
      ++f.misses;
      return std::nullopt;
    }
    ++f.hits;
    f.order.splice(f.order.begin(), f.order, it->second);
    return it->second->second;
  }

  void put(std::string_view function, std::string key, Value value) {
    if (capacity == 0) return;
    std::lock_guard lock(mutex);
    auto& f = slot(function);
    auto it = f.index.find(key);
    if (it != f.index.end()) {
      // Same key computed concurrently; equal by purity, keep the latest.
      it->second->second = std::move(value);
      f.order.splice(f.order.begin(), f.order, it->second);
      return;
    }
    f.order.emplace_front(key, std::move(value));
    f.index.emplace(std::move(key), f.order.begin());
    if (f.order.size() > capacity) {
      f.index.erase(f.order.back().first);
      f.order.pop_back();
    }
  }

  PerFunction& slot(std::string_view function) {
    auto it = functions.find(function);
    if (it == functions.end()) it = functions.emplace(std::string(function), PerFunction{}).first;
    return it->second;
  }

  std::mutex mutex;
  std::size_t capacity;
  std::map<std::string, PerFunction, std::less<>> functions;
};

// ---- construction / types ---------------------------------------------------

Registry::Registry(RegistryOptions options)
    : options_(options), cache_(std::make_unique<Cache>(options.cache_capacity)) {
  options_.depth_limit = std::clamp(options_.depth_limit, 1, max_depth_limit);
  auto primitive = [this](std::string id, std::function<bool(const Value&)> pred) {
    types_[id] = SemanticType{id, SemanticType::Kind::primitive, std::move(pred), {}};
  };
  primitive("integer", [](const Value& v) { return v.is(Value::Kind::integer); });
  primitive("text", [](const Value& v) { return v.is(Value::Kind::text); });
  primitive("boolean", [](const Value& v) { return v.is(Value::Kind::boolean); });
  primitive("item", [](const Value& v) { return v.is(Value::Kind::item); });
  primitive("any", [](const Value&) { return true; });
}

Registry::~Registry() = default;

void Registry::define_type(SemanticType type) {
  if (!type.predicate) {
    throw Error(ErrorCode::invalid_document, "type '" + type.id + "' has no validity predicate");
  }
  std::unique_lock lock(mutex_);
  types_[type.id] = std::move(type);
}

bool Registry::has_type(std::string_view id) const {
  std::shared_lock lock(mutex_);
  return id == "list" || types_.count(id) > 0;
}

namespace {

bool conforms_unlocked(const std::map<std::string, SemanticType, std::less<>>& types,
                       const Value& value, const TypeRef& type) {
  if (type.element) {
    if (!value.is(Value::Kind::list)) return false;
    return std::all_of(value.as_list().begin(), value.as_list().end(), [&](const Value& v) {
      return conforms_unlocked(types, v, *type.element);
    });
  }
  auto it = types.find(type.id);
  return it != types.end() && it->second.predicate(value);
}

bool type_known(const std::map<std::string, SemanticType, std::less<>>& types,
                const TypeRef& type) {
  if (type.element) return type_known(types, *type.element);
  return types.count(type.id) > 0;
}

}  // namespace

bool Registry::conforms(const Value& value, const TypeRef& type) const {
  std::shared_lock lock(mutex_);
  return conforms_unlocked(types_, value, type);
}

void Registry::register_builtin(std::string name, BuiltinFn fn) {
  std::unique_lock lock(mutex_);
  builtins_[std::move(name)] = std::move(fn);
}

bool Registry::has_builtin(std::string_view name) const {
  std::shared_lock lock(mutex_);
  return builtins_.count(name) > 0;
}

// ---- definitions ------------------------------------------------------------

namespace {

// Definitions visible while compiling: registered ones plus a pending batch.
using DefLookup = std::function<const FunctionDef*(std::string_view)>;
thread_local const DefLookup* current_lookup = nullptr;

}  // namespace

ExprPtr Registry::resolve(const Expr& e, const std::vector<std::string>& scope,
                          const std::string& where) const {
  auto out = std::make_shared<Expr>(e);
  switch (e.kind) {
    case Expr::Kind::literal: return out;
    case Expr::Kind::param: {
      auto it = std::find(scope.begin(), scope.end(), e.name);
      if (it == scope.end()) {
        throw Error(ErrorCode::unknown_param,
                    "unknown name '" + e.name + "' in " + located(where, e));
      }
      out->param_index = static_cast<std::size_t>(it - scope.begin());
      return out;
    }
    case Expr::Kind::list: {
      for (auto& c : out->children) c = resolve(*c, scope, where);
      return out;
    }
    case Expr::Kind::call: {
      const FunctionDef* target = (*current_lookup)(e.name);
      if (target == nullptr) {
        throw Error(ErrorCode::unknown_function,
                    "unknown function '" + e.name + "' in " + located(where, e));
      }
      std::vector<ExprPtr> ordered(target->params.size());
      if (!e.arg_keys.empty()) {
        for (std::size_t i = 0; i < e.arg_keys.size(); ++i) {
          auto p = std::find_if(target->params.begin(), target->params.end(),
                                [&](const Param& param) { return param.name == e.arg_keys[i]; });
          if (p == target->params.end()) {
            throw Error(ErrorCode::unknown_param, "function '" + e.name + "' has no parameter '" +
                                                      e.arg_keys[i] + "' (" + located(where, e) +
                                                      ")");
          }
          auto& slot = ordered[static_cast<std::size_t>(p - target->params.begin())];
          if (slot) {
            throw Error(ErrorCode::arity_mismatch, "parameter '" + e.arg_keys[i] +
                                                       "' given twice (" + located(where, e) + ")");
          }
          slot = resolve(*e.children[i], scope, where);
        }
        for (std::size_t i = 0; i < ordered.size(); ++i) {
          if (!ordered[i]) {
            throw Error(ErrorCode::arity_mismatch, "missing argument '" +
                                                       target->params[i].name + "' for '" +
                                                       e.name + "' (" + located(where, e) + ")");
          }
        }
      } else {
        if (e.children.size() != target->params.size()) {
          throw Error(ErrorCode::arity_mismatch,
                      "'" + e.name + "' takes " + std::to_string(target->params.size()) +
                          " arguments, " + std::to_string(e.children.size()) + " given (" +
                          located(where, e) + ")");
        }
        for (std::size_t i = 0; i < ordered.size(); ++i) {
          ordered[i] = resolve(*e.children[i], scope, where);
        }
      }
      out->children = std::move(ordered);
      out->arg_keys.clear();
      return out;
    }
  }
  return out;
}

std::shared_ptr<const Registry::Entry> Registry::compile(const FunctionDef& def) const {
  if (def.id.empty()) throw Error(ErrorCode::invalid_document, "function id is empty");
  std::set<std::string> names;
  std::vector<std::string> scope;
  for (const auto& p : def.params) {
    if (!names.insert(p.name).second) {
      throw Error(ErrorCode::invalid_document,
                  "function '" + def.id + "' repeats parameter '" + p.name + "'");
    }
    if (!type_known(types_, p.type)) {
      throw Error(ErrorCode::invalid_document,
                  "unknown type '" + p.type.to_string() + "' for " + def.id + "." + p.name);
    }
    scope.push_back(p.name);
  }
  if (!type_known(types_, def.return_type)) {
    throw Error(ErrorCode::invalid_document,
                "unknown return type '" + def.return_type.to_string() + "' for " + def.id);
  }
  for (const auto& t : def.tests) {
    if (t.args.size() != def.params.size()) {
      throw Error(ErrorCode::arity_mismatch, "test of '" + def.id + "' has " +
                                                 std::to_string(t.args.size()) + " arguments");
    }
  }

  auto entry = std::make_shared<Entry>();
  entry->def = def;
  std::set<std::string> impl_ids;
  for (const auto& impl : def.implementations) {
    if (impl.id.empty() || !impl_ids.insert(impl.id).second) {
      throw Error(ErrorCode::duplicate_id,
                  "implementation id '" + impl.id + "' of '" + def.id + "' is empty or repeated");
    }
    CompiledImpl compiled{impl, nullptr, nullptr};
    if (impl.kind == Implementation::Kind::builtin) {
      auto it = builtins_.find(impl.builtin);
      if (it == builtins_.end()) {
        throw Error(ErrorCode::unknown_function, "no host builtin named '" + impl.builtin + "'");
      }
      compiled.builtin = it->second;
    } else {
      compiled.body = resolve(*parse_expression(impl.body), scope, def.id + "/" + impl.id);
    }
    entry->impls.push_back(std::move(compiled));
  }
  for (const auto& src : def.preconditions) {
    entry->pre.push_back(resolve(*parse_expression(src), scope, def.id + " precondition"));
  }
  auto post_scope = scope;
  post_scope.push_back("result");
  for (const auto& src : def.postconditions) {
    entry->post.push_back(resolve(*parse_expression(src), post_scope, def.id + " postcondition"));
  }
  return entry;
}

std::string Registry::register_function(FunctionDef def) {
  std::string id = def.id;
  std::vector<FunctionDef> batch;
  batch.push_back(std::move(def));
  register_functions(std::move(batch));
  return id;
}

void Registry::register_functions(std::vector<FunctionDef> defs) {
  std::unique_lock lock(mutex_);
  std::map<std::string, const FunctionDef*, std::less<>> pending;
  for (const auto& d : defs) {
    if (entries_.count(d.id) > 0 || !pending.emplace(d.id, &d).second) {
      throw Error(ErrorCode::duplicate_id, "function id '" + d.id + "' is already taken");
    }
  }
  DefLookup lookup = [&](std::string_view id) -> const FunctionDef* {
    if (auto it = pending.find(id); it != pending.end()) return it->second;
    if (auto it = entries_.find(id); it != entries_.end()) return &it->second->def;
    return nullptr;
  };
  current_lookup = &lookup;
  std::vector<std::shared_ptr<const Entry>> compiled;
  try {
    for (const auto& d : defs) compiled.push_back(compile(d));
  } catch (...) {
    current_lookup = nullptr;
    throw;
  }
  current_lookup = nullptr;
  for (auto& e : compiled) entries_[e->def.id] = std::move(e);
  lock.unlock();
  forget({});
}

void Registry::update_function(FunctionDef def) {
  std::unique_lock lock(mutex_);
  if (entries_.count(def.id) == 0) {
    throw Error(ErrorCode::unknown_function, "unknown function '" + def.id + "'");
  }
  DefLookup lookup = [&](std::string_view id) -> const FunctionDef* {
    if (id == def.id) return &def;
    if (auto it = entries_.find(id); it != entries_.end()) return &it->second->def;
    return nullptr;
  };
  current_lookup = &lookup;
  std::shared_ptr<const Entry> compiled;
  try {
    compiled = compile(def);
  } catch (...) {
    current_lookup = nullptr;
    throw;
  }
  current_lookup = nullptr;
  entries_[def.id] = std::move(compiled);
  lock.unlock();
  forget(def.id);
}

std::string Registry::add_implementation(std::string_view function, Implementation impl) {
  std::unique_lock lock(mutex_);
  auto it = entries_.find(function);
  if (it == entries_.end()) {
    throw Error(ErrorCode::unknown_function, "unknown function '" + std::string(function) + "'");
  }
  FunctionDef def = it->second->def;
  if (impl.id.empty()) {
    impl.id = def.id + "_impl" + std::to_string(def.implementations.size() + 1);
  }
  std::string id = impl.id;
  def.implementations.push_back(std::move(impl));
  DefLookup lookup = [&](std::string_view fn) -> const FunctionDef* {
    if (auto e = entries_.find(fn); e != entries_.end()) return &e->second->def;
    return nullptr;
  };
  current_lookup = &lookup;
  std::shared_ptr<const Entry> compiled;
  try {
    compiled = compile(def);
  } catch (...) {
    current_lookup = nullptr;
    throw;
  }
  current_lookup = nullptr;
  it->second = std::move(compiled);
  lock.unlock();
  forget(function);
  return id;
}

void Registry::forget(std::string_view) {
  // A definition change can alter any composition that calls it, so drop everything.
  {
    std::lock_guard lock(selection_mutex_);
    selected_.clear();
  }
  clear_cache();
}

bool Registry::contains(std::string_view id) const {
  std::shared_lock lock(mutex_);
  return entries_.count(id) > 0;
}

std::optional<FunctionDef> Registry::find(std::string_view id) const {
  auto e = entry(id);
  if (!e) return std::nullopt;
  return e->def;
}

std::vector<std::string> Registry::ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, e] : entries_) out.push_back(id);
  return out;
}

std::shared_ptr<const Registry::Entry> Registry::entry(std::string_view id) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : it->second;
}

// ---- evaluation -------------------------------------------------------------

Value Registry::evaluate(std::string_view function, std::vector<Value> args,
                         const EvalOptions& options) const {
  CallContext::State state{
      options, std::clamp(options.depth_limit.value_or(options_.depth_limit), 1, max_depth_limit),
      options.check_postconditions.value_or(options_.check_postconditions)};
  return call(state, function, std::move(args));
}

Value Registry::call(CallContext::State& state, std::string_view function,
                     std::vector<Value> args) const {
  auto e = entry(function);
  if (!e) throw Error(ErrorCode::unknown_function, "unknown function '" + std::string(function) + "'");
  const FunctionDef& def = e->def;
  if (args.size() != def.params.size()) {
    throw Error(ErrorCode::type_error, "'" + def.id + "' takes " +
                                           std::to_string(def.params.size()) + " arguments, " +
                                           std::to_string(args.size()) + " given");
  }
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (!conforms(args[i], def.params[i].type)) {
      throw Error(ErrorCode::type_error, "argument '" + def.params[i].name + "' of '" + def.id +
                                             "' must be " + def.params[i].type.to_string() +
                                             ", got " + serialize_value(args[i]));
    }
  }
  for (std::size_t i = 0; i < e->pre.size(); ++i) {
    Value ok = eval(state, *e->pre[i], args);
    if (!ok.is(Value::Kind::boolean)) {
      throw Error(ErrorCode::type_error, "precondition of '" + def.id + "' is not boolean");
    }
    if (!ok.as_boolean()) {
      throw Error(ErrorCode::precondition_failed,
                  "precondition '" + def.preconditions[i] + "' of '" + def.id + "' failed");
    }
  }

  auto pin = state.options.pinned.find(function);
  bool pinned = pin != state.options.pinned.end();
  bool cacheable = def.pure && state.options.use_cache && !pinned;
  std::string key;
  if (cacheable) {
    key = cache_key(args);
    if (auto hit = cache_->get(def.id, key)) {
      check_postconditions(state, *e, args, *hit);
      return *hit;
    }
  }

  std::string impl_id = pinned ? pin->second : choose(*e, state);
  const CompiledImpl* impl = e->impl(impl_id);
  if (impl == nullptr) {
    throw Error(ErrorCode::no_implementation,
                "'" + def.id + "' has no implementation '" + impl_id + "'");
  }

  Value result;
  if (impl->builtin) {
    CallContext ctx(*this, state);
    result = impl->builtin(args, ctx);
  } else {
    if (state.depth >= state.depth_limit) {
      throw Error(ErrorCode::depth_exceeded, "call depth limit " +
                                                 std::to_string(state.depth_limit) +
                                                 " exceeded in '" + def.id + "'");
    }
    ++state.depth;
    struct Unwind {
      int& depth;
      ~Unwind() { --depth; }
    } unwind{state.depth};
    result = eval(state, *impl->body, args);
  }

  if (!conforms(result, def.return_type)) {
    throw Error(ErrorCode::type_error, "'" + def.id + "/" + impl->impl.id + "' returned " +
                                           serialize_value(result) + ", not a " +
                                           def.return_type.to_string());
  }
  check_postconditions(state, *e, args, result);
  if (cacheable) cache_->put(def.id, std::move(key), result);
  return result;
}

void Registry::check_postconditions(CallContext::State& state, const Entry& e,
                                    std::span<const Value> args, const Value& result) const {
  if (!state.check_postconditions || e.post.empty()) return;
  std::vector<Value> env(args.begin(), args.end());
  env.push_back(result);
  for (std::size_t i = 0; i < e.post.size(); ++i) {
    Value ok = eval(state, *e.post[i], env);
    if (!ok.is(Value::Kind::boolean) || !ok.as_boolean()) {
      throw Error(ErrorCode::postcondition_failed,
                  "postcondition '" + e.def.postconditions[i] + "' of '" + e.def.id + "' failed");
    }
  }
}

Value Registry::eval(CallContext::State& state, const Expr& e, std::span<const Value> env) const {
  switch (e.kind) {
    case Expr::Kind::literal: return e.literal;
    case Expr::Kind::param: return env[e.param_index];
    case Expr::Kind::list: {
      Value::List items;
      items.reserve(e.children.size());
      for (const auto& c : e.children) items.push_back(eval(state, *c, env));
      return Value::list(std::move(items));
    }
    case Expr::Kind::call: {
      if (e.name == "if") {
        // Lazy: only the taken branch is evaluated.
        Value condition = eval(state, *e.children[0], env);
        if (!condition.is(Value::Kind::boolean)) {
          throw Error(ErrorCode::type_error,
                      "if condition must be boolean, got " + serialize_value(condition));
        }
        return eval(state, *e.children[condition.as_boolean() ? 1 : 2], env);
      }
      std::vector<Value> args;
      args.reserve(e.children.size());
      for (const auto& c : e.children) args.push_back(eval(state, *c, env));
      return call(state, e.name, std::move(args));
    }
  }
  return {};
}

std::string Registry::choose(const Entry& entry, CallContext::State&) const {
  const auto& impls = entry.impls;
  if (impls.empty()) {
    throw Error(ErrorCode::no_implementation, "'" + entry.def.id + "' has no implementation");
  }
  if (impls.size() == 1) return impls.front().impl.id;
  {
    std::lock_guard lock(selection_mutex_);
    if (auto it = selected_.find(entry.def.id); it != selected_.end()) return it->second;
  }
  if (selecting.count(entry.def.id) > 0) {
    auto first = std::min_element(impls.begin(), impls.end(), [](const auto& a, const auto& b) {
      return a.impl.id < b.impl.id;
    });
    return first->impl.id;
  }
  selecting.insert(entry.def.id);
  std::string chosen;
  try {
    chosen = select_implementation(entry.def.id);
  } catch (...) {
    selecting.erase(entry.def.id);
    throw;
  }
  selecting.erase(entry.def.id);
  return chosen;
}

// ---- testing and selection --------------------------------------------------

EvalReport Registry::run_tests(std::string_view function) const {
  auto e = entry(function);
  if (!e) throw Error(ErrorCode::unknown_function, "unknown function '" + std::string(function) + "'");
  EvalReport report;
  report.function = e->def.id;
  const int runs = std::max(1, options_.timing_runs);

  for (const auto& compiled : e->impls) {
    ImplementationReport ir;
    ir.implementation = compiled.impl.id;
    EvalOptions opts;
    opts.use_cache = false;
    opts.pinned.emplace(e->def.id, compiled.impl.id);
    opts.check_postconditions = true;
    double total = 0.0;
    for (const auto& test : e->def.tests) {
      TestOutcome outcome;
      std::vector<std::chrono::nanoseconds> times;
      for (int r = 0; r < runs; ++r) {
        auto start = std::chrono::steady_clock::now();
        std::optional<Value> actual;
        std::string error;
        try {
          actual = evaluate(e->def.id, test.args, opts);
        } catch (const Error& err) {
          error = std::string(to_string(err.code())) + ": " + err.what();
        }
        times.push_back(std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now() - start));
        if (r == 0) {
          outcome.actual = std::move(actual);
          outcome.error = std::move(error);
        }
      }
      std::nth_element(times.begin(), times.begin() + runs / 2, times.end());
      outcome.median_time = times[static_cast<std::size_t>(runs / 2)];
      outcome.passed = outcome.actual && *outcome.actual == test.expected;
      ir.all_passed = ir.all_passed && outcome.passed;
      total += static_cast<double>(outcome.median_time.count());
      ir.tests.push_back(std::move(outcome));
    }
    ir.mean_time_ns = e->def.tests.empty() ? 0.0 : total / static_cast<double>(e->def.tests.size());
    report.implementations.push_back(std::move(ir));
  }

  const std::size_t n = report.implementations.size();
  report.agreement.assign(n, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t agree = 0;
      const auto& a = report.implementations[i].tests;
      const auto& b = report.implementations[j].tests;
      for (std::size_t t = 0; t < a.size(); ++t) {
        if (a[t].actual && b[t].actual && *a[t].actual == *b[t].actual) ++agree;
      }
      report.agreement[i][j] = agree;
    }
  }
  return report;
}

std::string Registry::select_implementation(std::string_view function) const {
  EvalReport report = run_tests(function);
  const ImplementationReport* best = nullptr;
  for (const auto& ir : report.implementations) {
    if (!ir.all_passed) continue;
    if (best == nullptr || ir.mean_time_ns < best->mean_time_ns ||
        (ir.mean_time_ns == best->mean_time_ns && ir.implementation < best->implementation)) {
      best = &ir;
    }
  }
  if (best == nullptr) {
    throw Error(ErrorCode::no_passing_implementation,
                "no implementation of '" + std::string(function) + "' passes all its tests");
  }
  std::lock_guard lock(selection_mutex_);
  selected_[report.function] = best->implementation;
  return best->implementation;
}

// ---- cache ------------------------------------------------------------------

void Registry::clear_cache() {
  std::lock_guard lock(cache_->mutex);
  cache_->functions.clear();
}

CacheStats Registry::cache_stats() const {
  std::lock_guard lock(cache_->mutex);
  CacheStats out;
  for (const auto& [id, f] : cache_->functions) {
    out.hits += f.hits;
    out.misses += f.misses;
    out.entries += f.order.size();
  }
  return out;
}

CacheStats Registry::cache_stats(std::string_view function) const {
  std::lock_guard lock(cache_->mutex);
  auto it = cache_->functions.find(function);
  if (it == cache_->functions.end()) return {};
  return CacheStats{it->second.hits, it->second.misses, it->second.order.size()};
}

// ---- persistence ------------------------------------------------------------

namespace {

Value test_value(const json& j) {
  if (j.is_boolean()) return Value::boolean(j.get<bool>());
  if (j.is_number_integer()) return Value::integer(j.get<std::int64_t>());
  return parse_constant(j.get<std::string>());
}

}  // namespace

void to_json(json& j, const FunctionDef& def) {
  json params = json::array();
  for (const auto& p : def.params) params.push_back({{"name", p.name}, {"type", p.type.to_string()}});
  json tests = json::array();
  for (const auto& t : def.tests) {
    json args = json::array();
    for (const auto& a : t.args) args.push_back(constant_to_string(a));
    tests.push_back({{"args", args}, {"expected", constant_to_string(t.expected)}});
  }
  json impls = json::array();
  for (const auto& impl : def.implementations) {
    if (impl.kind == Implementation::Kind::builtin) {
      impls.push_back({{"id", impl.id}, {"kind", "builtin"}, {"builtin", impl.builtin}});
    } else {
      impls.push_back({{"id", impl.id}, {"kind", "composition"}, {"body", impl.body}});
    }
  }
  j = json{{"id", def.id},
           {"labels", def.labels},
           {"params", params},
           {"return_type", def.return_type.to_string()},
           {"pure", def.pure},
           {"tests", tests},
           {"preconditions", def.preconditions},
           {"postconditions", def.postconditions},
           {"implementations", impls}};
}

void from_json(const json& j, FunctionDef& def) {
  def.id = j.at("id").get<std::string>();
  def.labels = j.value("labels", std::map<std::string, std::string>{});
  def.params.clear();
  for (const auto& p : j.value("params", json::array())) {
    def.params.push_back(
        Param{p.at("name").get<std::string>(), TypeRef::parse(p.at("type").get<std::string>())});
  }
  def.return_type = TypeRef::parse(j.at("return_type").get<std::string>());
  def.pure = j.value("pure", true);
  def.tests.clear();
  for (const auto& t : j.value("tests", json::array())) {
    TestCase tc;
    for (const auto& a : t.at("args")) tc.args.push_back(test_value(a));
    tc.expected = test_value(t.at("expected"));
    def.tests.push_back(std::move(tc));
  }
  def.preconditions = j.value("preconditions", std::vector<std::string>{});
  def.postconditions = j.value("postconditions", std::vector<std::string>{});
  def.implementations.clear();
  for (const auto& i : j.value("implementations", json::array())) {
    Implementation impl;
    impl.id = i.at("id").get<std::string>();
    auto kind = i.at("kind").get<std::string>();
    if (kind == "builtin") {
      impl.kind = Implementation::Kind::builtin;
      impl.builtin = i.at("builtin").get<std::string>();
    } else if (kind == "composition") {
      impl.kind = Implementation::Kind::composition;
      impl.body = i.at("body").get<std::string>();
    } else {
      throw Error(ErrorCode::invalid_document, "unknown implementation kind '" + kind + "'");
    }
    def.implementations.push_back(std::move(impl));
  }
}

void Registry::load_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::io_error, "not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<FunctionDef> defs;
  for (const auto& file : files) {
    json doc = read_json_file(file);
    defs.push_back(with_document_errors(file.string(), [&] { return doc.get<FunctionDef>(); }));
  }
  register_functions(std::move(defs));
}

void Registry::save_function(const std::filesystem::path& dir, const FunctionDef& def) {
  write_json_file(dir / (def.id + ".json"), json(def));
}

}  // namespace abswiki
