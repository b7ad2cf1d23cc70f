#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "abswiki/value.hpp"

namespace abswiki {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Composition expression: the call notation of the content language, where bare
/// identifiers name parameters and every `name(...)` is a function call.
///
///     if(condition: is_zero(x), then: 0, else: add(y, multiply(subtract(x, 1), y)))
///
/// Arguments are either all positional or all keyed by parameter name. `true` and
/// `false` are boolean literals.
struct Expr {
  enum class Kind : std::uint8_t { literal, param, list, call };

  Kind kind = Kind::literal;
  Value literal;
  std::string name;                  // parameter name or function id
  std::size_t param_index = 0;       // set by resolution
  std::vector<ExprPtr> children;     // list elements or call arguments
  std::vector<std::string> arg_keys; // keyed call arguments as written; empty if positional
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Syntax only; names are checked when the expression is attached to a function.
/// Throws SyntaxError.
ExprPtr parse_expression(std::string_view source);

/// Evaluates an expression made only of literals and lists (used for test cases).
/// Throws SyntaxError, or Error(type_error) if it contains calls or names.
Value parse_constant(std::string_view source);

/// Source form of a literal-only value, accepted by parse_constant.
std::string constant_to_string(const Value& value);

}  // namespace abswiki
