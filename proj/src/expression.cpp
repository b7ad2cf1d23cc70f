#include "abswiki/expression.hpp"

#include "abswiki/content.hpp"
#include "abswiki/error.hpp"
#include "abswiki/notation.hpp"

namespace abswiki {

namespace {

using notation::Token;
using notation::TokenKind;
using notation::TokenStream;

constexpr std::size_t max_nesting = 256;

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view source) : tokens_(notation::tokenize(source)) {}

  ExprPtr parse() {
    ExprPtr e = expression();
    tokens_.expect(TokenKind::end);
    return e;
  }

 private:
  ExprPtr expression() {
    if (++depth_ > max_nesting) tokens_.fail({}, "nesting too deep");
    auto e = std::make_shared<Expr>();
    const Token& t = tokens_.peek();
    e->line = t.line;
    e->column = t.column;
    switch (t.kind) {
      case TokenKind::integer:
        e->literal = Value::integer(tokens_.take().integer);
        break;
      case TokenKind::text:
        e->literal = Value::text(tokens_.take().text);
        break;
      case TokenKind::item_id:
        e->literal = Value::item(tokens_.take().text);
        break;
      case TokenKind::lbracket: {
        tokens_.take();
        e->kind = Expr::Kind::list;
        if (!tokens_.at(TokenKind::rbracket)) {
          e->children.push_back(expression());
          while (tokens_.at(TokenKind::comma)) {
            tokens_.take();
            e->children.push_back(expression());
          }
        }
        if (!tokens_.at(TokenKind::rbracket)) tokens_.fail({"','", "']'"});
        tokens_.take();
        break;
      }
      case TokenKind::identifier: {
        std::string name = tokens_.take().text;
        if (tokens_.at(TokenKind::lparen)) {
          tokens_.take();
          e->kind = Expr::Kind::call;
          e->name = std::move(name);
          arguments(*e);
        } else if (name == "true" || name == "false") {
          e->literal = Value::boolean(name == "true");
        } else {
          e->kind = Expr::Kind::param;
          e->name = std::move(name);
        }
        break;
      }
      default: tokens_.fail({"expression"});
    }
    --depth_;
    return e;
  }

  void arguments(Expr& call) {
    if (tokens_.at(TokenKind::rparen)) {
      tokens_.take();
      return;
    }
    bool keyed = tokens_.at(TokenKind::identifier) && tokens_.at(TokenKind::colon, 1);
    for (;;) {
      if (keyed) {
        if (!tokens_.at(TokenKind::identifier)) tokens_.fail({"parameter name"});
        call.arg_keys.push_back(tokens_.take().text);
        tokens_.expect(TokenKind::colon);
      }
      call.children.push_back(expression());
      if (tokens_.at(TokenKind::comma)) {
        tokens_.take();
        continue;
      }
      if (!tokens_.at(TokenKind::rparen)) tokens_.fail({"','", "')'"});
      tokens_.take();
      return;
    }
  }

  TokenStream tokens_;
  std::size_t depth_ = 0;
};

Value constant(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::literal: return e.literal;
    case Expr::Kind::list: {
      Value::List items;
      for (const auto& c : e.children) items.push_back(constant(*c));
      return Value::list(std::move(items));
    }
    default:
      throw Error(ErrorCode::type_error,
                  "'" + e.name + "' is not allowed in a constant expression");
  }
}

}  // namespace

ExprPtr parse_expression(std::string_view source) { return ExpressionParser(source).parse(); }

Value parse_constant(std::string_view source) { return constant(*parse_expression(source)); }

std::string constant_to_string(const Value& value) {
  switch (value.kind()) {
    case Value::Kind::item: return value.as_item().id;
    case Value::Kind::list: {
      std::string out = "[";
      bool first = true;
      for (const auto& v : value.as_list()) {
        if (!first) out += ", ";
        first = false;
        out += constant_to_string(v);
      }
      return out + "]";
    }
    default: return serialize_value(value);
  }
}

}  // namespace abswiki
