#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "abswiki/error.hpp"

namespace abswiki::notation {

enum class TokenKind : std::uint8_t {
  identifier,
  item_id,
  integer,
  text,
  lparen,
  rparen,
  lbracket,
  rbracket,
  comma,
  colon,
  equals,
  end,
};

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;  // identifier/item spelling, or the decoded string literal
  std::int64_t integer = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Human-readable name of a token kind as used in "expected" sets.
std::string_view describe(TokenKind kind) noexcept;
/// Human-readable description of a concrete token ("identifier 'foo'").
std::string describe(const Token& token);

/// Splits the notation into tokens, always ending with a TokenKind::end token.
///
/// Identifiers are `[A-Za-z_<non-ASCII>][A-Za-z0-9_<non-ASCII>]*`; an identifier spelled
/// `Q[1-9][0-9]*` is an item id. Integers are optionally negative decimal literals that
/// fit in 64 bits. Strings are double-quoted with `\"`, `\\`, `\n`, `\t` escapes.
/// Throws SyntaxError on invalid UTF-8 or stray characters.
std::vector<Token> tokenize(std::string_view source);

/// Cursor over a token vector with the expected-set bookkeeping shared by the parsers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  bool at(TokenKind kind, std::size_t ahead = 0) const { return peek(ahead).kind == kind; }
  Token take();
  Token expect(TokenKind kind);
  [[noreturn]] void fail(std::vector<std::string> expected, const std::string& detail = {}) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

/// Writes a double-quoted string literal with escapes.
std::string quote(std::string_view text);
/// True if `text` lexes as a single identifier that is not an item id.
bool is_plain_identifier(std::string_view text) noexcept;

}  // namespace abswiki::notation
