#include "abswiki/notation.hpp"

#include <charconv>

#include "abswiki/value.hpp"

namespace abswiki::notation {

namespace {

bool ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}

bool ident_continue(unsigned char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

// Length of the UTF-8 sequence starting at s[i], or 0 if malformed.
std::size_t utf8_length(std::string_view s, std::size_t i) {
  auto c = static_cast<unsigned char>(s[i]);
  std::size_t len = 0;
  std::uint32_t cp = 0;
  if (c < 0x80) return 1;
  if ((c & 0xE0) == 0xC0) {
    len = 2;
    cp = c & 0x1F;
  } else if ((c & 0xF0) == 0xE0) {
    len = 3;
    cp = c & 0x0F;
  } else if ((c & 0xF8) == 0xF0) {
    len = 4;
    cp = c & 0x07;
  } else {
    return 0;
  }
  if (i + len > s.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    auto cc = static_cast<unsigned char>(s[i + k]);
    if ((cc & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (cc & 0x3F);
  }
  // Overlong encodings, surrogates and out-of-range code points.
  if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
      (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
    return 0;
  }
  return len;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token tok;
      tok.line = line_;
      tok.column = column_;
      if (pos_ >= src_.size()) {
        tok.kind = TokenKind::end;
        out.push_back(std::move(tok));
        return out;
      }
      auto c = static_cast<unsigned char>(src_[pos_]);
      switch (c) {
        case '(': single(tok, TokenKind::lparen); break;
        case ')': single(tok, TokenKind::rparen); break;
        case '[': single(tok, TokenKind::lbracket); break;
        case ']': single(tok, TokenKind::rbracket); break;
        case ',': single(tok, TokenKind::comma); break;
        case ':': single(tok, TokenKind::colon); break;
        case '=': single(tok, TokenKind::equals); break;
        case '"': string_literal(tok); break;
        default:
          if (c == '-' || (c >= '0' && c <= '9')) {
            integer_literal(tok);
          } else if (ident_start(c)) {
            identifier(tok);
          } else {
            throw SyntaxError(line_, column_, "character '" + std::string(1, src_[pos_]) + "'",
                              {"value"});
          }
      }
      out.push_back(std::move(tok));
    }
  }

 private:
  void advance(std::size_t n = 1) {
    for (std::size_t k = 0; k < n && pos_ < src_.size(); ++k) {
      if (src_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
      ++pos_;
    }
  }

  void check_utf8() {
    std::size_t len = utf8_length(src_, pos_);
    if (len == 0) throw SyntaxError(line_, column_, "invalid UTF-8 byte", {}, "invalid UTF-8");
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else {
        break;
      }
    }
  }

  void single(Token& tok, TokenKind kind) {
    tok.kind = kind;
    tok.text = std::string(1, src_[pos_]);
    advance();
  }

  void string_literal(Token& tok) {
    tok.kind = TokenKind::text;
    advance();
    for (;;) {
      if (pos_ >= src_.size()) {
        throw SyntaxError(line_, column_, "end of input", {"'\"'"}, "unterminated string");
      }
      char c = src_[pos_];
      if (c == '"') {
        advance();
        return;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) {
          throw SyntaxError(line_, column_, "end of input", {"escape character"});
        }
        char e = src_[pos_];
        switch (e) {
          case '"': tok.text += '"'; break;
          case '\\': tok.text += '\\'; break;
          case 'n': tok.text += '\n'; break;
          case 't': tok.text += '\t'; break;
          default:
            throw SyntaxError(line_, column_, "escape '\\" + std::string(1, e) + "'",
                              {"'\\\"'", "'\\\\'", "'\\n'", "'\\t'"});
        }
        advance();
        continue;
      }
      if (static_cast<unsigned char>(c) >= 0x80) {
        check_utf8();
        std::size_t len = utf8_length(src_, pos_);
        tok.text.append(src_.substr(pos_, len));
        pos_ += len;
        ++column_;
        continue;
      }
      if (c == '\n') {
        throw SyntaxError(line_, column_, "newline", {"'\"'"}, "unterminated string");
      }
      tok.text += c;
      advance();
    }
  }

  void integer_literal(Token& tok) {
    std::size_t start = pos_;
    std::size_t end = pos_;
    if (src_[end] == '-') ++end;
    std::size_t digits_start = end;
    while (end < src_.size() && src_[end] >= '0' && src_[end] <= '9') ++end;
    if (end == digits_start) {
      throw SyntaxError(line_, column_ + (digits_start - start), "'-' without digits",
                        {"digit"});
    }
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + end, value);
    if (ec != std::errc{} || ptr != src_.data() + end) {
      throw SyntaxError(line_, column_, "integer '" + std::string(src_.substr(start, end - start)) + "'",
                        {}, "integer literal out of range");
    }
    tok.kind = TokenKind::integer;
    tok.integer = value;
    tok.text = std::string(src_.substr(start, end - start));
    advance(end - start);
  }

  void identifier(Token& tok) {
    std::size_t start = pos_;
    std::size_t columns = 0;
    while (pos_ < src_.size() && ident_continue(static_cast<unsigned char>(src_[pos_]))) {
      if (static_cast<unsigned char>(src_[pos_]) >= 0x80) {
        check_utf8();
        pos_ += utf8_length(src_, pos_);
      } else {
        ++pos_;
      }
      ++columns;
    }
    column_ += columns;
    tok.text = std::string(src_.substr(start, pos_ - start));
    tok.kind = is_item_id(tok.text) ? TokenKind::item_id : TokenKind::identifier;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace

std::string_view describe(TokenKind kind) noexcept {
  switch (kind) {
    case TokenKind::identifier: return "identifier";
    case TokenKind::item_id: return "item id";
    case TokenKind::integer: return "integer";
    case TokenKind::text: return "string";
    case TokenKind::lparen: return "'('";
    case TokenKind::rparen: return "')'";
    case TokenKind::lbracket: return "'['";
    case TokenKind::rbracket: return "']'";
    case TokenKind::comma: return "','";
    case TokenKind::colon: return "':'";
    case TokenKind::equals: return "'='";
    case TokenKind::end: return "end of input";
  }
  return "?";
}

std::string describe(const Token& token) {
  switch (token.kind) {
    case TokenKind::identifier:
    case TokenKind::item_id:
    case TokenKind::integer:
      return std::string(describe(token.kind)) + " '" + token.text + "'";
    case TokenKind::text: return "string " + quote(token.text);
    default: return std::string(describe(token.kind));
  }
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

const Token& TokenStream::peek(std::size_t ahead) const {
  std::size_t i = pos_ + ahead;
  return i < tokens_.size() ? tokens_[i] : tokens_.back();
}

Token TokenStream::take() {
  Token t = peek();
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

Token TokenStream::expect(TokenKind kind) {
  if (!at(kind)) fail({std::string(describe(kind))});
  return take();
}

void TokenStream::fail(std::vector<std::string> expected, const std::string& detail) const {
  const Token& t = peek();
  throw SyntaxError(t.line, t.column, describe(t), std::move(expected), detail);
}

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

bool is_plain_identifier(std::string_view text) noexcept {
  if (text.empty() || !ident_start(static_cast<unsigned char>(text[0]))) return false;
  for (std::size_t i = 0; i < text.size();) {
    auto c = static_cast<unsigned char>(text[i]);
    if (!ident_continue(c)) return false;
    std::size_t len = utf8_length(text, i);
    if (len == 0) return false;
    i += len;
  }
  return !is_item_id(text);
}

}  // namespace abswiki::notation
