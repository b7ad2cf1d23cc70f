#include "abswiki/error.hpp"

#include <sstream>

namespace abswiki {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::syntax_error: return "SYNTAX_ERROR";
    case ErrorCode::path_not_found: return "PATH_NOT_FOUND";
    case ErrorCode::duplicate_id: return "DUPLICATE_ID";
    case ErrorCode::unknown_function: return "UNKNOWN_FUNCTION";
    case ErrorCode::unknown_param: return "UNKNOWN_PARAM";
    case ErrorCode::arity_mismatch: return "ARITY_MISMATCH";
    case ErrorCode::type_error: return "TYPE_ERROR";
    case ErrorCode::precondition_failed: return "PRECONDITION_FAILED";
    case ErrorCode::postcondition_failed: return "POSTCONDITION_FAILED";
    case ErrorCode::depth_exceeded: return "DEPTH_EXCEEDED";
    case ErrorCode::no_implementation: return "NO_IMPLEMENTATION";
    case ErrorCode::no_passing_implementation: return "NO_PASSING_IMPLEMENTATION";
    case ErrorCode::unknown_lexeme: return "UNKNOWN_LEXEME";
    case ErrorCode::unsupported_language: return "UNSUPPORTED_LANGUAGE";
    case ErrorCode::out_of_table: return "OUT_OF_TABLE";
    case ErrorCode::incomplete_phrase: return "INCOMPLETE_PHRASE";
    case ErrorCode::validation_failed: return "VALIDATION_FAILED";
    case ErrorCode::unknown_item: return "UNKNOWN_ITEM";
    case ErrorCode::unknown_constructor: return "UNKNOWN_CONSTRUCTOR";
    case ErrorCode::parse_error: return "PARSE_ERROR";
    case ErrorCode::network_error: return "NETWORK_ERROR";
    case ErrorCode::no_renderer: return "NO_RENDERER";
    case ErrorCode::invalid_document: return "INVALID_DOCUMENT";
    case ErrorCode::not_found: return "NOT_FOUND";
    case ErrorCode::io_error: return "IO_ERROR";
  }
  return "UNKNOWN";
}

namespace {

std::string describe(std::size_t line, std::size_t column, const std::string& found,
                     const std::vector<std::string>& expected, const std::string& detail) {
  std::ostringstream out;
  out << line << ':' << column << ": ";
  if (!detail.empty()) {
    out << detail;
  } else {
    out << "unexpected " << found;
  }
  if (!expected.empty()) {
    out << "; expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) out << (i + 1 == expected.size() ? " or " : ", ");
      out << expected[i];
    }
  }
  return out.str();
}

}  // namespace

SyntaxError::SyntaxError(std::size_t line, std::size_t column, std::string found,
                         std::vector<std::string> expected, const std::string& detail)
    : Error(ErrorCode::syntax_error, describe(line, column, found, expected, detail)),
      line_(line),
      column_(column),
      found_(std::move(found)),
      expected_(std::move(expected)) {}

}  // namespace abswiki
