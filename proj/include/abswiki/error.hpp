#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace abswiki {

enum class ErrorCode : std::uint8_t {
  syntax_error,
  path_not_found,
  duplicate_id,
  unknown_function,
  unknown_param,
  arity_mismatch,
  type_error,
  precondition_failed,
  postcondition_failed,
  depth_exceeded,
  no_implementation,
  no_passing_implementation,
  unknown_lexeme,
  unsupported_language,
  out_of_table,
  incomplete_phrase,
  validation_failed,
  unknown_item,
  unknown_constructor,
  parse_error,
  network_error,
  no_renderer,
  invalid_document,
  not_found,
  io_error,
};

/// Upper-case wire name, e.g. "DEPTH_EXCEEDED". Used by the CLI and HTTP bodies.
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string path = {})
      : std::runtime_error(message), code_(code), path_(std::move(path)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& path() const noexcept { return path_; }

 private:
  ErrorCode code_;
  std::string path_;
};

/// Positioned parse failure. Line and column are 1-based; column counts code points.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, std::string found,
              std::vector<std::string> expected, const std::string& detail = {});

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& found() const noexcept { return found_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string found_;
  std::vector<std::string> expected_;
};

}  // namespace abswiki
