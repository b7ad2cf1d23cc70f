#pragma once

#include <filesystem>

#include "json.hpp"

namespace abswiki {

using json = nlohmann::json;

struct ConstructorSpec;
struct Diagnostic;
struct FunctionDef;
struct Lexeme;
struct Item;

void to_json(json& j, const ConstructorSpec& spec);
void from_json(const json& j, ConstructorSpec& spec);
void to_json(json& j, const Diagnostic& diagnostic);
void to_json(json& j, const FunctionDef& def);
void from_json(const json& j, FunctionDef& def);
void to_json(json& j, const Lexeme& lexeme);
void from_json(const json& j, Lexeme& lexeme);
void to_json(json& j, const Item& item);
void from_json(const json& j, Item& item);

/// Throws Error(io_error) if unreadable, Error(invalid_document) if not JSON.
json read_json_file(const std::filesystem::path& file);
/// Writes pretty-printed JSON, creating parent directories. Throws Error(io_error).
void write_json_file(const std::filesystem::path& file, const json& document);

/// Runs `convert`, rethrowing JSON library exceptions as Error(invalid_document).
template <typename F>
decltype(auto) with_document_errors(const std::string& what, F&& convert);

}  // namespace abswiki

#include "abswiki/error.hpp"

namespace abswiki {

template <typename F>
decltype(auto) with_document_errors(const std::string& what, F&& convert) {
  try {
    return convert();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_document, what + ": " + e.what());
  }
}

}  // namespace abswiki
