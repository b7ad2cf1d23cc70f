#include "abswiki/json_io.hpp"

#include <fstream>
#include <sstream>

namespace abswiki {

json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return with_document_errors(file.string(), [&] { return json::parse(buffer.str()); });
}

void write_json_file(const std::filesystem::path& file, const json& document) {
  std::error_code ec;
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path(), ec);
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + file.string());
  out << document.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::io_error, "failed writing " + file.string());
}

}  // namespace abswiki
