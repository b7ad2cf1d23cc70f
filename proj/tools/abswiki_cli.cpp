// Command-line front end: parse, validate, render, eval, serve, import.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "abswiki/content.hpp"
#include "abswiki/error.hpp"
#include "abswiki/expression.hpp"
#include "abswiki/phrase.hpp"
#include "abswiki/service.hpp"
#include "abswiki/workspace.hpp"

using namespace abswiki;

namespace {

enum Exit { ok = 0, usage = 1, invalid = 2, eval_failed = 3, render_failed = 4 };

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::syntax_error:
    case ErrorCode::parse_error:
    case ErrorCode::invalid_document:
    case ErrorCode::validation_failed:
    case ErrorCode::unknown_constructor: return invalid;
    case ErrorCode::unsupported_language:
    case ErrorCode::no_renderer:
    case ErrorCode::incomplete_phrase: return render_failed;
    case ErrorCode::io_error:
    case ErrorCode::not_found:
    case ErrorCode::network_error: return usage;
    default: return eval_failed;
  }
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::stringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void report(const Error& e, const std::string& where = {}) {
  if (!where.empty()) std::cerr << where << ": ";
  std::cerr << to_string(e.code()) << ": " << e.what();
  if (!e.path().empty()) std::cerr << " (at " << e.path() << ")";
  std::cerr << "\n";
}

void print_diagnostics(const std::vector<Diagnostic>& diagnostics, const std::string& file) {
  for (const auto& d : diagnostics) {
    std::cerr << file << ": " << d.code << " at " << (d.path.empty() ? "<root>" : to_string(d.path))
              << ": " << d.message << "\n";
  }
}

/// Eval arguments: constant notation where it parses, otherwise the raw word as text.
Value cli_argument(const std::string& arg) {
  try {
    return parse_constant(arg);
  } catch (const Error&) {
    return Value::text(arg);
  }
}

std::string print_value(const Value& v) {
  if (v.is(Value::Kind::text)) return v.as_text();
  if (v.is(Value::Kind::phrase)) return v.as_phrase().debug_string();
  return serialize_value(v);
}

Service* running_service = nullptr;

void on_signal(int) {
  if (running_service != nullptr) running_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Abstract content toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string data_dir;
  std::string config_file;
  app.add_option("--data", data_dir, "Data directory (overrides config)");
  app.add_option("--config", config_file, "JSON config file")->check(CLI::ExistingFile);

  std::string file;
  auto* parse = app.add_subcommand("parse", "Parse content and print its canonical notation");
  parse->add_option("file", file, "Content file, or - for stdin")->required();

  auto* validate = app.add_subcommand("validate", "Validate content against the catalog");
  validate->add_option("file", file)->required();

  std::string lang;
  auto* render = app.add_subcommand("render", "Render content to text");
  render->add_option("file", file)->required();
  render->add_option("--lang", lang, "Language code")->required();

  std::string fn;
  std::vector<std::string> args;
  auto* eval = app.add_subcommand("eval", "Evaluate a registry function");
  eval->add_option("function", fn)->required();
  eval->add_option("args", args);

  std::string listen;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--listen", listen, "host:port");

  auto* import = app.add_subcommand("import", "Import items into the data directory");
  import->add_option("file", file)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (parse->parsed()) {
      std::cout << serialize_content(parse_content(read_file(file))) << "\n";
      return ok;
    }

    std::optional<std::filesystem::path> config_path;
    if (!config_file.empty()) config_path = config_file;
    Config config = Config::load(config_path);
    if (!data_dir.empty()) config.data_dir = data_dir;
    if (!listen.empty()) {
      auto colon = listen.rfind(':');
      if (colon == std::string::npos) throw Error(ErrorCode::invalid_document, "--listen wants host:port");
      config.host = listen.substr(0, colon);
      config.port = std::stoi(listen.substr(colon + 1));
    }
    Workspace ws(config);
    ws.load();

    if (validate->parsed()) {
      auto content = parse_content(read_file(file));
      auto diagnostics = ws.check(content);
      print_diagnostics(diagnostics, file);
      return diagnostics.empty() ? ok : invalid;
    }
    if (render->parsed()) {
      auto content = parse_content(read_file(file));
      auto diagnostics = ws.validate(content);
      if (!diagnostics.empty()) {
        print_diagnostics(diagnostics, file);
        return invalid;
      }
      auto outcome = ws.render(content, lang);
      for (const auto& o : outcome.omissions) {
        std::cerr << file << ": omitted " << to_string(o.path) << ": " << o.reason << "\n";
      }
      std::cout << outcome.text << "\n";
      return ok;
    }
    if (eval->parsed()) {
      std::vector<Value> values;
      for (const auto& a : args) values.push_back(cli_argument(a));
      std::cout << print_value(ws.registry().evaluate(fn, std::move(values))) << "\n";
      return ok;
    }
    if (serve->parsed()) {
      Service service(ws);
      running_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      // Port 0 picks a free port; the chosen one is printed.
      int port = config.port == 0 ? service.bind_any_port(config.host) : config.port;
      if (port <= 0) throw Error(ErrorCode::io_error, "cannot bind " + config.host);
      std::cerr << "listening on " << config.host << ":" << port << std::endl;
      bool served = config.port == 0 ? service.run() : service.listen(config.host, port);
      if (!served) {
        throw Error(ErrorCode::io_error,
                    "cannot listen on " + config.host + ":" + std::to_string(port));
      }
      running_service = nullptr;
      return ok;
    }
    if (import->parsed()) {
      EntityStore incoming;
      auto count = incoming.import_items(read_file(file));
      for (const auto& [id, item] : incoming.snapshot()) {
        EntityStore::save_item(config.data_dir / "items", item);
      }
      std::cout << "imported " << count << " items\n";
      return ok;
    }
  } catch (const Error& e) {
    report(e, file);
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  }
  return usage;
}
