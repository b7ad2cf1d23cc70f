#include "abswiki/service.hpp"

#include <httplib.h>

#include "abswiki/content.hpp"
#include "abswiki/expression.hpp"
#include "abswiki/phrase.hpp"
#include "abswiki/workspace.hpp"

namespace abswiki {

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::path_not_found:
    case ErrorCode::unknown_function:
    case ErrorCode::unknown_lexeme:
    case ErrorCode::unknown_item:
    case ErrorCode::unknown_constructor:
    case ErrorCode::not_found: return 404;
    case ErrorCode::syntax_error:
    case ErrorCode::parse_error:
    case ErrorCode::invalid_document:
    case ErrorCode::unknown_param:
    case ErrorCode::arity_mismatch:
    case ErrorCode::type_error:
    case ErrorCode::duplicate_id: return 400;
    case ErrorCode::network_error: return 502;
    case ErrorCode::io_error: return 500;
    default: return 422;
  }
}

json error_body(const Error& error) {
  json body = {{"code", to_string(error.code())}, {"message", error.what()}};
  if (!error.path().empty()) body["path"] = error.path();
  if (const auto* syntax = dynamic_cast<const SyntaxError*>(&error)) {
    body["line"] = syntax->line();
    body["column"] = syntax->column();
    body["found"] = syntax->found();
    body["expected"] = syntax->expected();
  }
  return body;
}

json value_to_json(const Value& value) {
  json out = {{"kind", to_string(value.kind())}};
  switch (value.kind()) {
    case Value::Kind::integer: out["json"] = value.as_integer(); break;
    case Value::Kind::boolean: out["json"] = value.as_boolean(); break;
    case Value::Kind::text: out["json"] = value.as_text(); break;
    default: break;
  }
  if (value.is(Value::Kind::phrase)) {
    out["notation"] = value.as_phrase().debug_string();
  } else {
    out["notation"] = serialize_value(value);
  }
  return out;
}

Value value_from_json(const json& j) {
  if (j.is_boolean()) return Value::boolean(j.get<bool>());
  if (j.is_number_integer()) return Value::integer(j.get<std::int64_t>());
  if (j.is_string()) return parse_constant(j.get<std::string>());
  throw Error(ErrorCode::invalid_document,
              "argument must be a number, boolean or constant notation string");
}

json outcome_to_json(const RenderOutcome& outcome) {
  json omissions = json::array();
  for (const auto& o : outcome.omissions) {
    omissions.push_back({{"path", to_string(o.path)}, {"reason", o.reason}});
  }
  return {{"text", outcome.text}, {"omissions", omissions}, {"complete", outcome.complete}};
}

namespace {

json diagnostics_json(const std::vector<Diagnostic>& diagnostics) {
  json out = json::array();
  for (const auto& d : diagnostics) out.push_back(d);
  return out;
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void fail(httplib::Response& res, const Error& e) { reply(res, http_status(e.code()), error_body(e)); }

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("request body is not JSON: ") + e.what());
  }
}

std::string required_string(const json& body, const char* key) {
  if (!body.is_object() || !body.contains(key) || !body.at(key).is_string()) {
    throw Error(ErrorCode::invalid_document, std::string("missing string field '") + key + "'");
  }
  return body.at(key).get<std::string>();
}

/// Document from a PUT body; the id in the URL wins and a conflicting body id is rejected.
template <typename T>
T document_for(const httplib::Request& req, const std::string& id) {
  json body = parse_body(req);
  if (!body.is_object()) throw Error(ErrorCode::invalid_document, "body must be an object");
  if (body.contains("id") && body.at("id") != id) {
    throw Error(ErrorCode::invalid_document, "body id does not match the URL");
  }
  body["id"] = id;
  return with_document_errors(id, [&] { return body.get<T>(); });
}

json list_json(const std::vector<std::string>& ids) { return {{"ids", ids}}; }

}  // namespace

struct Service::Impl {
  explicit Impl(Workspace& ws) : ws(ws) { routes(); }

  Workspace& ws;
  httplib::Server server;

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  static httplib::Server::Handler guarded(Handler h) {
    return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      try {
        h(req, res);
      } catch (const Error& e) {
        fail(res, e);
      } catch (const std::exception& e) {
        reply(res, 500, {{"code", "INTERNAL"}, {"message", e.what()}});
      }
    };
  }

  json render_json(const Content& content, const std::string& lang) const {
    auto diagnostics = ws.validate(content);
    if (!diagnostics.empty()) {
      Error e(ErrorCode::validation_failed, "content does not validate");
      json body = error_body(e);
      body["diagnostics"] = diagnostics_json(diagnostics);
      throw json_error{body};
    }
    return outcome_to_json(ws.render(content, lang));
  }

  struct json_error {
    json body;
  };

  void render_reply(httplib::Response& res, const Content& content, const std::string& lang) {
    try {
      reply(res, 200, render_json(content, lang));
    } catch (const json_error& e) {
      reply(res, 422, e.body);
    }
  }

  void routes() {
    server.Get("/health", guarded([](const auto&, auto& res) { reply(res, 200, {{"ok", true}}); }));

    server.Get("/render", guarded([this](const httplib::Request& req, httplib::Response& res) {
      if (!req.has_param("content_id") || !req.has_param("lang")) {
        throw Error(ErrorCode::invalid_document, "content_id and lang are required");
      }
      auto id = req.get_param_value("content_id");
      auto content = ws.find_content(id);
      if (!content) throw Error(ErrorCode::not_found, "no content " + id, id);
      render_reply(res, *content, req.get_param_value("lang"));
    }));
    server.Post("/render", guarded([this](const httplib::Request& req, httplib::Response& res) {
      json body = parse_body(req);
      render_reply(res, parse_content(required_string(body, "content")),
                   required_string(body, "lang"));
    }));

    server.Get("/content", guarded([this](const auto&, auto& res) {
      reply(res, 200, list_json(ws.content_ids()));
    }));
    server.Post("/content", guarded([this](const httplib::Request& req, httplib::Response& res) {
      std::optional<std::string> item;
      if (req.has_param("item")) item = req.get_param_value("item");
      auto stored = ws.store_content(req.body, item);
      reply(res, 201, {{"id", stored.id}, {"diagnostics", diagnostics_json(stored.diagnostics)}});
    }));
    server.Get(R"(/content/([^/]+))", guarded([this](const httplib::Request& req,
                                                     httplib::Response& res) {
      auto id = req.matches[1].str();
      auto content = ws.find_content(id);
      if (!content) throw Error(ErrorCode::not_found, "no content " + id, id);
      reply(res, 200,
            {{"id", id},
             {"notation", serialize_content(*content, &ws.catalog())},
             {"diagnostics", diagnostics_json(ws.check(*content))}});
    }));

    server.Get("/constructors", guarded([this](const auto&, auto& res) {
      reply(res, 200, list_json(ws.catalog().ids()));
    }));
    server.Get(R"(/constructors/([^/]+))", guarded([this](const httplib::Request& req,
                                                          httplib::Response& res) {
      auto id = req.matches[1].str();
      auto spec = ws.catalog().find(id);
      if (!spec) throw Error(ErrorCode::unknown_constructor, "no constructor " + id, id);
      reply(res, 200, *spec);
    }));
    server.Put(R"(/constructors/([^/]+))", guarded([this](const httplib::Request& req,
                                                          httplib::Response& res) {
      auto id = req.matches[1].str();
      auto broken = ws.put_constructor(document_for<ConstructorSpec>(req, id));
      reply(res, 200, {{"id", id}, {"invalidated", broken}});
    }));

    server.Get("/functions", guarded([this](const auto&, auto& res) {
      reply(res, 200, list_json(ws.registry().ids()));
    }));
    server.Get(R"(/functions/([^/]+))", guarded([this](const httplib::Request& req,
                                                       httplib::Response& res) {
      auto id = req.matches[1].str();
      auto def = ws.registry().find(id);
      if (!def) throw Error(ErrorCode::unknown_function, "no function " + id, id);
      reply(res, 200, *def);
    }));
    server.Put(R"(/functions/([^/]+))", guarded([this](const httplib::Request& req,
                                                       httplib::Response& res) {
      auto id = req.matches[1].str();
      ws.put_function(document_for<FunctionDef>(req, id));
      reply(res, 200, {{"id", id}});
    }));

    server.Get("/lexemes", guarded([this](const auto&, auto& res) {
      reply(res, 200, list_json(ws.lexicon().ids()));
    }));
    server.Get(R"(/lexemes/([^/]+))", guarded([this](const httplib::Request& req,
                                                     httplib::Response& res) {
      auto id = req.matches[1].str();
      auto lexeme = ws.lexicon().find(id);
      if (!lexeme) throw Error(ErrorCode::unknown_lexeme, "no lexeme " + id, id);
      reply(res, 200, *lexeme);
    }));
    server.Put(R"(/lexemes/([^/]+))", guarded([this](const httplib::Request& req,
                                                     httplib::Response& res) {
      auto id = req.matches[1].str();
      ws.put_lexeme(document_for<Lexeme>(req, id));
      reply(res, 200, {{"id", id}});
    }));

    server.Get("/items", guarded([this](const auto&, auto& res) {
      reply(res, 200, list_json(ws.items().ids()));
    }));
    server.Get(R"(/items/([^/]+))", guarded([this](const httplib::Request& req,
                                                   httplib::Response& res) {
      auto id = req.matches[1].str();
      auto item = ws.items().find(id);
      if (!item && ws.config().remote_fetch) {
        item = ws.items().fetch_remote(id, RemoteConfig{true, ws.config().remote_url, 10});
      }
      if (!item) throw Error(ErrorCode::unknown_item, "no item " + id, id);
      reply(res, 200, *item);
    }));
    server.Put(R"(/items/([^/]+))", guarded([this](const httplib::Request& req,
                                                   httplib::Response& res) {
      auto id = req.matches[1].str();
      ws.put_item(document_for<Item>(req, id));
      reply(res, 200, {{"id", id}});
    }));

    server.Post("/evaluate", guarded([this](const httplib::Request& req, httplib::Response& res) {
      json body = parse_body(req);
      auto fn = required_string(body, "fn");
      std::vector<Value> args;
      if (body.contains("args")) {
        if (!body.at("args").is_array()) {
          throw Error(ErrorCode::invalid_document, "'args' must be an array");
        }
        for (const auto& a : body.at("args")) args.push_back(value_from_json(a));
      }
      EvalOptions options;
      if (body.contains("implementation")) {
        options.pinned.emplace(fn, required_string(body, "implementation"));
      }
      auto value = ws.registry().evaluate(fn, std::move(args), options);
      reply(res, 200, {{"value", value_to_json(value)}});
    }));

    server.Post("/suggest", guarded([this](const httplib::Request& req, httplib::Response& res) {
      json body = parse_body(req);
      json out = json::array();
      for (const auto& s : ws.suggest(required_string(body, "text"), required_string(body, "lang"))) {
        out.push_back({{"rule", s.rule},
                       {"score", s.score},
                       {"content", s.notation},
                       {"diagnostics", diagnostics_json(s.diagnostics)}});
      }
      reply(res, 200, {{"candidates", out}});
    }));

    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (!res.body.empty()) return;
      if (res.status == 404) {
        reply(res, 404, {{"code", "NOT_FOUND"}, {"message", "no such endpoint"}});
      } else if (res.status >= 400 && res.status < 500) {
        reply(res, res.status, {{"code", "BAD_REQUEST"}, {"message", "malformed request"}});
      }
    });
  }
};

Service::Service(Workspace& workspace) : impl_(std::make_unique<Impl>(workspace)) {}
Service::~Service() { stop(); }

bool Service::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }
int Service::bind_any_port(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}
bool Service::run() { return impl_->server.listen_after_bind(); }
void Service::stop() { impl_->server.stop(); }
bool Service::running() const { return impl_->server.is_running(); }
void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace abswiki
