#pragma once

#include <memory>
#include <string>

#include "abswiki/error.hpp"
#include "abswiki/json_io.hpp"
#include "abswiki/value.hpp"

namespace abswiki {

class Workspace;
struct RenderOutcome;

/// HTTP status used for an error code: 404 for unknown ids, 400 for malformed requests,
/// 422 for content that is well-formed but not accepted, 502 for upstream failures.
int http_status(ErrorCode code) noexcept;

/// `{code, message, path?}`; SyntaxError adds line, column and expected.
json error_body(const Error& error);

/// `{"notation": ..., "kind": ...}` plus `"json"` for integers, booleans and text.
json value_to_json(const Value& value);
/// A JSON number or boolean, or a string in constant notation (`4`, `"x"`, `[Q1, Q2]`).
Value value_from_json(const json& j);

json outcome_to_json(const RenderOutcome& outcome);

/// JSON API over a workspace. See README.md for the endpoint list and bodies.
class Service {
 public:
  explicit Service(Workspace& workspace);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Blocks until stop(). Returns false if the address cannot be bound.
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it (negative on failure); then call run().
  int bind_any_port(const std::string& host);
  bool run();
  void stop();
  bool running() const;
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace abswiki
