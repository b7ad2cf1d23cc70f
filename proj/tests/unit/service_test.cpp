#include <gtest/gtest.h>

#include <httplib.h>

#include <fstream>
#include <sstream>
#include <thread>

#include "abswiki/service.hpp"
#include "abswiki/workspace.hpp"

using namespace abswiki;

namespace {

std::string fixture_text(const std::string& name) {
  std::ifstream in(std::string(ABSWIKI_FIXTURES) + "/" + name);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    Config config;
    config.data_dir = ABSWIKI_FIXTURES;
    ws = std::make_unique<Workspace>(config);
    ws->load();
    service = std::make_unique<Service>(*ws);
    port = service->bind_any_port("127.0.0.1");
    ASSERT_GT(port, 0);
    thread = std::thread([this] { service->run(); });
    service->wait_until_ready();
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
  }

  void TearDown() override {
    service->stop();
    if (thread.joinable()) thread.join();
  }

  json get(const std::string& path, int expected_status) {
    auto res = client->Get(path);
    EXPECT_TRUE(res) << path;
    if (!res) return {};
    EXPECT_EQ(res->status, expected_status) << path << " " << res->body;
    return json::parse(res->body);
  }

  json send(const std::string& method, const std::string& path, const std::string& body,
            int expected_status, const char* type = "application/json") {
    auto res = method == "PUT" ? client->Put(path, body, type) : client->Post(path, body, type);
    EXPECT_TRUE(res) << path;
    if (!res) return {};
    EXPECT_EQ(res->status, expected_status) << path << " " << res->body;
    return json::parse(res->body);
  }

  std::unique_ptr<Workspace> ws;
  std::unique_ptr<Service> service;
  std::unique_ptr<httplib::Client> client;
  std::thread thread;
  int port = 0;
};

void expect_error_body(const json& body, const std::string& code) {
  EXPECT_EQ(body.value("code", ""), code) << body.dump();
  EXPECT_TRUE(body.contains("message"));
}

}  // namespace

TEST_F(ServiceTest, Health) { EXPECT_TRUE(get("/health", 200).at("ok").get<bool>()); }

TEST_F(ServiceTest, RenderStoredContentGerman) {
  auto body = get("/render?content_id=Q62&lang=de", 200);
  EXPECT_EQ(body.at("text"),
            "San Francisco ist das kulturelle, kommerzielle und finanzielle Zentrum "
            "Nordkaliforniens. Es ist, nach Los Angeles, San Diego und San Jose, die viertgrößte "
            "Stadt in Kalifornien.");
  EXPECT_TRUE(body.at("complete").get<bool>());
  EXPECT_TRUE(body.at("omissions").empty());
}

TEST_F(ServiceTest, RenderErrors) {
  expect_error_body(get("/render?content_id=Q1&lang=en", 404), "NOT_FOUND");
  expect_error_body(get("/render?lang=en", 400), "INVALID_DOCUMENT");
  expect_error_body(get("/render?content_id=Q62&lang=fr", 422), "UNSUPPORTED_LANGUAGE");
  auto stored = send("POST", "/content", "Article(content: [Ranking(rank: \"four\")])", 201,
                     "text/plain");
  auto body = get("/render?content_id=" + stored.at("id").get<std::string>() + "&lang=en", 422);
  expect_error_body(body, "VALIDATION_FAILED");
  EXPECT_GE(body.at("diagnostics").size(), 2u);
}

TEST_F(ServiceTest, PostRenderMatchesStoredRender) {
  json req = {{"content", fixture_text("sf.abstract")}, {"lang", "en"}};
  auto posted = send("POST", "/render", req.dump(), 200);
  auto stored = get("/render?content_id=Q62&lang=en", 200);
  EXPECT_EQ(posted.at("text"), stored.at("text"));
}

TEST_F(ServiceTest, StoreContent) {
  auto scratch = send("POST", "/content", fixture_text("sf.abstract"), 201, "text/plain");
  EXPECT_EQ(scratch.at("id").get<std::string>().rfind("scratch-", 0), 0u);
  EXPECT_TRUE(scratch.at("diagnostics").empty());
  auto keyed = send("POST", "/content?item=Q65", "Article(content: [])", 201, "text/plain");
  EXPECT_EQ(keyed.at("id"), "Q65");
  auto fetched = get("/content/Q65", 200);
  EXPECT_EQ(fetched.at("notation"), "Article(content: [])");
  auto ids = get("/content", 200).at("ids");
  EXPECT_NE(std::find(ids.begin(), ids.end(), "Q65"), ids.end());

  auto bad = send("POST", "/content", "Article(content: [", 400, "text/plain");
  expect_error_body(bad, "SYNTAX_ERROR");
  EXPECT_EQ(bad.at("line"), 1);
  EXPECT_TRUE(bad.contains("column"));
  expect_error_body(get("/content/Q404", 404), "NOT_FOUND");
}

TEST_F(ServiceTest, StoredContentReportsUnknownItems) {
  auto body = send("POST", "/content", "Article(content: [Instantiation(instance: Q777, class: center)])",
                   201, "text/plain");
  ASSERT_EQ(body.at("diagnostics").size(), 1u);
  EXPECT_EQ(body.at("diagnostics")[0].at("code"), "UNKNOWN_ITEM");
}

TEST_F(ServiceTest, AddingOptionalKeyKeepsStoredContentValid) {
  auto spec = get("/constructors/Ranking", 200);
  spec["keys"].push_back({{"id", "population_year"},
                          {"required", false},
                          {"accepted", json::array({"integer"})}});
  auto body = send("PUT", "/constructors/Ranking", spec.dump(), 200);
  EXPECT_TRUE(body.at("invalidated").empty());
  EXPECT_EQ(get("/constructors/Ranking", 200).at("keys").size(), spec.at("keys").size());
  EXPECT_EQ(get("/render?content_id=Q62&lang=en", 200).at("complete"), true);
}

TEST_F(ServiceTest, RequiredKeyReportsInvalidatedContent) {
  auto spec = get("/constructors/Ranking", 200);
  spec["keys"].push_back({{"id", "year"}, {"required", true}, {"accepted", json::array({"integer"})}});
  auto body = send("PUT", "/constructors/Ranking", spec.dump(), 200);
  EXPECT_EQ(body.at("invalidated"), json::array({"Q62"}));
}

TEST_F(ServiceTest, ConstructorValidation) {
  expect_error_body(get("/constructors/Nope", 404), "UNKNOWN_CONSTRUCTOR");
  expect_error_body(send("PUT", "/constructors/Ranking", "{", 400), "PARSE_ERROR");
  json dup = {{"keys", json::array({{{"id", "a"}, {"accepted", {"text"}}},
                                    {{"id", "a"}, {"accepted", {"text"}}}})}};
  expect_error_body(send("PUT", "/constructors/Dup", dup.dump(), 400), "INVALID_DOCUMENT");
  json mismatch = {{"id", "Other"}, {"keys", json::array()}};
  expect_error_body(send("PUT", "/constructors/Dup", mismatch.dump(), 400), "INVALID_DOCUMENT");
  EXPECT_GE(get("/constructors", 200).at("ids").size(), 9u);
}

TEST_F(ServiceTest, Functions) {
  auto def = get("/functions/multiply", 200);
  EXPECT_EQ(def.at("implementations").size(), 2u);
  expect_error_body(get("/functions/froz", 404), "UNKNOWN_FUNCTION");
  json twice = {{"params", json::array({{{"name", "x"}, {"type", "positive_integer"}}})},
                {"return_type", "positive_integer"},
                {"tests", json::array({{{"args", {3}}, {"expected", 6}}})},
                {"implementations",
                 json::array({{{"id", "twice_composition"},
                               {"kind", "composition"},
                               {"body", "add(x, x)"}}})}};
  send("PUT", "/functions/twice", twice.dump(), 200);
  auto result = send("POST", "/evaluate", json({{"fn", "twice"}, {"args", {21}}}).dump(), 200);
  EXPECT_EQ(result.at("value").at("json"), 42);
  twice["implementations"][0]["body"] = "froz(x)";
  expect_error_body(send("PUT", "/functions/twice", twice.dump(), 404), "UNKNOWN_FUNCTION");
  // the failed update left the old definition in place
  result = send("POST", "/evaluate", json({{"fn", "twice"}, {"args", {2}}}).dump(), 200);
  EXPECT_EQ(result.at("value").at("json"), 4);
}

TEST_F(ServiceTest, Evaluate) {
  auto body = send("POST", "/evaluate", R"({"fn": "multiply", "args": [3, 4]})", 200);
  EXPECT_EQ(body.at("value").at("json"), 12);
  EXPECT_EQ(body.at("value").at("notation"), "12");
  body = send("POST", "/evaluate", R"({"fn": "subtract", "args": ["1", "2"]})", 200);
  EXPECT_EQ(body.at("value").at("json"), 0);
  body = send("POST", "/evaluate", R"({"fn": "ordinal", "args": [4, "\"en\""]})", 200);
  EXPECT_EQ(body.at("value").at("json"), "fourth");
  expect_error_body(send("POST", "/evaluate", R"({"fn": "froz", "args": []})", 404),
                    "UNKNOWN_FUNCTION");
  expect_error_body(send("POST", "/evaluate", R"({"fn": "multiply", "args": [1]})", 400),
                    "TYPE_ERROR");
  expect_error_body(send("POST", "/evaluate", R"({"fn": "ordinal", "args": [0, "\"en\""]})", 422),
                    "PRECONDITION_FAILED");
  expect_error_body(send("POST", "/evaluate", R"({"fn": "multiply", "args": [300, 1], "implementation": "multiply_composition"})", 422),
                    "DEPTH_EXCEEDED");
  body = send("POST", "/evaluate",
              R"({"fn": "multiply", "args": [6, 7], "implementation": "multiply_composition"})", 200);
  EXPECT_EQ(body.at("value").at("json"), 42);
  expect_error_body(send("POST", "/evaluate", R"({"args": []})", 400), "INVALID_DOCUMENT");
}

TEST_F(ServiceTest, LexemesAndItems) {
  auto be = get("/lexemes/L1883", 200);
  EXPECT_EQ(be.at("lemma"), "be");
  expect_error_body(get("/lexemes/L1", 404), "UNKNOWN_LEXEME");
  auto stadt = get("/lexemes/L900205", 200);
  for (auto& f : stadt["forms"]) {
    if (f.at("form") == "Stadt") f["form"] = "Großstadt";
  }
  send("PUT", "/lexemes/L900205", stadt.dump(), 200);
  auto text = get("/render?content_id=Q62&lang=de", 200).at("text").get<std::string>();
  EXPECT_NE(text.find("viertgrößte Großstadt"), std::string::npos) << text;

  auto q65 = get("/items/Q65", 200);
  EXPECT_EQ(q65.at("labels").at("en"), "Los Angeles");
  q65["labels"]["de"] = "L.A.";
  send("PUT", "/items/Q65", q65.dump(), 200);
  text = get("/render?content_id=Q62&lang=de", 200).at("text").get<std::string>();
  EXPECT_NE(text.find("nach L.A., San Diego"), std::string::npos) << text;
  expect_error_body(get("/items/Q424242", 404), "UNKNOWN_ITEM");
  expect_error_body(send("PUT", "/items/Q9", R"({"labels": {}})", 400), "INVALID_DOCUMENT");
}

TEST_F(ServiceTest, Suggest) {
  json req = {{"text", "Q62 is the fourth-most populous city in Q99"}, {"lang", "en"}};
  auto body = send("POST", "/suggest", req.dump(), 200);
  ASSERT_FALSE(body.at("candidates").empty());
  auto first = body.at("candidates")[0];
  EXPECT_EQ(first.at("rule"), "ranking-in-en");
  EXPECT_EQ(first.at("content"),
            "Ranking(subject: Q62, rank: 4, object: city (Q515), by: population (Q1613416), "
            "local_constraint: Q99)");
  EXPECT_TRUE(first.at("diagnostics").empty());
  EXPECT_TRUE(send("POST", "/suggest", R"({"text": "", "lang": "en"})", 200).at("candidates").empty());
  EXPECT_TRUE(send("POST", "/suggest", R"({"text": "hello there", "lang": "en"})", 200)
                  .at("candidates")
                  .empty());
}

TEST_F(ServiceTest, UnknownEndpointIsStructured) {
  expect_error_body(get("/nope", 404), "NOT_FOUND");
}

TEST_F(ServiceTest, ConcurrentRenders) {
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&, i] {
      httplib::Client c("127.0.0.1", port);
      for (int k = 0; k < 10; ++k) {
        auto res = c.Get(std::string("/render?content_id=Q62&lang=") + (i % 2 ? "en" : "de"));
        if (res && res->status == 200) ++ok;
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(ok.load(), 80);
}
