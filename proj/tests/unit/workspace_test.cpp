#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include "abswiki/error.hpp"
#include "abswiki/workspace.hpp"

using namespace abswiki;

namespace {

std::filesystem::path write_config(const std::string& text) {
  auto dir = std::filesystem::temp_directory_path() / "abswiki_config_test";
  std::filesystem::create_directories(dir);
  auto file = dir / "config.json";
  std::ofstream(file) << text;
  return file;
}

}  // namespace

TEST(Config, Defaults) {
  auto c = Config::load();
  EXPECT_EQ(c.port, 8080);
  EXPECT_EQ(c.cache_size, 10000u);
  EXPECT_EQ(c.depth_limit, 256);
  EXPECT_FALSE(c.remote_fetch);
}

TEST(Config, FileThenEnvironment) {
  auto file = write_config(R"({"listen": "0.0.0.0:9000", "data_dir": "data", "cache_size": 50,
                              "depth_limit": 64, "remote_fetch": true})");
  auto c = Config::load(file);
  EXPECT_EQ(c.host, "0.0.0.0");
  EXPECT_EQ(c.port, 9000);
  EXPECT_EQ(c.data_dir, file.parent_path() / "data");
  EXPECT_EQ(c.cache_size, 50u);
  EXPECT_EQ(c.depth_limit, 64);
  EXPECT_TRUE(c.remote_fetch);

  setenv("ABSWIKI_LISTEN", "127.0.0.1:9100", 1);
  setenv("ABSWIKI_DEPTH_LIMIT", "32", 1);
  setenv("ABSWIKI_REMOTE_FETCH", "off", 1);
  c = Config::load(file);
  unsetenv("ABSWIKI_LISTEN");
  unsetenv("ABSWIKI_DEPTH_LIMIT");
  unsetenv("ABSWIKI_REMOTE_FETCH");
  EXPECT_EQ(c.port, 9100);
  EXPECT_EQ(c.depth_limit, 32);
  EXPECT_FALSE(c.remote_fetch);
}

TEST(Config, BadValues) {
  auto file = write_config(R"({"cache_size": "many"})");
  try {
    Config::load(file);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_document);
  }
  setenv("ABSWIKI_CACHE_SIZE", "lots", 1);
  EXPECT_THROW(Config::load(), Error);
  unsetenv("ABSWIKI_CACHE_SIZE");
}

TEST(Workspace, DepthLimitFromConfig) {
  Config config;
  config.data_dir = ABSWIKI_FIXTURES;
  config.depth_limit = 10;
  Workspace ws(config);
  ws.load();
  EvalOptions composed;
  composed.pinned.emplace("multiply", "multiply_composition");
  EXPECT_EQ(ws.registry().evaluate("multiply", {Value::integer(9), Value::integer(2)}, composed),
            Value::integer(18));
  try {
    ws.registry().evaluate("multiply", {Value::integer(11), Value::integer(1)}, composed);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::depth_exceeded);
  }
}

TEST(Workspace, LoadsFixtureDirectory) {
  Config config;
  config.data_dir = ABSWIKI_FIXTURES;
  Workspace ws(config);
  ws.load();
  EXPECT_EQ(ws.content_ids(), std::vector<std::string>{"Q62"});
  EXPECT_TRUE(ws.check(*ws.find_content("Q62")).empty());
  EXPECT_EQ(ws.renderers().languages(), (std::vector<std::string>{"de", "en"}));
  EXPECT_FALSE(ws.suggest_rules().rules().empty());
}

TEST(Workspace, MissingDataDirectory) {
  Config config;
  config.data_dir = "/nonexistent/abswiki";
  Workspace ws(config);
  try {
    ws.load();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::io_error);
  }
}

TEST(Workspace, ScratchIdsAreFresh) {
  Config config;
  config.data_dir = ABSWIKI_FIXTURES;
  Workspace ws(config);
  ws.load();
  auto a = ws.store_content("Article(content: [])", std::nullopt);
  auto b = ws.store_content("Article(content: [])", std::nullopt);
  EXPECT_NE(a.id, b.id);
  EXPECT_THROW(ws.store_content("Article(content: [])", std::string("not-an-item")), Error);
  EXPECT_THROW(ws.store_content("Article(", std::nullopt), SyntaxError);
}
