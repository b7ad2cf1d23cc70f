#pragma once

#include <limits>
#include <random>
#include <string>
#include <vector>

#include "abswiki/content.hpp"

namespace abswiki::testing {

// Random trees over every value variant the notation can carry.
class TreeGen {
 public:
  explicit TreeGen(std::uint32_t seed) : rng_(seed) {}

  Content content() { return Content{instantiation(0)}; }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::string identifier() {
    static const std::string first = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPRSTUVWXYZ_";
    static const std::string rest = "abcdefghijklmnopqrstuvwxyz0123456789_";
    std::string out(1, first[pick(static_cast<int>(first.size()))]);
    int n = pick(8);
    for (int i = 0; i < n; ++i) out += rest[pick(static_cast<int>(rest.size()))];
    if (out == "true" || out == "false") out += "_";
    return out;
  }

  std::string text() {
    static const std::vector<std::string> pieces = {"a", "Z", " ", "\"", "\\", "\n", "\t", "ß",
                                                    "中", "(", ")", ",", ":", "Q1", "é", "0"};
    std::string out;
    int n = pick(10);
    for (int i = 0; i < n; ++i) out += pieces[pick(static_cast<int>(pieces.size()))];
    return out;
  }

  std::string item_id() { return "Q" + std::to_string(1 + pick(99999)); }

  Value value(int depth) {
    int kinds = depth >= 4 ? 3 : 6;
    switch (pick(kinds)) {
      case 0: {
        std::int64_t v = std::uniform_int_distribution<std::int64_t>(
            std::numeric_limits<std::int64_t>::min(), std::numeric_limits<std::int64_t>::max())(rng_);
        return Value::integer(pick(2) == 0 ? v : v % 100);
      }
      case 1: return Value::text(text());
      case 2: {
        std::string label;
        switch (pick(3)) {
          case 0: break;
          case 1: label = identifier() + (pick(2) == 0 ? "" : " " + identifier()); break;
          default: label = text(); break;
        }
        return Value::item(item_id(), label);
      }
      case 3: {
        Value::List items;
        int n = pick(4);
        for (int i = 0; i < n; ++i) items.push_back(value(depth + 1));
        return Value::list(std::move(items));
      }
      case 4: {
        FunctionCall call{identifier(), {}};
        int n = pick(3);
        for (int i = 0; i < n; ++i) call.args.push_back(value(depth + 1));
        return Value::call(std::move(call));
      }
      default: return Value::instantiation(instantiation(depth + 1));
    }
  }

  Instantiation instantiation(int depth) {
    Instantiation inst;
    inst.constructor = identifier();
    int n = depth >= 4 ? 0 : pick(5);
    for (int i = 0; i < n; ++i) {
      std::string key = identifier();
      if (inst.find(key) != nullptr) continue;
      inst.arguments.push_back(Argument{key, value(depth)});
    }
    return inst;
  }

  std::mt19937 rng_;
};

}  // namespace abswiki::testing
