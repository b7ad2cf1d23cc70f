#include "abswiki/suggest.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "abswiki/content.hpp"
#include "abswiki/entity_store.hpp"
#include "abswiki/error.hpp"
#include "abswiki/json_io.hpp"
#include "abswiki/lexicon.hpp"

namespace abswiki {

namespace {

struct Segment {
  bool slot = false;
  std::string text;  // literal text, or slot name
  std::string type;  // slot type
};

const std::set<std::string, std::less<>> slot_types = {"item", "ordinal", "superlative",
                                                       "integer"};

std::vector<Segment> compile_pattern(const std::string& pattern) {
  std::vector<Segment> out;
  std::size_t i = 0;
  while (i < pattern.size()) {
    if (pattern[i] == '{') {
      auto close = pattern.find('}', i);
      auto colon = pattern.find(':', i);
      if (close == std::string::npos || colon == std::string::npos || colon > close) {
        throw Error(ErrorCode::invalid_document, "bad slot in pattern '" + pattern + "'");
      }
      Segment s{true, pattern.substr(i + 1, colon - i - 1),
                pattern.substr(colon + 1, close - colon - 1)};
      if (s.text.empty() || slot_types.count(s.type) == 0) {
        throw Error(ErrorCode::invalid_document, "bad slot '{" + s.text + ":" + s.type + "}'");
      }
      if (!out.empty() && out.back().slot) {
        // Two adjacent slots are still matchable by backtracking, but keep it explicit.
        out.push_back(Segment{false, "", ""});
      }
      out.push_back(std::move(s));
      i = close + 1;
    } else {
      auto next = pattern.find('{', i);
      if (next == std::string::npos) next = pattern.size();
      out.push_back(Segment{false, pattern.substr(i, next - i), ""});
      i = next;
    }
  }
  return out;
}

std::string normalize(std::string_view text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += c;
  }
  while (!out.empty() && (out.back() == '.' || out.back() == ' ')) out.pop_back();
  return out;
}

class Matcher {
 public:
  Matcher(const std::vector<Segment>& segments, const std::string& text,
          std::string_view language, const Lexicon& lexicon, const EntityStore& items)
      : segments_(segments), text_(text), language_(language), lexicon_(lexicon), items_(items) {}

  std::vector<std::map<std::string, Value>> run() {
    std::map<std::string, Value> bindings;
    match(0, 0, bindings);
    return std::move(results_);
  }

 private:
  void match(std::size_t seg, std::size_t pos, std::map<std::string, Value>& bindings) {
    if (seg == segments_.size()) {
      if (pos == text_.size()) results_.push_back(bindings);
      return;
    }
    const Segment& s = segments_[seg];
    if (!s.slot) {
      if (text_.compare(pos, s.text.size(), s.text) == 0) match(seg + 1, pos + s.text.size(), bindings);
      return;
    }
    for (std::size_t end = pos + 1; end <= text_.size(); ++end) {
      std::string_view piece(text_.data() + pos, end - pos);
      if (piece.front() == ' ' || piece.back() == ' ') continue;
      for (auto& v : resolve(s.type, piece)) {
        bindings[s.text] = v;
        match(seg + 1, end, bindings);
        bindings.erase(s.text);
      }
    }
  }

  std::string label_of(const std::string& id) const {
    if (!items_.contains(id)) return {};
    return items_.get_label(id, language_).text;
  }

  std::vector<Value> resolve(const std::string& type, std::string_view piece) const {
    std::vector<Value> out;
    if (type == "item") {
      if (is_item_id(piece)) {
        out.push_back(Value::item(std::string(piece)));
      } else {
        for (auto& id : items_.find_by_label(piece, language_)) {
          out.push_back(Value::item(id, std::string(piece)));
        }
      }
    } else if (type == "ordinal") {
      if (auto n = lexicon_.ordinal_value(piece, language_)) out.push_back(Value::integer(*n));
    } else if (type == "superlative") {
      for (auto& id : lexicon_.properties_with_superlative(piece, language_)) {
        out.push_back(Value::item(id, label_of(id)));
      }
    } else if (type == "integer") {
      if (piece.size() < 19 && std::all_of(piece.begin(), piece.end(),
                                           [](char c) { return c >= '0' && c <= '9'; })) {
        out.push_back(Value::integer(std::stoll(std::string(piece))));
      }
    }
    return out;
  }

  const std::vector<Segment>& segments_;
  const std::string& text_;
  std::string language_;
  const Lexicon& lexicon_;
  const EntityStore& items_;
  std::vector<std::map<std::string, Value>> results_;
};

std::string fill(const std::string& templ, const std::map<std::string, Value>& bindings,
                 const Catalog& catalog) {
  std::string out;
  std::size_t i = 0;
  while (i < templ.size()) {
    if (templ[i] == '{') {
      auto close = templ.find('}', i);
      if (close == std::string::npos) {
        throw Error(ErrorCode::invalid_document, "unterminated slot in template '" + templ + "'");
      }
      auto name = templ.substr(i + 1, close - i - 1);
      auto it = bindings.find(name);
      if (it == bindings.end()) {
        throw Error(ErrorCode::invalid_document, "template uses unbound slot '" + name + "'");
      }
      out += serialize_value(it->second, &catalog);
      i = close + 1;
    } else {
      out += templ[i++];
    }
  }
  return out;
}

}  // namespace

void SuggestRules::add(SuggestRule rule) {
  auto segments = compile_pattern(rule.pattern);
  std::set<std::string> names;
  for (const auto& s : segments) {
    if (s.slot && !names.insert(s.text).second) {
      throw Error(ErrorCode::invalid_document, "rule " + rule.id + " repeats slot " + s.text);
    }
  }
  rules_.push_back(std::move(rule));
}

void SuggestRules::load_file(const std::filesystem::path& file) {
  json doc = read_json_file(file);
  with_document_errors(file.string(), [&] {
    for (const auto& r : doc.at("rules")) {
      add(SuggestRule{r.at("id").get<std::string>(), r.at("language").get<std::string>(),
                      r.at("pattern").get<std::string>(), r.at("template").get<std::string>(),
                      r.value("score", 1.0)});
    }
  });
}

std::vector<Suggestion> suggest(std::string_view text, std::string_view language,
                                const SuggestRules& rules, const Catalog& catalog,
                                const Lexicon& lexicon, const EntityStore& items) {
  const std::string input = normalize(text);
  std::vector<Suggestion> out;
  if (input.empty()) return out;
  std::set<std::string> seen;
  const std::vector<ValueDescriptor> sentence = {ValueDescriptor::parse("constructor(sentence)")};
  for (const auto& rule : rules.rules()) {
    if (rule.language != language) continue;
    auto segments = compile_pattern(rule.pattern);
    for (const auto& bindings : Matcher(segments, input, language, lexicon, items).run()) {
      Value content = parse_value(fill(rule.templ, bindings, catalog));
      if (!content.is(Value::Kind::instantiation)) {
        throw Error(ErrorCode::invalid_document, "rule " + rule.id + " does not build a constructor");
      }
      Suggestion s;
      s.rule = rule.id;
      s.score = rule.score;
      s.notation = serialize_value(content, &catalog);
      if (!seen.insert(s.notation).second) continue;
      s.diagnostics = validate_value(content, sentence, catalog);
      for (const auto& id : referenced_items(Content{content.as_instantiation()})) {
        if (!items.contains(id)) {
          s.diagnostics.push_back({{}, "UNKNOWN_ITEM", "item " + id + " is not in the entity store"});
        }
      }
      s.content = std::move(content);
      out.push_back(std::move(s));
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Suggestion& a, const Suggestion& b) { return a.score > b.score; });
  return out;
}

}  // namespace abswiki
