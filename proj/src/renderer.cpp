#include "abswiki/renderer.hpp"

#include <algorithm>
#include <mutex>

#include "abswiki/entity_store.hpp"
#include "abswiki/error.hpp"
#include "abswiki/json_io.hpp"
#include "abswiki/lexicon.hpp"

namespace abswiki {

// ---- manifests --------------------------------------------------------------

void RendererSets::put(RendererSet set) {
  if (set.language.empty()) throw Error(ErrorCode::invalid_document, "renderer set has no language");
  std::unique_lock lock(mutex_);
  sets_[set.language] = std::move(set);
}

bool RendererSets::remove(std::string_view language) {
  std::unique_lock lock(mutex_);
  auto it = sets_.find(language);
  if (it == sets_.end()) return false;
  sets_.erase(it);
  return true;
}

std::optional<RendererSet> RendererSets::find(std::string_view language) const {
  std::shared_lock lock(mutex_);
  auto it = sets_.find(language);
  if (it == sets_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> RendererSets::languages() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [lang, set] : sets_) out.push_back(lang);
  return out;
}

void RendererSets::load_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::io_error, "not a directory: " + dir.string());
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    json doc = read_json_file(entry.path());
    put(with_document_errors(entry.path().string(), [&] {
      RendererSet set;
      set.language = doc.at("language").get<std::string>();
      set.conjunction = doc.value("conjunction", std::string{});
      set.renderers = doc.value("renderers", std::map<std::string, std::string>{});
      return set;
    }));
  }
}

void RendererSets::save(const std::filesystem::path& dir, const RendererSet& set) {
  write_json_file(dir / (set.language + ".json"),
                  json{{"language", set.language},
                       {"conjunction", set.conjunction},
                       {"renderers", set.renderers}});
}

// ---- phrase helpers ---------------------------------------------------------

namespace {

using PhrasePtr = std::shared_ptr<const Phrase>;

void append_parts(std::vector<PhrasePart>& parts, const Value& v) {
  switch (v.kind()) {
    case Value::Kind::text:
      if (!v.as_text().empty()) parts.emplace_back(v.as_text());
      break;
    case Value::Kind::integer: parts.emplace_back(std::to_string(v.as_integer())); break;
    case Value::Kind::phrase: parts.emplace_back(v.phrase_ptr()); break;
    case Value::Kind::list:
      for (const auto& e : v.as_list()) append_parts(parts, e);
      break;
    default:
      throw Error(ErrorCode::type_error,
                  "cannot use " + std::string(to_string(v.kind())) + " as phrase part: " +
                      serialize_value(v));
  }
}

PhrasePtr to_phrase(const Value& v) {
  if (v.is(Value::Kind::phrase)) return v.phrase_ptr();
  Phrase p;
  append_parts(p.parts, v);
  return std::make_shared<const Phrase>(std::move(p));
}

Value phrase_value(Phrase p) { return Value::phrase(std::make_shared<const Phrase>(std::move(p))); }

Value missing(std::string reason, GrammaticalType type = GrammaticalType::text_fragment) {
  return Value::phrase(make_missing(std::move(reason), type));
}

Value text_or_missing(const OrMissing<std::string>& r, GrammaticalType type,
                      FeatureBundle features = {}) {
  if (const auto* m = std::get_if<MissingForm>(&r)) return missing(m->reason, type);
  return Value::phrase(make_text_phrase(std::get<std::string>(r), type, features));
}

GrammaticalType type_of(Category c) {
  switch (c) {
    case Category::noun:
    case Category::proper_noun:
    case Category::pronoun: return GrammaticalType::noun_phrase;
    case Category::adjective: return GrammaticalType::modifier;
    default: return GrammaticalType::text_fragment;
  }
}

Case case_of(const Value& v) {
  auto c = parse_case(v.as_text());
  if (!c) throw Error(ErrorCode::type_error, "unknown case '" + v.as_text() + "'");
  return *c;
}

FeatureBundle third_singular() {
  FeatureBundle b;
  b.person = Person::third;
  b.number = Number::singular;
  return b;
}

// Phrase of an item as a noun phrase in `context.grammatical_case` (nominative default).
Value render_item(const LanguageResources& res, const ItemRef& item, std::string_view language,
                  const FeatureBundle& context) {
  const Case c = context.grammatical_case.value_or(Case::nominative);
  FeatureBundle features = third_singular();
  features.grammatical_case = c;
  if (auto link = linked_lexeme(res.items, item.id, language)) {
    if (auto lexeme = res.lexicon.find(*link)) features = lexeme->features.merged(features);
  }
  auto form = inflect_np(res.lexicon, res.items, item.id, c, language);
  if (const auto* m = std::get_if<MissingForm>(&form)) {
    return missing(m->reason, GrammaticalType::noun_phrase);
  }
  Phrase p;
  p.type = GrammaticalType::noun_phrase;
  p.features = features;
  p.parts.emplace_back(std::get<std::string>(form));
  p.referent = item.id;
  return phrase_value(std::move(p));
}

RendererSet manifest(const LanguageResources& res, std::string_view language) {
  auto set = res.renderers.find(language);
  if (!set) {
    throw Error(ErrorCode::unsupported_language,
                "no renderer set for language '" + std::string(language) + "'");
  }
  return *set;
}

std::shared_ptr<const Phrase> render_list_impl(const LanguageResources& res,
                                               const Value::List& values,
                                               std::string_view language, std::string_view style,
                                               const FeatureBundle& context,
                                               const std::function<Value(const Value&)>& render_one);

std::shared_ptr<const Phrase> list_in_context(const LanguageResources& res,
                                              const Value::List& values,
                                              std::string_view language, std::string_view style,
                                              const FeatureBundle& context, CallContext& ctx) {
  return render_list_impl(res, values, language, style, context, [&](const Value& v) {
    return ctx.call("render_value", {v, Value::text(std::string(language)),
                                     Value::features(context), Value::text("")});
  });
}

Value render_value_impl(const LanguageResources& res, const Value& value,
                        std::string_view language, const FeatureBundle& context,
                        const std::string& antecedent, CallContext& ctx) {
  switch (value.kind()) {
    case Value::Kind::item: return render_item(res, value.as_item(), language, context);
    case Value::Kind::instantiation: {
      const auto& inst = value.as_instantiation();
      auto set = manifest(res, language);
      auto it = set.renderers.find(inst.constructor);
      if (it == set.renderers.end()) {
        return missing(std::string(to_string(ErrorCode::no_renderer)) + ": no " +
                       std::string(language) + " renderer for " + inst.constructor);
      }
      return ctx.call(it->second, {value, Value::features(context), Value::text(antecedent)});
    }
    case Value::Kind::function_call: {
      const auto& call = value.as_function_call();
      Value result = ctx.call(call.function, call.args);
      return render_value_impl(res, result, language, context, antecedent, ctx);
    }
    case Value::Kind::list: {
      return Value::phrase(list_in_context(res, value.as_list(), language, "plain", context, ctx));
    }
    default: return Value::phrase(to_phrase(value));
  }
}

using RenderFn = std::function<Value(const Value&)>;

std::shared_ptr<const Phrase> render_list_impl(const LanguageResources& res,
                                               const Value::List& values,
                                               std::string_view language, std::string_view style,
                                               const FeatureBundle&, const RenderFn& render_one) {
  if (style != "serial" && style != "plain") {
    throw Error(ErrorCode::type_error, "unknown list style '" + std::string(style) + "'");
  }
  const std::string conjunction = manifest(res, language).conjunction;
  std::vector<PhrasePtr> elements;
  for (const auto& v : values) elements.push_back(to_phrase(render_one(v)));
  if (elements.size() == 1) return elements.front();
  Phrase p;
  if (!elements.empty()) p.type = elements.front()->type;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (i > 0 && i + 1 < elements.size()) {
      p.parts.emplace_back(",");
    } else if (i > 0) {
      if (style == "serial" && elements.size() > 2) p.parts.emplace_back(",");
      p.parts.emplace_back(conjunction);
    }
    p.parts.emplace_back(elements[i]);
  }
  return std::make_shared<const Phrase>(std::move(p));
}

FunctionDef helper(std::string id, std::vector<std::pair<std::string, std::string>> params,
                   std::string_view ret) {
  FunctionDef def;
  def.id = id;
  def.labels["en"] = id;
  for (auto& [name, type] : params) def.params.push_back({name, TypeRef::parse(type)});
  def.return_type = TypeRef::parse(ret);
  def.implementations.push_back(
      Implementation{id + "_builtin", Implementation::Kind::builtin, id, {}});
  return def;
}

FunctionDef composed(std::string id, std::vector<std::pair<std::string, std::string>> params,
                     std::string_view ret, std::string body) {
  FunctionDef def = helper(std::move(id), std::move(params), ret);
  def.implementations.front() =
      Implementation{def.id + "_composition", Implementation::Kind::composition, {}, std::move(body)};
  return def;
}

void collect_tokens(const Phrase& p, std::vector<std::string>& out);

void collect_glued(const Phrase& p, std::string& out) {
  for (const auto& part : p.parts) {
    if (const auto* s = std::get_if<std::string>(&part)) {
      out += *s;
    } else if (const auto* child = std::get_if<PhrasePtr>(&part)) {
      collect_glued(**child, out);
    } else {
      throw Error(ErrorCode::incomplete_phrase, std::get<MissingPart>(part).reason);
    }
  }
}

void collect_tokens(const Phrase& p, std::vector<std::string>& out) {
  if (p.glued) {
    std::string word;
    collect_glued(p, word);
    if (!word.empty()) out.push_back(std::move(word));
    return;
  }
  for (const auto& part : p.parts) {
    if (const auto* s = std::get_if<std::string>(&part)) {
      if (!s->empty()) out.push_back(*s);
    } else if (const auto* child = std::get_if<PhrasePtr>(&part)) {
      collect_tokens(**child, out);
    } else {
      throw Error(ErrorCode::incomplete_phrase, std::get<MissingPart>(part).reason);
    }
  }
}

// Upper-cases an initial ASCII or Latin-1 letter.
void capitalize(std::string& s) {
  if (s.empty()) return;
  auto c = static_cast<unsigned char>(s[0]);
  if (c >= 'a' && c <= 'z') {
    s[0] = static_cast<char>(c - 'a' + 'A');
  } else if (c == 0xC3 && s.size() > 1) {
    auto d = static_cast<unsigned char>(s[1]);
    if (d >= 0xA0 && d <= 0xBE && d != 0xB7) s[1] = static_cast<char>(d - 0x20);
  }
}

std::vector<std::pair<Path, Value>> sentences_of(const Content& content) {
  std::vector<std::pair<Path, Value>> out;
  for (const auto& arg : content.root.arguments) {
    if (arg.value.is(Value::Kind::list)) {
      const auto& list = arg.value.as_list();
      for (std::size_t i = 0; i < list.size(); ++i) {
        out.push_back({Path{arg.key, i}, list[i]});
      }
    } else {
      out.push_back({Path{arg.key}, arg.value});
    }
  }
  return out;
}

}  // namespace

// ---- registration -----------------------------------------------------------

void register_language_functions(Registry& registry, const LanguageResources& resources) {
  const LanguageResources res = resources;

  registry.register_builtin("render_value", [res](std::span<const Value> a, CallContext& ctx) {
    return render_value_impl(res, a[0], a[1].as_text(), a[2].as_features(), a[3].as_text(), ctx);
  });
  registry.register_builtin("arg", [](std::span<const Value> a, CallContext&) {
    const Value* v = a[0].as_instantiation().find(a[1].as_text());
    if (v == nullptr) {
      throw Error(ErrorCode::path_not_found, a[0].as_instantiation().constructor + " has no key '" +
                                                 a[1].as_text() + "'");
    }
    return *v;
  });
  registry.register_builtin("has", [](std::span<const Value> a, CallContext&) {
    return Value::boolean(a[0].as_instantiation().find(a[1].as_text()) != nullptr);
  });
  registry.register_builtin("bundle", [](std::span<const Value> a, CallContext&) {
    return Value::features(FeatureBundle::parse(a[0].as_text()));
  });
  registry.register_builtin("merge_features", [](std::span<const Value> a, CallContext&) {
    return Value::features(a[0].as_features().merged(a[1].as_features()));
  });

  registry.register_builtin("lookup_form", [res](std::span<const Value> a, CallContext&) {
    if (!res.lexicon.find(a[0].as_text())) return missing("missing lexeme " + a[0].as_text());
    return text_or_missing(res.lexicon.lookup_form(a[0].as_text(), a[1].as_features()),
                           GrammaticalType::text_fragment);
  });
  registry.register_builtin("word", [res](std::span<const Value> a, CallContext&) {
    auto lexeme = res.lexicon.find(a[0].as_text());
    if (!lexeme) return missing("missing lexeme " + a[0].as_text());
    const auto& wanted = a[1].as_features();
    FeatureBundle features = lexeme->features.merged(wanted);
    if (type_of(lexeme->category) == GrammaticalType::noun_phrase && !features.person) {
      features.person = Person::third;
    }
    return text_or_missing(res.lexicon.lookup_form(lexeme->id, wanted), type_of(lexeme->category),
                           features);
  });
  registry.register_builtin("ordinal", [res](std::span<const Value> a, CallContext&) {
    return Value::text(res.lexicon.ordinal(a[0].as_integer(), a[1].as_text()));
  });
  registry.register_builtin("superlative", [res](std::span<const Value> a, CallContext&) {
    return text_or_missing(res.lexicon.superlative(a[0].as_item().id, a[1].as_text()),
                           GrammaticalType::modifier);
  });
  registry.register_builtin("article", [res](std::span<const Value> a, CallContext&) {
    auto d = parse_definiteness(a[0].as_text());
    if (!d) throw Error(ErrorCode::type_error, "unknown definiteness '" + a[0].as_text() + "'");
    const auto& f = a[1].as_features();
    return text_or_missing(res.lexicon.article(*d, f.gender, a[2].as_text(), f),
                           GrammaticalType::text_fragment);
  });
  registry.register_builtin("gender_of", [res](std::span<const Value> a, CallContext&) {
    FeatureBundle out;
    const Value& ref = a[0];
    if (ref.is(Value::Kind::phrase)) {
      out.gender = ref.as_phrase().features.gender;
    } else {
      std::string id = ref.is(Value::Kind::item) ? ref.as_item().id : ref.as_text();
      auto g = gender_of(res.lexicon, res.items, id, a[1].as_text());
      if (const auto* gender = std::get_if<Gender>(&g)) out.gender = *gender;
    }
    return Value::features(out);
  });
  registry.register_builtin("inflect_np", [res](std::span<const Value> a, CallContext&) {
    FeatureBundle context;
    context.grammatical_case = case_of(a[1]);
    return render_item(res, a[0].as_item(), a[2].as_text(), context);
  });

  registry.register_builtin("np", [](std::span<const Value> a, CallContext&) {
    Phrase p;
    p.type = GrammaticalType::noun_phrase;
    append_parts(p.parts, a[0]);
    // The head noun is the last noun-phrase child; it carries the agreement features.
    for (auto it = p.parts.rbegin(); it != p.parts.rend(); ++it) {
      if (const auto* child = std::get_if<PhrasePtr>(&*it);
          child && (*child)->type == GrammaticalType::noun_phrase) {
        p.features = (*child)->features;
        p.referent = (*child)->referent;
        break;
      }
    }
    return phrase_value(std::move(p));
  });
  registry.register_builtin("glue", [](std::span<const Value> a, CallContext&) {
    Phrase p;
    p.glued = true;
    append_parts(p.parts, a[0]);
    return phrase_value(std::move(p));
  });
  registry.register_builtin("sentence", [res](std::span<const Value> a, CallContext&) {
    PhrasePtr subject = to_phrase(a[0]);
    FeatureBundle agree;
    agree.person = subject->features.person.value_or(Person::third);
    agree.number = subject->features.number.value_or(Number::singular);
    agree.set("tense", a[2].as_text());
    Phrase verb;
    verb.features = agree;
    if (!res.lexicon.find(a[1].as_text())) {
      verb.parts.emplace_back(MissingPart{"missing lexeme " + a[1].as_text()});
    } else {
      auto form = res.lexicon.lookup_form(a[1].as_text(), agree);
      if (const auto* m = std::get_if<MissingForm>(&form)) {
        verb.parts.emplace_back(MissingPart{m->reason});
      } else {
        verb.parts.emplace_back(std::get<std::string>(form));
      }
    }
    Phrase p;
    p.type = GrammaticalType::sentence;
    p.features = agree;
    p.referent = subject->referent;
    p.parts.emplace_back(subject);
    p.parts.emplace_back(std::make_shared<const Phrase>(std::move(verb)));
    append_parts(p.parts, a[3]);
    return phrase_value(std::move(p));
  });
  registry.register_builtin("render_list", [res](std::span<const Value> a, CallContext& ctx) {
    return Value::phrase(
        list_in_context(res, a[0].as_list(), a[1].as_text(), a[2].as_text(), a[3].as_features(), ctx));
  });
  registry.register_builtin("pronoun_or_name", [res](std::span<const Value> a, CallContext&) {
    const auto& item = a[0].as_item();
    const std::string language = a[2].as_text();
    if (item.id != a[1].as_text()) {
      FeatureBundle nominative;
      nominative.grammatical_case = Case::nominative;
      return render_item(res, item, language, nominative);
    }
    FeatureBundle features = third_singular();
    features.gender = Gender::neuter;
    features.grammatical_case = Case::nominative;
    Phrase p;
    p.type = GrammaticalType::noun_phrase;
    p.features = features;
    p.referent = item.id;
    p.dependency_group = item.id;
    auto lexeme = res.lexicon.find_by_category(Category::pronoun, language);
    if (!lexeme) {
      p.parts.emplace_back(MissingPart{"no pronoun lexeme in '" + language + "'"});
    } else {
      auto form = res.lexicon.lookup_form(lexeme->id, features);
      if (const auto* m = std::get_if<MissingForm>(&form)) {
        p.parts.emplace_back(MissingPart{m->reason});
      } else {
        p.parts.emplace_back(std::get<std::string>(form));
      }
    }
    return phrase_value(std::move(p));
  });
  registry.register_builtin("render", [res](std::span<const Value> a, CallContext& ctx) {
    Content content{a[0].as_instantiation()};
    return Value::text(render(ctx.registry(), res, content, a[1].as_text(), ctx.options()).text);
  });

  std::vector<FunctionDef> defs;
  defs.push_back(helper("render_value",
                        {{"value", "any"},
                         {"language", "text"},
                         {"context", "features"},
                         {"antecedent", "text"}},
                        "phrase"));
  defs.push_back(helper("arg", {{"instance", "instantiation"}, {"key", "text"}}, "any"));
  defs.push_back(helper("has", {{"instance", "instantiation"}, {"key", "text"}}, "boolean"));
  defs.push_back(helper("bundle", {{"text", "text"}}, "features"));
  defs.push_back(helper("merge_features", {{"base", "features"}, {"overrides", "features"}},
                        "features"));
  defs.push_back(helper("lookup_form", {{"lexeme", "text"}, {"features", "features"}}, "phrase"));
  defs.push_back(helper("word", {{"lexeme", "text"}, {"features", "features"}}, "phrase"));
  FunctionDef ordinal = helper("ordinal", {{"n", "positive_integer"}, {"language", "text"}}, "text");
  ordinal.preconditions = {"not(is_zero(n))"};
  defs.push_back(std::move(ordinal));
  defs.push_back(helper("superlative", {{"property", "item"}, {"language", "text"}}, "phrase"));
  defs.push_back(helper("article",
                        {{"definiteness", "text"}, {"features", "features"}, {"language", "text"}},
                        "phrase"));
  defs.push_back(helper("gender_of", {{"ref", "any"}, {"language", "text"}}, "features"));
  defs.push_back(helper("inflect_np", {{"np", "item"}, {"case", "text"}, {"language", "text"}},
                        "phrase"));
  defs.push_back(composed("genitive", {{"np", "item"}, {"language", "text"}}, "phrase",
                          "inflect_np(np, \"genitive\", language)"));
  defs.push_back(composed("dative", {{"np", "item"}, {"language", "text"}}, "phrase",
                          "inflect_np(np, \"dative\", language)"));
  defs.push_back(composed("with_gender",
                          {{"context", "features"}, {"ref", "any"}, {"language", "text"}},
                          "features", "merge_features(context, gender_of(ref, language))"));
  defs.push_back(helper("np", {{"parts", "list(any)"}}, "phrase"));
  defs.push_back(helper("glue", {{"parts", "list(any)"}}, "phrase"));
  defs.push_back(helper("sentence",
                        {{"subject", "any"},
                         {"verb", "text"},
                         {"tense", "text"},
                         {"rest", "list(any)"}},
                        "phrase"));
  defs.push_back(helper("render_list",
                        {{"values", "list(any)"},
                         {"language", "text"},
                         {"style", "text"},
                         {"context", "features"}},
                        "phrase"));
  defs.push_back(helper("pronoun_or_name",
                        {{"item", "item"}, {"antecedent", "text"}, {"language", "text"}},
                        "phrase"));
  defs.push_back(helper("render", {{"content", "instantiation"}, {"language", "text"}}, "text"));
  registry.register_functions(std::move(defs));
}

ValidationOptions registry_validation_options(const Registry& registry) {
  ValidationOptions options;
  options.function_return_type = [&registry](std::string_view fn) -> std::optional<std::string> {
    auto def = registry.find(fn);
    if (!def) return std::nullopt;
    return def->return_type.to_string();
  };
  return options;
}

// ---- rendering --------------------------------------------------------------

std::shared_ptr<const Phrase> render_constructor(const Registry& registry,
                                                 const LanguageResources& resources,
                                                 const Instantiation& inst,
                                                 std::string_view language,
                                                 const FeatureBundle& context,
                                                 const std::string& antecedent) {
  auto set = manifest(resources, language);
  auto it = set.renderers.find(inst.constructor);
  if (it == set.renderers.end()) {
    throw Error(ErrorCode::no_renderer,
                "no " + std::string(language) + " renderer for " + inst.constructor);
  }
  return registry
      .evaluate(it->second,
                {Value::instantiation(inst), Value::features(context), Value::text(antecedent)})
      .phrase_ptr();
}

std::shared_ptr<const Phrase> render_list(const Registry& registry,
                                          const LanguageResources& resources,
                                          const Value::List& values, std::string_view language,
                                          std::string_view style, const FeatureBundle& context) {
  return render_list_impl(resources, values, language, style, context,
                          [&](const Value& v) { return registry.evaluate("render_value", {v, Value::text(std::string(language)), Value::features(context), Value::text("")}); });
}

RenderOutcome render(const Registry& registry, const LanguageResources& resources,
                     const Content& content, std::string_view language,
                     const EvalOptions& options) {
  auto diagnostics = validate(content, resources.catalog, registry_validation_options(registry));
  if (!diagnostics.empty()) {
    const auto& d = diagnostics.front();
    throw Error(ErrorCode::validation_failed,
                std::to_string(diagnostics.size()) + " validation problem(s); first: " + d.code +
                    " at " + to_string(d.path) + ": " + d.message,
                to_string(d.path));
  }
  auto set = resources.renderers.find(language);
  if (!set || set->renderers.empty()) {
    throw Error(ErrorCode::unsupported_language,
                "no renderers for language '" + std::string(language) + "'");
  }

  RenderOutcome outcome;
  std::string antecedent;
  std::optional<std::string> provided;  // referent of the sentence rendered just before
  for (const auto& [path, value] : sentences_of(content)) {
    PhrasePtr phrase;
    std::string reason;
    try {
      phrase = registry
                   .evaluate("render_value",
                             {value, Value::text(std::string(language)),
                              Value::features({}), Value::text(antecedent)},
                             options)
                   .phrase_ptr();
    } catch (const Error& e) {
      reason = std::string(to_string(e.code())) + ": " + e.what();
    }
    if (phrase) {
      if (auto m = phrase->first_missing()) {
        reason = *m;
      } else {
        for (const auto& group : phrase->dependency_groups()) {
          if (group != provided) {
            reason = "depends on the omitted sentence introducing " + group;
            break;
          }
        }
      }
    }
    // The next sentence may refer back to this subject whether or not it rendered;
    // its dependency check then decides.
    antecedent = phrase && phrase->referent ? *phrase->referent : std::string{};
    if (reason.empty()) {
      try {
        std::string text = linearize(*phrase, language);
        if (!text.empty()) {
          if (!outcome.text.empty()) outcome.text += ' ';
          outcome.text += text;
        }
        provided = phrase->referent;
        continue;
      } catch (const Error& e) {
        reason = std::string(to_string(e.code())) + ": " + e.what();
      }
    }
    outcome.omissions.push_back({path, reason});
    provided.reset();
  }
  outcome.complete = outcome.omissions.empty();
  return outcome;
}

std::string linearize(const Phrase& phrase, std::string_view) {
  std::vector<std::string> tokens;
  collect_tokens(phrase, tokens);
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty() && t.front() != ',' && t.front() != '.') out += ' ';
    out += t;
  }
  if (phrase.type == GrammaticalType::sentence && !out.empty()) {
    capitalize(out);
    if (out.back() != '.') out += '.';
  }
  return out;
}

}  // namespace abswiki
