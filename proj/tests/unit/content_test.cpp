#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "abswiki/catalog.hpp"
#include "abswiki/content.hpp"
#include "abswiki/error.hpp"
#include "random_content.hpp"

using namespace abswiki;

namespace {

std::string fixture_text(const std::string& name) {
  std::ifstream in(std::string(ABSWIKI_FIXTURES) + "/" + name);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const Catalog& catalog() {
  static const Catalog c = Catalog::load_directory(std::string(ABSWIKI_FIXTURES) + "/constructors");
  return c;
}

const Content& golden() {
  static const Content c = parse_content(fixture_text("sf.abstract"));
  return c;
}

}  // namespace

TEST(Parse, FixtureArticle) {
  const auto& root = golden().root;
  EXPECT_EQ(root.constructor, "Article");
  const Value* content = root.find("content");
  ASSERT_NE(content, nullptr);
  ASSERT_EQ(content->as_list().size(), 2u);
  EXPECT_EQ(content->as_list()[0].as_instantiation().constructor, "Instantiation");
  EXPECT_EQ(content->as_list()[1].as_instantiation().constructor, "Ranking");
  const auto* subject = value_at(golden(), parse_path("content[1].subject"));
  ASSERT_NE(subject, nullptr);
  EXPECT_EQ(subject->as_item().id, "Q62");
  EXPECT_EQ(subject->as_item().label, "San Francisco");
}

TEST(Parse, BareNameIsZeroArgumentConstructor) {
  Value v = parse_value("cultural");
  ASSERT_TRUE(v.is(Value::Kind::instantiation));
  EXPECT_EQ(v.as_instantiation().constructor, "cultural");
  EXPECT_TRUE(v.as_instantiation().arguments.empty());
}

TEST(Parse, MissingColonPointsAtFollowingToken) {
  try {
    parse_content("Ranking(subject Q62)");
    FAIL() << "parsed";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.code(), ErrorCode::syntax_error);
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 17u);  // Q62
    EXPECT_NE(std::find(e.expected().begin(), e.expected().end(), "':'"), e.expected().end())
        << e.what();
  }
}

TEST(Parse, PositionsCountLinesAndCodePoints) {
  try {
    parse_content("Article(\n  title: \"größe\" x)");
    FAIL() << "parsed";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 18u);
  }
}

TEST(Parse, RejectsDuplicateKeys) {
  EXPECT_THROW(parse_content("A(x: 1, x: 2)"), SyntaxError);
}

TEST(Parse, ItemIdsNeedLeadingNonZero) {
  EXPECT_TRUE(parse_value("Q1").is(Value::Kind::item));
  EXPECT_FALSE(parse_value("Q0").is(Value::Kind::item));
  EXPECT_FALSE(is_item_id("Q012"));
  EXPECT_FALSE(is_item_id("q5"));
}

TEST(Serialize, FixtureMatchesSourceModuloWhitespace) {
  auto squeeze = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c != ' ' && c != '\n' && c != '\t') out += c;
    }
    return out;
  };
  EXPECT_EQ(squeeze(serialize_content(golden(), &catalog())), squeeze(fixture_text("sf.abstract")));
}

TEST(Serialize, ZeroArgumentConstructorIsBareName) {
  EXPECT_EQ(serialize_value(parse_value("cultural()")), "cultural");
}

TEST(Serialize, NestedConstructorInline) {
  auto c = parse_content("A(b: B(c: C(d: 1)), e: [C, \"x\"])");
  EXPECT_EQ(serialize_content(c), "A(b: B(c: C(d: 1)), e: [C, \"x\"])");
  EXPECT_EQ(parse_content(serialize_content(c)), c);
}

TEST(Serialize, KeyOrderInsignificantForEquality) {
  EXPECT_EQ(parse_content("A(x: 1, y: 2)"), parse_content("A(y: 2, x: 1)"));
  EXPECT_EQ(serialize_content(parse_content("A(y: 2, x: 1)")), "A(x: 1, y: 2)");
}

TEST(Edit, RankAndAfterList) {
  auto edited = edit_value(golden(), parse_path("content[1].rank"), Value::integer(3));
  edited = remove_value(edited, parse_path("content[1].after[2]"));
  EXPECT_EQ(value_at(edited, parse_path("content[1].rank"))->as_integer(), 3);
  const auto& after = value_at(edited, parse_path("content[1].after"))->as_list();
  ASSERT_EQ(after.size(), 2u);
  EXPECT_EQ(after[1].as_item().id, "Q16552");
  // the input is untouched
  EXPECT_EQ(value_at(golden(), parse_path("content[1].rank"))->as_integer(), 4);
}

TEST(Edit, IdentityEdit) {
  auto path = parse_path("content[0].class.modifier");
  auto edited = edit_value(golden(), path, *value_at(golden(), path));
  EXPECT_EQ(edited, golden());
}

TEST(Edit, PathIntoScalarFails) {
  try {
    edit_value(golden(), parse_path("content[1].rank.x"), Value::integer(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::path_not_found);
  }
  EXPECT_THROW(remove_value(golden(), parse_path("content[7]")), Error);
}

TEST(Paths, RoundTrip) {
  for (std::string p : {"", "content", "content[1].after[0]", "a.b[2][3].c"}) {
    EXPECT_EQ(to_string(parse_path(p)), p);
  }
  EXPECT_THROW(parse_path("content[x]"), SyntaxError);
}

TEST(Validate, FixtureIsValid) {
  EXPECT_TRUE(validate(golden(), catalog()).empty());
}

TEST(Validate, MissingSubject) {
  auto c = remove_value(golden(), parse_path("content[1].subject"));
  auto d = validate(c, catalog());
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].code, "MISSING_REQUIRED_KEY");
  EXPECT_EQ(to_string(d[0].path), "content[1].subject");
}

TEST(Validate, TextWhereIntegerExpected) {
  auto c = edit_value(golden(), parse_path("content[1].rank"), Value::text("four"));
  auto d = validate(c, catalog());
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].code, "TYPE_MISMATCH");
  EXPECT_EQ(to_string(d[0].path), "content[1].rank");
}

TEST(Validate, ReportsEveryProblem) {
  auto c = edit_value(golden(), parse_path("content[1].rank"), Value::text("four"));
  c = remove_value(c, parse_path("content[0].instance"));
  c = edit_value(c, parse_path("content[1].colour"), Value::integer(1));
  c = edit_value(c, parse_path("content[0].class.modifier"), parse_value("Nonexistent"));
  auto d = validate(c, catalog());
  std::set<std::string> codes;
  for (const auto& x : d) codes.insert(x.code);
  EXPECT_GE(d.size(), 4u);
  EXPECT_TRUE(codes.count("UNKNOWN_KEY"));
  EXPECT_TRUE(codes.count("MISSING_REQUIRED_KEY"));
  EXPECT_TRUE(codes.count("TYPE_MISMATCH"));
}

TEST(Validate, ListElementsChecked) {
  auto c = edit_value(golden(), parse_path("content[1].after[1]"), Value::integer(5));
  auto d = validate(c, catalog());
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(to_string(d[0].path), "content[1].after[1]");
}

TEST(Catalog, AddingOptionalKeyKeepsContentValid) {
  Catalog edited = catalog();
  for (const auto& id : edited.ids()) {
    auto spec = *edited.find(id);
    if (spec.is_enumeration()) continue;  // a key would turn the value into a constructor
    spec.keys.push_back(KeySpec{"note_added", {}, false, {ValueDescriptor::parse("text")}});
    edited.put(spec);
  }
  EXPECT_TRUE(validate(golden(), edited).empty());
  auto spec = *edited.find("Ranking");
  spec.keys.push_back(KeySpec{"since", {}, true, {ValueDescriptor::parse("integer")}});
  edited.put(spec);
  EXPECT_EQ(validate(golden(), edited).size(), 1u);
}

TEST(Catalog, RejectsRepeatedKeys) {
  ConstructorSpec spec;
  spec.id = "Broken";
  spec.keys = {KeySpec{"a", {}, true, {ValueDescriptor::parse("text")}},
               KeySpec{"a", {}, false, {ValueDescriptor::parse("integer")}}};
  Catalog c;
  EXPECT_THROW(c.put(spec), Error);
  EXPECT_FALSE(c.find("Broken"));
}

TEST(Catalog, DescriptorSyntax) {
  for (std::string d : {"integer", "text", "item", "enum(modifier)", "constructor(sentence)",
                        "list(item)", "list(constructor(modifier))"}) {
    EXPECT_EQ(ValueDescriptor::parse(d).to_string(), d);
  }
  EXPECT_THROW(ValueDescriptor::parse("list("), Error);
  EXPECT_THROW(ValueDescriptor::parse("enum(nonsense)"), Error);
}

TEST(Catalog, SaveAndReload) {
  auto dir = std::filesystem::temp_directory_path() / "abswiki_catalog_test";
  std::filesystem::remove_all(dir);
  for (const auto& id : catalog().ids()) Catalog::save_spec(dir, *catalog().find(id));
  Catalog reloaded = Catalog::load_directory(dir);
  EXPECT_EQ(reloaded.ids(), catalog().ids());
  EXPECT_TRUE(validate(golden(), reloaded).empty());
  std::filesystem::remove_all(dir);
}

// Property: parse(serialize(c)) == c on random trees.
TEST(Property, RoundTripRandomTrees) {
  abswiki::testing::TreeGen gen(20240611);
  for (int i = 0; i < 1000; ++i) {
    Content c = gen.content();
    std::string text = serialize_content(c);
    Content back;
    ASSERT_NO_THROW(back = parse_content(text)) << text;
    ASSERT_EQ(back, c) << text;
    ASSERT_EQ(serialize_content(back), text);
  }
}

// Property: any input parses or fails with one positioned SyntaxError.
TEST(Property, ParserIsTotalOnRandomBytes) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> len(0, 64);
  const std::string alphabet = "A(x: [Q1, \"s\", =f(1)], y: B)\n\\\"-09";
  int parsed = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string input;
    int n = len(rng);
    for (int k = 0; k < n; ++k) {
      input += (i % 2 == 0) ? static_cast<char>(byte(rng))
                            : alphabet[byte(rng) % alphabet.size()];
    }
    try {
      parse_content(input);
      ++parsed;
    } catch (const SyntaxError& e) {
      ASSERT_GE(e.line(), 1u);
      ASSERT_GE(e.column(), 1u);
    } catch (...) {
      FAIL() << "non-syntax failure on input #" << i;
    }
  }
  EXPECT_LT(parsed, 10000);
}

TEST(Property, MutatedFixtureNeverCrashes) {
  const std::string base = fixture_text("sf.abstract");
  std::mt19937 rng(99);
  for (int i = 0; i < 2000; ++i) {
    std::string input = base;
    std::uniform_int_distribution<std::size_t> pos(0, input.size() - 1);
    input[pos(rng)] = static_cast<char>(rng() & 0xff);
    if (i % 3 == 0) input.erase(pos(rng) % input.size(), 1 + rng() % 10);
    try {
      parse_content(input);
    } catch (const SyntaxError& e) {
      ASSERT_GE(e.line(), 1u);
    }
  }
}

TEST(Property, DeepNestingIsASyntaxErrorNotACrash) {
  std::string input = "A(x: ";
  for (int i = 0; i < 100000; ++i) input += "[";
  EXPECT_THROW(parse_content(input), SyntaxError);
}
