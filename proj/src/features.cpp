#include "abswiki/features.hpp"

#include <array>
#include <vector>

#include "abswiki/error.hpp"

namespace abswiki {

namespace {

template <typename E>
struct Names {
  std::array<std::string_view, 4> canonical;
  std::array<std::string_view, 4> alias;
  std::size_t size;
};

constexpr Names<Person> person_names{{"1", "2", "3"}, {"first", "second", "third"}, 3};
constexpr Names<Number> number_names{{"sg", "pl"}, {"singular", "plural"}, 2};
constexpr Names<Tense> tense_names{{"present", "past"}, {"present", "past"}, 2};
constexpr Names<Case> case_names{{"nominative", "genitive", "dative", "accusative"},
                                 {"nom", "gen", "dat", "acc"},
                                 4};
constexpr Names<Gender> gender_names{{"m", "f", "n"}, {"masculine", "feminine", "neuter"}, 3};
constexpr Names<Degree> degree_names{{"positive", "comparative", "superlative"},
                                     {"positive", "comparative", "superlative"},
                                     3};
constexpr Names<Definiteness> definiteness_names{{"definite", "indefinite"},
                                                 {"definitive", "indefinite"},
                                                 2};

template <typename E>
std::size_t index_of(E value) {
  if constexpr (std::is_same_v<E, Person>) {
    return static_cast<std::size_t>(value) - 1;
  } else {
    return static_cast<std::size_t>(value);
  }
}

template <typename E>
E from_index(std::size_t i) {
  if constexpr (std::is_same_v<E, Person>) {
    return static_cast<E>(i + 1);
  } else {
    return static_cast<E>(i);
  }
}

template <typename E>
std::optional<E> lookup(const Names<E>& names, std::string_view text) {
  for (std::size_t i = 0; i < names.size; ++i) {
    if (names.canonical[i] == text || names.alias[i] == text) return from_index<E>(i);
  }
  return std::nullopt;
}

template <typename E>
void put(std::string& out, std::string_view dim, const std::optional<E>& value,
         const Names<E>& names) {
  if (!value) return;
  if (!out.empty()) out += '|';
  out += dim;
  out += '=';
  out += names.canonical[index_of(*value)];
}

template <typename E>
void assign(std::optional<E>& slot, const Names<E>& names, std::string_view dim,
            std::string_view value) {
  if (slot) {
    throw Error(ErrorCode::invalid_document,
                "duplicate feature dimension '" + std::string(dim) + "'");
  }
  auto parsed = lookup(names, value);
  if (!parsed) {
    throw Error(ErrorCode::invalid_document, "invalid value '" + std::string(value) +
                                                 "' for feature '" + std::string(dim) + "'");
  }
  slot = parsed;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

bool FeatureBundle::has(Dimension d) const noexcept {
  switch (d) {
    case Dimension::person: return person.has_value();
    case Dimension::number: return number.has_value();
    case Dimension::tense: return tense.has_value();
    case Dimension::grammatical_case: return grammatical_case.has_value();
    case Dimension::gender: return gender.has_value();
    case Dimension::degree: return degree.has_value();
    case Dimension::definiteness: return definiteness.has_value();
  }
  return false;
}

FeatureBundle FeatureBundle::merged(const FeatureBundle& other) const {
  FeatureBundle out = *this;
  if (other.person) out.person = other.person;
  if (other.number) out.number = other.number;
  if (other.tense) out.tense = other.tense;
  if (other.grammatical_case) out.grammatical_case = other.grammatical_case;
  if (other.gender) out.gender = other.gender;
  if (other.degree) out.degree = other.degree;
  if (other.definiteness) out.definiteness = other.definiteness;
  return out;
}

FeatureBundle FeatureBundle::restricted_to(const FeatureBundle& mask) const {
  FeatureBundle out;
  if (mask.person) out.person = person;
  if (mask.number) out.number = number;
  if (mask.tense) out.tense = tense;
  if (mask.grammatical_case) out.grammatical_case = grammatical_case;
  if (mask.gender) out.gender = gender;
  if (mask.degree) out.degree = degree;
  if (mask.definiteness) out.definiteness = definiteness;
  return out;
}

std::string FeatureBundle::to_string() const {
  std::string out;
  put(out, "person", person, person_names);
  put(out, "number", number, number_names);
  put(out, "tense", tense, tense_names);
  put(out, "case", grammatical_case, case_names);
  put(out, "gender", gender, gender_names);
  put(out, "degree", degree, degree_names);
  put(out, "definiteness", definiteness, definiteness_names);
  return out;
}

void FeatureBundle::set(std::string_view dimension, std::string_view value) {
  if (dimension == "person") {
    assign(person, person_names, dimension, value);
  } else if (dimension == "number") {
    assign(number, number_names, dimension, value);
  } else if (dimension == "tense") {
    assign(tense, tense_names, dimension, value);
  } else if (dimension == "case") {
    assign(grammatical_case, case_names, dimension, value);
  } else if (dimension == "gender") {
    assign(gender, gender_names, dimension, value);
  } else if (dimension == "degree") {
    assign(degree, degree_names, dimension, value);
  } else if (dimension == "definiteness") {
    assign(definiteness, definiteness_names, dimension, value);
  } else {
    throw Error(ErrorCode::invalid_document,
                "unknown feature dimension '" + std::string(dimension) + "'");
  }
}

FeatureBundle FeatureBundle::parse(std::string_view text) {
  FeatureBundle out;
  text = trim(text);
  while (!text.empty()) {
    auto bar = text.find('|');
    auto item = trim(text.substr(0, bar));
    text = bar == std::string_view::npos ? std::string_view{} : text.substr(bar + 1);
    auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::invalid_document,
                  "feature '" + std::string(item) + "' is not of the form dim=value");
    }
    out.set(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
  }
  return out;
}

std::string_view to_string(Gender g) noexcept { return gender_names.canonical[index_of(g)]; }
std::string_view to_string(Case c) noexcept { return case_names.canonical[index_of(c)]; }
std::string_view to_string(Definiteness d) noexcept {
  return definiteness_names.canonical[index_of(d)];
}

std::optional<Gender> parse_gender(std::string_view text) noexcept {
  return lookup(gender_names, text);
}
std::optional<Case> parse_case(std::string_view text) noexcept { return lookup(case_names, text); }
std::optional<Definiteness> parse_definiteness(std::string_view text) noexcept {
  return lookup(definiteness_names, text);
}

}  // namespace abswiki
