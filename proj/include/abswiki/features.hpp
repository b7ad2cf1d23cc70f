#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace abswiki {

enum class Person : std::uint8_t { first = 1, second = 2, third = 3 };
enum class Number : std::uint8_t { singular, plural };
enum class Tense : std::uint8_t { present, past };
enum class Case : std::uint8_t { nominative, genitive, dative, accusative };
enum class Gender : std::uint8_t { masculine, feminine, neuter };
enum class Degree : std::uint8_t { positive, comparative, superlative };
enum class Definiteness : std::uint8_t { definite, indefinite };

enum class Dimension : std::uint8_t {
  person,
  number,
  tense,
  grammatical_case,
  gender,
  degree,
  definiteness,
};

/// A set of grammatical features, at most one value per dimension.
///
/// Text form is `dim=value|dim=value` in the fixed dimension order above, e.g.
/// `person=3|number=sg|tense=present`. Gender parses both `n` and `neuter`.
struct FeatureBundle {
  std::optional<Person> person;
  std::optional<Number> number;
  std::optional<Tense> tense;
  std::optional<Case> grammatical_case;
  std::optional<Gender> gender;
  std::optional<Degree> degree;
  std::optional<Definiteness> definiteness;

  auto operator<=>(const FeatureBundle&) const = default;

  bool empty() const noexcept { return *this == FeatureBundle{}; }
  bool has(Dimension d) const noexcept;
  /// Copy with every dimension set in `other` overriding this one.
  FeatureBundle merged(const FeatureBundle& other) const;
  /// Copy keeping only the dimensions that are set in `mask`.
  FeatureBundle restricted_to(const FeatureBundle& mask) const;

  std::string to_string() const;
  /// Throws Error(invalid_document) on unknown dimensions/values or a repeated dimension.
  static FeatureBundle parse(std::string_view text);
  /// Sets one dimension from its text name and value; throws on bad input.
  void set(std::string_view dimension, std::string_view value);
};

std::string_view to_string(Gender g) noexcept;
std::string_view to_string(Case c) noexcept;
std::string_view to_string(Definiteness d) noexcept;
std::optional<Gender> parse_gender(std::string_view text) noexcept;
std::optional<Case> parse_case(std::string_view text) noexcept;
std::optional<Definiteness> parse_definiteness(std::string_view text) noexcept;

}  // namespace abswiki
