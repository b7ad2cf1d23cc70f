#include "abswiki/phrase.hpp"

#include <array>

namespace abswiki {

namespace {

constexpr std::array<std::string_view, 6> type_names{
    "text-fragment", "noun-phrase", "modifier", "clause", "sentence", "article-text"};

void escape_into(std::string& out, std::string_view text) {
  out += '"';
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
}

}  // namespace

std::string_view to_string(GrammaticalType type) noexcept {
  return type_names[static_cast<std::size_t>(type)];
}

std::optional<GrammaticalType> parse_grammatical_type(std::string_view text) noexcept {
  for (std::size_t i = 0; i < type_names.size(); ++i) {
    if (type_names[i] == text) return static_cast<GrammaticalType>(i);
  }
  return std::nullopt;
}

bool Phrase::complete() const { return !first_missing().has_value(); }

std::optional<std::string> Phrase::first_missing() const {
  for (const auto& part : parts) {
    if (const auto* missing = std::get_if<MissingPart>(&part)) return missing->reason;
    if (const auto* child = std::get_if<std::shared_ptr<const Phrase>>(&part)) {
      if (auto reason = (*child)->first_missing()) return reason;
    }
  }
  return std::nullopt;
}

std::set<std::string> Phrase::dependency_groups() const {
  std::set<std::string> out;
  if (dependency_group) out.insert(*dependency_group);
  for (const auto& part : parts) {
    if (const auto* child = std::get_if<std::shared_ptr<const Phrase>>(&part)) {
      auto nested = (*child)->dependency_groups();
      out.insert(nested.begin(), nested.end());
    }
  }
  return out;
}

std::string Phrase::debug_string() const {
  std::string out = "<";
  out += to_string(type);
  if (!features.empty()) {
    out += " {";
    out += features.to_string();
    out += '}';
  }
  if (glued) out += " glued";
  if (referent) out += " ref=" + *referent;
  if (dependency_group) out += " dep=" + *dependency_group;
  out += ':';
  for (const auto& part : parts) {
    out += ' ';
    if (const auto* text = std::get_if<std::string>(&part)) {
      escape_into(out, *text);
    } else if (const auto* child = std::get_if<std::shared_ptr<const Phrase>>(&part)) {
      out += (*child)->debug_string();
    } else {
      out += "!missing(";
      escape_into(out, std::get<MissingPart>(part).reason);
      out += ')';
    }
  }
  out += '>';
  return out;
}

bool operator==(const Phrase& a, const Phrase& b) {
  if (a.type != b.type || a.features != b.features || a.glued != b.glued ||
      a.referent != b.referent || a.dependency_group != b.dependency_group ||
      a.parts.size() != b.parts.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.parts.size(); ++i) {
    const auto& pa = a.parts[i];
    const auto& pb = b.parts[i];
    if (pa.index() != pb.index()) return false;
    if (const auto* child = std::get_if<std::shared_ptr<const Phrase>>(&pa)) {
      if (!(**child == *std::get<std::shared_ptr<const Phrase>>(pb))) return false;
    } else if (pa != pb) {
      return false;
    }
  }
  return true;
}

std::shared_ptr<const Phrase> make_missing(std::string reason, GrammaticalType type) {
  auto p = std::make_shared<Phrase>();
  p->type = type;
  p->parts.emplace_back(MissingPart{std::move(reason)});
  return p;
}

std::shared_ptr<const Phrase> make_text_phrase(std::string text, GrammaticalType type,
                                               FeatureBundle features) {
  auto p = std::make_shared<Phrase>();
  p->type = type;
  p->features = features;
  p->parts.emplace_back(std::move(text));
  return p;
}

}  // namespace abswiki
