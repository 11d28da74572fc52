#include "kbp/types.hpp"

#include <array>
#include <utility>

namespace kbp {

namespace {
constexpr std::array<std::pair<Source, std::string_view>, 5> kSourceNames{{
    {Source::LM, "LM"},
    {Source::KG, "KG"},
    {Source::NER, "NER"},
    {Source::QA, "QA"},
    {Source::RE, "RE"},
}};
}  // namespace

std::string_view to_string(Source s) {
  for (const auto& [src, name] : kSourceNames)
    if (src == s) return name;
  return "?";
}

std::optional<Source> parse_source(std::string_view name) {
  for (const auto& [src, n] : kSourceNames)
    if (n == name) return src;
  return std::nullopt;
}

std::vector<Source> SourceSet::members() const {
  std::vector<Source> out;
  for (const auto& [src, name] : kSourceNames)
    if (contains(src)) out.push_back(src);
  return out;
}

std::vector<std::string> SourceSet::names() const {
  std::vector<std::string> out;
  for (auto s : members()) out.emplace_back(to_string(s));
  return out;
}

std::string_view to_string(NerLabel l) {
  switch (l) {
    case NerLabel::PER: return "PER";
    case NerLabel::LOC: return "LOC";
    case NerLabel::ORG: return "ORG";
  }
  return "?";
}

std::optional<NerLabel> parse_ner_label(std::string_view name) {
  if (name == "PER") return NerLabel::PER;
  if (name == "LOC") return NerLabel::LOC;
  if (name == "ORG") return NerLabel::ORG;
  return std::nullopt;
}

}  // namespace kbp
