#pragma once

// Deterministic in-process backends backed by keyed lookup tables.
//
// Fixture document layout (every section optional):
//   "search":    {query: [{"title","url","snippet"}]}
//   "fill_mask": {prompt: [{"token","score"}]}
//   "entail":    {"entries": [{"premise","hypothesis","entail","contradiction","neutral"}],
//                 "default": {"entail","contradiction","neutral"}}
//   "ner":       {text: [{"surface","label","start"?,"end"?}]}
//   "qa":        {"entries": [{"question","context","answer","score","start"?,"end"?}],
//                 "default": {"answer","score"}}
//   "relext":    {text: [{"subject","relation","object"}]}
//   "sparql":    {class: [label, ...]}
//
// Unknown keys: search, fill_mask, ner, relext and sparql answer empty;
// entail and qa throw FixtureKeyError unless a "default" is given. An entail
// call whose premise equals its hypothesis is entail-dominant when no entry
// matches. Omitted NER/QA offsets are filled from the first occurrence of the
// surface in the text.

#include <filesystem>
#include <map>
#include <optional>
#include <utility>

#include <nlohmann/json.hpp>

#include "kbp/backends/backends.hpp"

namespace kbp {

class FixtureSearch final : public SearchBackend {
 public:
  explicit FixtureSearch(const nlohmann::json& section);
  std::vector<SearchHit> web_search(std::string_view query, int k) const override;

 private:
  std::map<std::string, std::vector<SearchHit>, std::less<>> table_;
};

class FixtureMaskFill final : public MaskFillBackend {
 public:
  explicit FixtureMaskFill(const nlohmann::json& section);
  std::vector<MaskFillResult> fill_mask(std::string_view prompt, int top_n) const override;

 private:
  std::map<std::string, std::vector<MaskFillResult>, std::less<>> table_;
};

class FixtureEntailment final : public EntailmentBackend {
 public:
  explicit FixtureEntailment(const nlohmann::json& section);
  EntailmentLogits entail(std::string_view premise, std::string_view hypothesis) const override;

 private:
  std::map<std::pair<std::string, std::string>, EntailmentLogits> table_;
  std::optional<EntailmentLogits> default_;
};

class FixtureNer final : public NerBackend {
 public:
  explicit FixtureNer(const nlohmann::json& section);
  std::vector<NerSpan> ner(std::string_view text) const override;

 private:
  std::map<std::string, std::vector<NerSpan>, std::less<>> table_;
};

class FixtureQa final : public QaBackend {
 public:
  explicit FixtureQa(const nlohmann::json& section);
  QaAnswer qa(std::string_view question, std::string_view context) const override;

 private:
  std::map<std::pair<std::string, std::string>, QaAnswer> table_;
  std::optional<QaAnswer> default_;
};

class FixtureRelationExtraction final : public RelationExtractionBackend {
 public:
  explicit FixtureRelationExtraction(const nlohmann::json& section);
  std::vector<ExtractedTriple> extract_relations(std::string_view text) const override;

 private:
  std::map<std::string, std::vector<ExtractedTriple>, std::less<>> table_;
};

class FixtureKnowledgeGraph final : public KnowledgeGraphBackend {
 public:
  explicit FixtureKnowledgeGraph(const nlohmann::json& section);
  std::vector<std::string> sparql_instances(std::string_view class_name) const override;

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> table_;
};

/// All seven capabilities from one fixture document.
Backends make_fixture_backends(const nlohmann::json& doc);
Backends load_fixture_backends(const std::filesystem::path& path);

}  // namespace kbp
