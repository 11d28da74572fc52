#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbp/backends/backends.hpp"
#include "kbp/calibration.hpp"
#include "kbp/candidates.hpp"
#include "kbp/prediction.hpp"
#include "kbp/registry.hpp"
#include "kbp/retrieval.hpp"

namespace kbp {

/// Dataset relation -> relation label used by the extraction backend. A null
/// entry (or a missing relation) means the relation cannot be mapped.
class RelationMap {
 public:
  RelationMap() = default;
  explicit RelationMap(std::map<std::string, std::optional<std::string>> entries) : entries_(std::move(entries)) {}
  static RelationMap parse(const nlohmann::json& doc);
  static RelationMap load(const std::filesystem::path& path);

  std::optional<std::string> label_for(const std::string& relation) const;

 private:
  std::map<std::string, std::optional<std::string>> entries_;
};

/// Fill-mask tokens with score >= T_lm, minus stop words and punctuation. No
/// mention filter and no entailment check.
PredictionRecord lm_baseline(const InputPair& pair, const Registry& registry, const MaskFillBackend& mask_fill,
                             const Stoplist& stoplist, int top_n = kDefaultTopN);

/// Every stop-word-filtered fill-mask token with its score, for calibrating T_lm.
std::vector<ScoredItem> lm_baseline_scores(const InputPair& pair, const Registry& registry,
                                           const MaskFillBackend& mask_fill, const Stoplist& stoplist,
                                           int top_n = kDefaultTopN);

/// "a, b, c and d" -> {a, b, c, d}. Splits on commas and on a final "and"/"or";
/// items are trimmed and empty items dropped.
std::vector<std::string> split_list_answer(std::string_view answer);

/// One QA call per premise with the rendered t_qa; answers scoring >= T_qa
/// are list-split and unioned.
PredictionRecord qa_baseline(const InputPair& pair, const std::vector<Premise>& premises, const QaBackend& qa,
                             const Registry& registry);

/// Every split answer item with the best score of an answer containing it.
std::vector<ScoredItem> qa_baseline_scores(const InputPair& pair, const std::vector<Premise>& premises,
                                           const QaBackend& qa, const Registry& registry);

/// Objects of extracted triples whose label equals the relation's mapped
/// label (and, when require_subject_match, whose subject matches). Unmapped
/// relations yield an empty prediction flagged UNSUPPORTED.
PredictionRecord re_baseline(const InputPair& pair, const std::vector<Premise>& premises,
                             const RelationExtractionBackend& re, const RelationMap& relation_map,
                             bool require_subject_match = true);

}  // namespace kbp
