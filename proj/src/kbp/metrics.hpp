#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kbp/prediction.hpp"
#include "kbp/types.hpp"

namespace kbp {

/// Canonical equality against any alias of the set.
bool match(std::string_view prediction, const AliasSet& aliases);

struct PairScore {
  InputPair pair;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Set-based scores with the LM-KBC empty-set conventions:
///   P = matched predictions / |predicted|, or 1 if both sides are empty and 0
///       if only the prediction is empty;
///   R = matched gold sets / |gold|, or 1 if gold is empty;
///   F1 = 2PR/(P+R), or 0 when P+R = 0.
/// Predictions are deduplicated canonically; a gold set is counted once.
PairScore pair_scores(const std::vector<std::string>& predicted, const std::vector<AliasSet>& gold);

struct MetricTriple {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct RelationScore {
  MetricTriple metrics;
  std::size_t pairs = 0;
};

struct EvalReport {
  std::map<std::string, RelationScore> per_relation;
  MetricTriple overall;                 // unweighted mean over relations
  std::optional<MetricTriple> pooled;   // mean over all pairs, when requested
};

/// Groups by relation, averages within each, then averages relations.
/// Throws Error on empty input.
EvalReport macro_report(const std::vector<PairScore>& scores, bool pooled = false);

/// Scores every gold pair against the predictions; gold pairs without a
/// prediction count as an empty prediction.
std::vector<PairScore> score_predictions(const std::vector<GoldRecord>& gold,
                                         const std::vector<PredictionRecord>& predictions);

/// Elementwise mean of reports. Relations absent from some reports are
/// averaged over the reports that have them; pair counts come from the first
/// report holding the relation.
EvalReport mean_report(const std::vector<EvalReport>& reports);

}  // namespace kbp
