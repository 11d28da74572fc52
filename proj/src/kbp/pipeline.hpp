#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kbp/backends/backends.hpp"
#include "kbp/candidates.hpp"
#include "kbp/prediction.hpp"
#include "kbp/registry.hpp"
#include "kbp/retrieval.hpp"
#include "kbp/validation.hpp"

namespace kbp {

struct PipelineContext {
  const Registry* registry = nullptr;
  const Backends* backends = nullptr;
  PremiseCache* premises = nullptr;
  KgInstanceCache* kg_cache = nullptr;  // optional
  const Stoplist* stoplist = nullptr;
  int k = kDefaultPremiseCount;
  int top_n = kDefaultTopN;
  bool refresh = false;
};

struct ScoredCandidate {
  CandidateObject candidate;
  Verdict verdict;
};

/// Everything the pipeline learned about one pair before thresholding on the
/// entailment score.
struct ScoredPair {
  InputPair pair;
  std::vector<Premise> premises;
  std::vector<ScoredCandidate> candidates;  // merge order
  std::size_t ner_failures = 0;
  std::optional<std::string> error;  // retrieval or candidate-source failure
};

/// Retrieval, candidate generation for each configured source with LM tokens
/// kept at score >= lm_floor, filters, merge, and one verdict per candidate.
ScoredPair score_pair(const InputPair& pair, const PipelineContext& ctx, double lm_floor);

/// Accepts candidates whose LM gate passes (LM score >= lm_threshold, or any
/// non-LM source) and whose mean entailment is >= entail_threshold.
PredictionRecord decide(const ScoredPair& scored, double lm_threshold, double entail_threshold);

/// Full prediction for one pair with the relation's configured thresholds.
PredictionRecord predict_objects(const InputPair& pair, const PipelineContext& ctx);

/// Runs fn(i) for i in [0, n) on up to jobs threads.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace kbp
