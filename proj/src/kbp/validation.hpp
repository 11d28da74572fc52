#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kbp/backends/backends.hpp"
#include "kbp/registry.hpp"
#include "kbp/retrieval.hpp"
#include "kbp/types.hpp"

namespace kbp {

enum class VerdictStatus { Validated, Rejected, NoPremises };

std::string_view to_string(VerdictStatus s);

struct PremiseScore {
  int rank = 0;
  double probability = 0.0;
};

struct Verdict {
  Triple triple;
  std::string hypothesis;
  std::vector<PremiseScore> per_premise;
  std::optional<double> mean_probability;  // absent for NoPremises and backend errors
  bool accepted = false;
  VerdictStatus status = VerdictStatus::Rejected;
  std::optional<std::string> error;  // set when a backend call failed; always a rejection
};

/// Rendered t_h with subject and object substituted verbatim.
std::string make_hypothesis(const Triple& triple, const Registry& registry);

/// Softmax over the entailment and contradiction logits only:
/// exp(e) / (exp(e) + exp(c)), evaluated without overflow. Neutral is ignored.
/// Non-finite logits throw ContractError.
double entail_probability(const EntailmentLogits& logits);

/// One entail call per premise, mean of the two-class probabilities over the
/// premises actually given, accepted iff mean >= threshold. Backend failures
/// become an error-flagged rejection rather than an exception.
Verdict validate_triple(const Triple& triple, const std::string& hypothesis, const std::vector<Premise>& premises,
                        const EntailmentBackend& rte, double threshold);

Verdict validate_triple(const Triple& triple, const Registry& registry, const std::vector<Premise>& premises,
                        const EntailmentBackend& rte, double threshold);

/// Re-decides acceptance of an already scored verdict for a new threshold.
void apply_threshold(Verdict& verdict, double threshold);

}  // namespace kbp
