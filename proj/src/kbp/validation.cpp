#include "kbp/validation.hpp"

#include <algorithm>
#include <cmath>

#include "kbp/errors.hpp"
#include "kbp/template.hpp"

namespace kbp {

std::string_view to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Validated: return "VALIDATED";
    case VerdictStatus::Rejected: return "REJECTED";
    case VerdictStatus::NoPremises: return "NO_PREMISES";
  }
  return "?";
}

std::string make_hypothesis(const Triple& triple, const Registry& registry) {
  return render_template(registry.at(triple.relation).hypothesis_template, triple.subject, triple.object);
}

double entail_probability(const EntailmentLogits& logits) {
  check_logits(logits);
  const double d = logits.entail - logits.contradiction;
  if (d >= 0.0) return 1.0 / (1.0 + std::exp(-d));
  const double z = std::exp(d);
  return z / (1.0 + z);
}

void apply_threshold(Verdict& v, double threshold) {
  if (v.status == VerdictStatus::NoPremises) {
    v.accepted = false;
    return;
  }
  v.accepted = !v.error && v.mean_probability && *v.mean_probability >= threshold;
  v.status = v.accepted ? VerdictStatus::Validated : VerdictStatus::Rejected;
}

Verdict validate_triple(const Triple& triple, const std::string& hypothesis, const std::vector<Premise>& premises,
                        const EntailmentBackend& rte, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw ConfigError("entailment threshold must be in [0,1]");
  Verdict v;
  v.triple = triple;
  v.hypothesis = hypothesis;
  if (premises.empty()) {
    v.status = VerdictStatus::NoPremises;
    return v;
  }
  try {
    std::vector<double> probs;
    for (const auto& p : premises) {
      const double prob = entail_probability(rte.entail(p.text, hypothesis));
      v.per_premise.push_back({p.rank, prob});
      probs.push_back(prob);
    }
    // Summing in sorted order makes the mean independent of premise order.
    std::sort(probs.begin(), probs.end());
    double sum = 0.0;
    for (double prob : probs) sum += prob;
    v.mean_probability = sum / static_cast<double>(probs.size());
  } catch (const Error& e) {
    v.error = e.what();
    v.mean_probability.reset();
  }
  apply_threshold(v, threshold);
  return v;
}

Verdict validate_triple(const Triple& triple, const Registry& registry, const std::vector<Premise>& premises,
                        const EntailmentBackend& rte, double threshold) {
  return validate_triple(triple, make_hypothesis(triple, registry), premises, rte, threshold);
}

}  // namespace kbp
