#include "kbp/regime.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "kbp/errors.hpp"

namespace kbp {

void validate_regime(const RegimeSpec& spec) {
  if (!(spec.fraction > 0.0 && spec.fraction <= 1.0)) throw ConfigError("regime fraction must be in (0,1]");
  if (spec.repetitions < 1) throw ConfigError("regime repetitions must be at least 1");
}

std::size_t sample_size(double fraction, std::size_t n) {
  // The epsilon absorbs products like 0.07 * 100 = 7.000000000000001.
  const double want = std::ceil(fraction * static_cast<double>(n) - 1e-9);
  return std::min(n, static_cast<std::size_t>(std::max(0.0, want)));
}

std::vector<GoldRecord> sample_per_relation(const std::vector<GoldRecord>& dataset, double fraction,
                                            std::uint64_t seed, std::vector<std::string>* warnings) {
  std::map<std::string, std::vector<std::size_t>> by_relation;
  for (std::size_t i = 0; i < dataset.size(); ++i) by_relation[dataset[i].pair.relation].push_back(i);

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen;
  for (auto& [relation, idx] : by_relation) {
    const auto m = sample_size(fraction, idx.size());
    if (m == 0) {
      if (warnings) warnings->push_back("relation '" + relation + "' has no sampled pairs; skipped");
      continue;
    }
    // Fisher-Yates with raw engine output, identical across standard libraries.
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng() % i]);
    chosen.insert(chosen.end(), idx.begin(), idx.begin() + static_cast<long>(m));
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<GoldRecord> out;
  out.reserve(chosen.size());
  for (auto i : chosen) out.push_back(dataset[i]);
  return out;
}

RegimeResult run_regime(const std::vector<GoldRecord>& dataset, const RegimeSpec& spec,
                        const RegimeExperiment& experiment) {
  validate_regime(spec);
  if (dataset.empty()) throw Error("regime needs a non-empty dataset");
  RegimeResult result;
  for (int r = 0; r < spec.repetitions; ++r) {
    auto sample = sample_per_relation(dataset, spec.fraction, spec.seed + static_cast<std::uint64_t>(r), &result.warnings);
    result.sample_sizes.push_back(sample.size());
    result.repetitions.push_back(experiment(sample, r));
  }
  result.mean = mean_report(result.repetitions);
  return result;
}

}  // namespace kbp
