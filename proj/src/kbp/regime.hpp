#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kbp/metrics.hpp"
#include "kbp/types.hpp"

namespace kbp {

struct RegimeSpec {
  double fraction = 1.0;  // of each relation's subjects
  int repetitions = 10;
  std::uint64_t seed = 0;
};

void validate_regime(const RegimeSpec& spec);

/// ceil(fraction * n) subjects per relation, drawn with a seeded shuffle and
/// returned in dataset order. Relations are handled independently.
std::vector<GoldRecord> sample_per_relation(const std::vector<GoldRecord>& dataset, double fraction,
                                            std::uint64_t seed, std::vector<std::string>* warnings = nullptr);

std::size_t sample_size(double fraction, std::size_t n);

struct RegimeResult {
  EvalReport mean;
  std::vector<EvalReport> repetitions;
  std::vector<std::size_t> sample_sizes;  // records per repetition
  std::vector<std::string> warnings;
};

using RegimeExperiment = std::function<EvalReport(const std::vector<GoldRecord>& sample, int repetition)>;

/// Repetition r samples with seed + r and runs the experiment on the sample.
/// Returns the elementwise mean report plus every repetition's report.
RegimeResult run_regime(const std::vector<GoldRecord>& dataset, const RegimeSpec& spec,
                        const RegimeExperiment& experiment);

}  // namespace kbp
