#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kbp/pipeline.hpp"
#include "kbp/types.hpp"

namespace kbp {

/// {0.01, 0.02, ..., 0.99}, each value computed as i / 100.0.
std::vector<double> default_threshold_grid();

struct ScoredItem {
  std::string surface;
  double score = 0.0;
};

struct CalibrationPair {
  std::vector<ScoredItem> items;
  std::vector<AliasSet> gold;
};

struct CalibrationResult {
  double threshold = 0.0;
  double f1 = 0.0;  // relation-level F1 at the chosen threshold
};

/// Grid value maximizing the mean pair F1 of {surface : score >= T}; ties go
/// to the smallest threshold. Throws Error on empty data or grid.
CalibrationResult calibrate_1d(const std::vector<CalibrationPair>& pairs,
                               const std::vector<double>& grid = default_threshold_grid());

struct JointItem {
  std::string surface;
  std::optional<double> lm_score;    // nullopt: not gated by the LM threshold
  std::optional<double> entailment;  // nullopt: never accepted
};

struct JointCalibrationPair {
  std::vector<JointItem> items;
  std::vector<AliasSet> gold;
};

struct JointCalibrationResult {
  double lm_threshold = 0.0;
  double entail_threshold = 0.0;
  double f1 = 0.0;
};

/// Exhaustive sweep of grid x grid over {c : lm gate passes at T_lm and
/// entailment >= T_e}. Ties go to the smallest T_e, then the smallest T_lm.
JointCalibrationResult calibrate_joint(const std::vector<JointCalibrationPair>& pairs,
                                       const std::vector<double>& grid = default_threshold_grid());

/// Calibration rows from scored pipeline output. Pairs with a pair-level
/// error or without premises are left out.
std::vector<JointCalibrationPair> joint_calibration_data(const std::vector<ScoredPair>& scored,
                                                         const std::vector<GoldRecord>& gold);
std::vector<CalibrationPair> entailment_calibration_data(const std::vector<ScoredPair>& scored,
                                                         const std::vector<GoldRecord>& gold);

}  // namespace kbp
