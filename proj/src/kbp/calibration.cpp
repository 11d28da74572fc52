#include "kbp/calibration.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "kbp/errors.hpp"
#include "kbp/text.hpp"

namespace kbp {

std::vector<double> default_threshold_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 99; ++i) grid.push_back(i / 100.0);
  return grid;
}

namespace {

// One distinct (canonical) prediction of a pair with the gold sets it hits.
struct PreparedItem {
  double score;
  std::vector<std::size_t> gold_hits;
};

struct PreparedPair {
  std::vector<PreparedItem> items;  // sorted by score descending
  std::size_t gold_count;
};

std::vector<std::set<std::string>> canonical_gold(const std::vector<AliasSet>& gold) {
  std::vector<std::set<std::string>> out;
  for (const auto& aliases : gold) {
    std::set<std::string> s;
    for (const auto& a : aliases) s.insert(text::canonical(a));
    out.push_back(std::move(s));
  }
  return out;
}

PreparedPair prepare(const std::vector<ScoredItem>& items, const std::vector<std::set<std::string>>& gold) {
  std::map<std::string, double> best;
  for (const auto& it : items) {
    auto key = text::canonical(it.surface);
    auto [pos, inserted] = best.emplace(std::move(key), it.score);
    if (!inserted) pos->second = std::max(pos->second, it.score);
  }
  PreparedPair p{{}, gold.size()};
  for (const auto& [key, score] : best) {
    PreparedItem item{score, {}};
    for (std::size_t g = 0; g < gold.size(); ++g)
      if (gold[g].count(key)) item.gold_hits.push_back(g);
    p.items.push_back(std::move(item));
  }
  std::sort(p.items.begin(), p.items.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
  return p;
}

// Adds each pair's F1 at every grid threshold into f1_sums (indexed like grid).
void accumulate_sweep(const PreparedPair& pair, const std::vector<double>& grid, std::vector<double>& f1_sums) {
  std::vector<std::size_t> order(grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return grid[a] > grid[b]; });

  std::vector<double> f1_at(grid.size(), 0.0);
  std::vector<std::size_t> hits(pair.gold_count, 0);
  std::size_t predicted = 0;
  std::size_t correct = 0;
  std::size_t gold_matched = 0;
  std::size_t next = 0;
  for (std::size_t gi : order) {
    const double t = grid[gi];
    while (next < pair.items.size() && pair.items[next].score >= t) {
      const auto& item = pair.items[next++];
      ++predicted;
      if (!item.gold_hits.empty()) ++correct;
      for (auto g : item.gold_hits)
        if (hits[g]++ == 0) ++gold_matched;
    }
    double precision;
    if (predicted == 0) {
      precision = pair.gold_count == 0 ? 1.0 : 0.0;
    } else {
      precision = static_cast<double>(correct) / static_cast<double>(predicted);
    }
    const double recall =
        pair.gold_count == 0 ? 1.0 : static_cast<double>(gold_matched) / static_cast<double>(pair.gold_count);
    f1_at[gi] = (precision + recall) == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) f1_sums[i] += f1_at[i];
}

}  // namespace

CalibrationResult calibrate_1d(const std::vector<CalibrationPair>& pairs, const std::vector<double>& grid) {
  if (pairs.empty()) throw Error("calibration needs at least one pair");
  if (grid.empty()) throw Error("calibration grid is empty");
  std::vector<double> sums(grid.size(), 0.0);
  for (const auto& p : pairs) accumulate_sweep(prepare(p.items, canonical_gold(p.gold)), grid, sums);

  const auto n = static_cast<double>(pairs.size());
  CalibrationResult best{0.0, -1.0};
  std::vector<std::size_t> ascending(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) ascending[i] = i;
  std::stable_sort(ascending.begin(), ascending.end(), [&](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });
  for (auto i : ascending) {
    const double f1 = sums[i] / n;
    if (f1 > best.f1) best = {grid[i], f1};
  }
  return best;
}

JointCalibrationResult calibrate_joint(const std::vector<JointCalibrationPair>& pairs, const std::vector<double>& grid) {
  if (pairs.empty()) throw Error("calibration needs at least one pair");
  if (grid.empty()) throw Error("calibration grid is empty");
  std::vector<double> ascending = grid;
  std::sort(ascending.begin(), ascending.end());

  std::vector<std::vector<std::set<std::string>>> golds;
  for (const auto& p : pairs) golds.push_back(canonical_gold(p.gold));

  const auto n = static_cast<double>(pairs.size());
  JointCalibrationResult best{0.0, 0.0, -1.0};
  constexpr double kUngated = std::numeric_limits<double>::infinity();
  for (double t_e : ascending) {
    std::vector<double> sums(ascending.size(), 0.0);
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
      std::vector<ScoredItem> passing;
      for (const auto& it : pairs[pi].items)
        if (it.entailment && *it.entailment >= t_e) passing.push_back({it.surface, it.lm_score.value_or(kUngated)});
      accumulate_sweep(prepare(passing, golds[pi]), ascending, sums);
    }
    for (std::size_t i = 0; i < ascending.size(); ++i) {
      const double f1 = sums[i] / n;
      if (f1 > best.f1) best = {ascending[i], t_e, f1};
    }
  }
  return best;
}

namespace {

std::map<InputPair, const GoldRecord*> index_gold(const std::vector<GoldRecord>& gold) {
  std::map<InputPair, const GoldRecord*> out;
  for (const auto& g : gold) out[g.pair] = &g;
  return out;
}

}  // namespace

std::vector<JointCalibrationPair> joint_calibration_data(const std::vector<ScoredPair>& scored,
                                                         const std::vector<GoldRecord>& gold) {
  const auto by_pair = index_gold(gold);
  std::vector<JointCalibrationPair> out;
  for (const auto& sp : scored) {
    if (sp.error || sp.premises.empty()) continue;
    auto it = by_pair.find(sp.pair);
    if (it == by_pair.end()) continue;
    JointCalibrationPair row;
    row.gold = it->second->gold_objects;
    for (const auto& sc : sp.candidates) {
      const bool lm_only = sc.candidate.sources == SourceSet(Source::LM);
      row.items.push_back({sc.candidate.surface, lm_only ? sc.candidate.lm_score : std::nullopt,
                           sc.verdict.error ? std::nullopt : sc.verdict.mean_probability});
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<CalibrationPair> entailment_calibration_data(const std::vector<ScoredPair>& scored,
                                                         const std::vector<GoldRecord>& gold) {
  std::vector<CalibrationPair> out;
  for (auto& joint : joint_calibration_data(scored, gold)) {
    CalibrationPair row;
    row.gold = std::move(joint.gold);
    for (auto& it : joint.items)
      if (it.entailment) row.items.push_back({std::move(it.surface), *it.entailment});
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace kbp
