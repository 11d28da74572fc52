#include "kbp/metrics.hpp"

#include <algorithm>
#include <set>

#include "kbp/errors.hpp"
#include "kbp/text.hpp"

namespace kbp {

bool match(std::string_view prediction, const AliasSet& aliases) {
  const auto p = text::canonical(prediction);
  return std::any_of(aliases.begin(), aliases.end(), [&](const std::string& a) { return text::canonical(a) == p; });
}

PairScore pair_scores(const std::vector<std::string>& predicted, const std::vector<AliasSet>& gold) {
  std::set<std::string> preds;
  for (const auto& p : predicted) preds.insert(text::canonical(p));

  std::vector<std::set<std::string>> gold_sets;
  for (const auto& aliases : gold) {
    std::set<std::string> s;
    for (const auto& a : aliases) s.insert(text::canonical(a));
    gold_sets.push_back(std::move(s));
  }

  std::size_t correct_preds = 0;
  for (const auto& p : preds)
    if (std::any_of(gold_sets.begin(), gold_sets.end(), [&](const auto& g) { return g.count(p) != 0; })) ++correct_preds;
  std::size_t matched_gold = 0;
  for (const auto& g : gold_sets)
    if (std::any_of(preds.begin(), preds.end(), [&](const auto& p) { return g.count(p) != 0; })) ++matched_gold;

  PairScore s;
  if (preds.empty()) {
    s.precision = gold_sets.empty() ? 1.0 : 0.0;
  } else {
    s.precision = static_cast<double>(correct_preds) / static_cast<double>(preds.size());
  }
  s.recall = gold_sets.empty() ? 1.0 : static_cast<double>(matched_gold) / static_cast<double>(gold_sets.size());
  s.f1 = (s.precision + s.recall) == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

namespace {

MetricTriple mean_of(const std::vector<MetricTriple>& xs) {
  MetricTriple m;
  for (const auto& x : xs) {
    m.precision += x.precision;
    m.recall += x.recall;
    m.f1 += x.f1;
  }
  const auto n = static_cast<double>(xs.size());
  m.precision /= n;
  m.recall /= n;
  m.f1 /= n;
  return m;
}

}  // namespace

EvalReport macro_report(const std::vector<PairScore>& scores, bool pooled) {
  if (scores.empty()) throw Error("cannot build an evaluation report from zero pairs");
  std::map<std::string, std::vector<MetricTriple>> grouped;
  std::vector<MetricTriple> all;
  for (const auto& s : scores) {
    grouped[s.pair.relation].push_back({s.precision, s.recall, s.f1});
    all.push_back({s.precision, s.recall, s.f1});
  }
  EvalReport report;
  std::vector<MetricTriple> rel_means;
  for (const auto& [rel, xs] : grouped) {
    auto m = mean_of(xs);
    report.per_relation[rel] = {m, xs.size()};
    rel_means.push_back(m);
  }
  report.overall = mean_of(rel_means);
  if (pooled) report.pooled = mean_of(all);
  return report;
}

std::vector<PairScore> score_predictions(const std::vector<GoldRecord>& gold,
                                         const std::vector<PredictionRecord>& predictions) {
  std::map<InputPair, const PredictionRecord*> by_pair;
  for (const auto& p : predictions) by_pair[p.pair] = &p;
  std::vector<PairScore> out;
  for (const auto& g : gold) {
    std::vector<std::string> surfaces;
    if (auto it = by_pair.find(g.pair); it != by_pair.end())
      for (const auto& o : it->second->objects) surfaces.push_back(o.surface);
    auto s = pair_scores(surfaces, g.gold_objects);
    s.pair = g.pair;
    out.push_back(std::move(s));
  }
  return out;
}

EvalReport mean_report(const std::vector<EvalReport>& reports) {
  if (reports.empty()) throw Error("cannot average zero reports");
  std::map<std::string, std::vector<MetricTriple>> grouped;
  std::map<std::string, std::size_t> pairs;
  std::vector<MetricTriple> overall;
  std::vector<MetricTriple> pooled;
  for (const auto& r : reports) {
    for (const auto& [rel, rs] : r.per_relation) {
      grouped[rel].push_back(rs.metrics);
      pairs.emplace(rel, rs.pairs);
    }
    overall.push_back(r.overall);
    if (r.pooled) pooled.push_back(*r.pooled);
  }
  EvalReport out;
  for (const auto& [rel, xs] : grouped) out.per_relation[rel] = {mean_of(xs), pairs[rel]};
  out.overall = mean_of(overall);
  if (pooled.size() == reports.size()) out.pooled = mean_of(pooled);
  return out;
}

}  // namespace kbp
