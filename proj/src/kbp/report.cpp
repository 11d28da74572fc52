#include "kbp/report.hpp"

#include <cstdio>

namespace kbp {

using nlohmann::json;

namespace {

json metrics_json(const MetricTriple& m) {
  return json{{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

MetricTriple metrics_from(const json& j) {
  return {j.at("precision").get<double>(), j.at("recall").get<double>(), j.at("f1").get<double>()};
}

std::string row(const std::string& name, std::size_t pairs, const MetricTriple& m) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-28s %6zu %7.1f %7.1f %7.1f\n", name.c_str(), pairs, 100.0 * m.precision,
                100.0 * m.recall, 100.0 * m.f1);
  return buf;
}

}  // namespace

json report_to_json(const EvalReport& report) {
  json rels = json::object();
  std::size_t total = 0;
  for (const auto& [rel, rs] : report.per_relation) {
    auto j = metrics_json(rs.metrics);
    j["pairs"] = rs.pairs;
    rels[rel] = j;
    total += rs.pairs;
  }
  auto overall = metrics_json(report.overall);
  overall["pairs"] = total;
  json out{{"relations", rels}, {"overall", overall}};
  if (report.pooled) out["pooled"] = metrics_json(*report.pooled);
  return out;
}

EvalReport report_from_json(const json& doc) {
  EvalReport r;
  for (const auto& [rel, j] : doc.at("relations").items())
    r.per_relation[rel] = {metrics_from(j), j.value("pairs", std::size_t{0})};
  r.overall = metrics_from(doc.at("overall"));
  if (doc.contains("pooled")) r.pooled = metrics_from(doc["pooled"]);
  return r;
}

std::string report_to_table(const EvalReport& report, const std::string& scenario) {
  std::string out;
  char header[160];
  std::snprintf(header, sizeof header, "%-28s %6s %7s %7s %7s\n", scenario.empty() ? "Relation" : scenario.c_str(),
                "Pairs", "P", "R", "F");
  out += header;
  out += std::string(58, '-') + "\n";
  std::size_t total = 0;
  for (const auto& [rel, rs] : report.per_relation) {
    out += row(rel, rs.pairs, rs.metrics);
    total += rs.pairs;
  }
  out += std::string(58, '-') + "\n";
  out += row("Overall (macro)", total, report.overall);
  if (report.pooled) out += row("Overall (pooled)", total, *report.pooled);
  return out;
}

std::string report_to_csv(const EvalReport& report) {
  std::string out = "relation,pairs,precision,recall,f1\n";
  char buf[200];
  std::size_t total = 0;
  for (const auto& [rel, rs] : report.per_relation) {
    std::snprintf(buf, sizeof buf, "%s,%zu,%.6f,%.6f,%.6f\n", rel.c_str(), rs.pairs, rs.metrics.precision,
                  rs.metrics.recall, rs.metrics.f1);
    out += buf;
    total += rs.pairs;
  }
  std::snprintf(buf, sizeof buf, "overall,%zu,%.6f,%.6f,%.6f\n", total, report.overall.precision,
                report.overall.recall, report.overall.f1);
  out += buf;
  return out;
}

json regime_to_json(const RegimeResult& result, const RegimeSpec& spec) {
  json reps = json::array();
  for (std::size_t i = 0; i < result.repetitions.size(); ++i) {
    reps.push_back({{"repetition", i},
                    {"seed", spec.seed + i},
                    {"sampled_records", result.sample_sizes.at(i)},
                    {"report", report_to_json(result.repetitions[i])}});
  }
  return json{{"fraction", spec.fraction},
              {"repetitions", spec.repetitions},
              {"seed", spec.seed},
              {"mean", report_to_json(result.mean)},
              {"per_repetition", reps},
              {"warnings", result.warnings}};
}

}  // namespace kbp
