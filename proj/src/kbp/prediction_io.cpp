#include "kbp/prediction.hpp"

#include "kbp/errors.hpp"
#include "kbp/jsonl.hpp"
#include "kbp/text.hpp"

namespace kbp {

using nlohmann::json;

bool is_known_system(std::string_view system) {
  return system == kSystemSatori || system == kSystemLmBaseline || system == kSystemQaBaseline ||
         system == kSystemReBaseline;
}

void add_object(PredictionRecord& record, PredictedObject obj) {
  const auto key = text::canonical(obj.surface);
  for (auto& existing : record.objects) {
    if (text::canonical(existing.surface) != key) continue;
    existing.sources |= obj.sources;
    if (obj.score && (!existing.score || *obj.score > *existing.score)) existing.score = obj.score;
    if (obj.lm_score && (!existing.lm_score || *obj.lm_score > *existing.lm_score)) existing.lm_score = obj.lm_score;
    return;
  }
  record.objects.push_back(std::move(obj));
}

json verdict_to_json(const Verdict& v) {
  json per = json::array();
  for (const auto& p : v.per_premise) per.push_back({{"rank", p.rank}, {"probability", p.probability}});
  json out{{"object", v.triple.object},
           {"hypothesis", v.hypothesis},
           {"per_premise", per},
           {"mean_entailment", v.mean_probability ? json(*v.mean_probability) : json(nullptr)},
           {"accepted", v.accepted},
           {"status", to_string(v.status)}};
  if (v.error) out["error"] = *v.error;
  return out;
}

json prediction_to_json(const PredictionRecord& r, bool explain) {
  const bool satori = r.system == kSystemSatori;
  json objects = json::array();
  for (const auto& o : r.objects) {
    json obj{{"surface", o.surface}, {"sources", o.sources.names()}};
    if (o.score) obj[satori ? "mean_entailment" : "score"] = *o.score;
    if (satori && o.lm_score) obj["lm_score"] = *o.lm_score;
    objects.push_back(std::move(obj));
  }
  json out{{"subject", r.pair.subject}, {"relation", r.pair.relation}, {"system", r.system}, {"objects", objects}};
  if (!r.flags.empty()) out["flags"] = r.flags;
  if (r.error) out["error"] = *r.error;
  if (explain && satori) {
    json verdicts = json::array();
    for (const auto& v : r.verdicts) verdicts.push_back(verdict_to_json(v));
    out["verdicts"] = verdicts;
  }
  return out;
}

PredictionRecord prediction_from_json(const json& row) {
  PredictionRecord r;
  r.pair.subject = row.at("subject").get<std::string>();
  r.pair.relation = row.at("relation").get<std::string>();
  r.system = row.value("system", std::string(kSystemSatori));
  for (const auto& o : row.at("objects")) {
    PredictedObject obj;
    obj.surface = o.at("surface").get<std::string>();
    for (const auto& s : o.value("sources", json::array())) {
      if (auto src = parse_source(s.get<std::string>())) obj.sources.insert(*src);
    }
    if (o.contains("mean_entailment")) obj.score = o["mean_entailment"].get<double>();
    if (o.contains("score")) obj.score = o["score"].get<double>();
    if (o.contains("lm_score")) obj.lm_score = o["lm_score"].get<double>();
    r.objects.push_back(std::move(obj));
  }
  if (row.contains("flags")) r.flags = row["flags"].get<std::vector<std::string>>();
  if (row.contains("error")) r.error = row["error"].get<std::string>();
  return r;
}

std::string predictions_to_jsonl(const std::vector<PredictionRecord>& records, bool explain) {
  std::string out;
  for (const auto& r : records) {
    out += prediction_to_json(r, explain).dump();
    out += '\n';
  }
  return out;
}

std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path) {
  std::vector<PredictionRecord> out;
  io::for_each_jsonl(path, [&](const json& row, std::size_t) { out.push_back(prediction_from_json(row)); });
  return out;
}

}  // namespace kbp
