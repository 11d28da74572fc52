#include "kbp/commands.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <thread>

#include "kbp/calibration.hpp"
#include "kbp/dataset.hpp"
#include "kbp/errors.hpp"
#include "kbp/jsonl.hpp"
#include "kbp/metrics.hpp"
#include "kbp/pipeline.hpp"
#include "kbp/prediction.hpp"
#include "kbp/regime.hpp"
#include "kbp/report.hpp"
#include "kbp/traingen.hpp"
#include "kbp/version.hpp"

namespace kbp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Registry build_registry(const RunConfig& config) {
  auto registry = load_registry(config.relations);
  std::map<std::string, SourceSet> sources;
  if (config.sources_all)
    for (const auto& name : registry.names()) sources[name] = *config.sources_all;
  for (const auto& [rel, s] : config.sources) {
    if (!registry.contains(rel)) throw ConfigError("sources: unknown relation '" + rel + "'");
    sources[rel] = s;
  }
  return sources.empty() ? registry : registry.with_sources(sources);
}

}  // namespace

Session::Session(RunConfig config)
    : config_(std::move(config)), registry_(build_registry(config_)), backends_(build_backends(config_)) {
  if (config_.stoplist) stoplist_ = Stoplist::load(*config_.stoplist);
  if (config_.relation_map) relation_map_ = RelationMap::load(*config_.relation_map);
}

Session Session::open(const fs::path& config_path) { return Session(load_run_config(config_path)); }

PremiseCache& Session::premise_cache() {
  if (!premises_) {
    premises_ = std::make_unique<PremiseCache>();
    if (fs::exists(config_.premise_cache)) *premises_ = PremiseCache::load(config_.premise_cache);
  }
  return *premises_;
}

KgInstanceCache& Session::kg_cache() {
  if (!kg_cache_) {
    kg_cache_ = std::make_unique<KgInstanceCache>();
    if (config_.kg_cache && fs::exists(*config_.kg_cache)) *kg_cache_ = KgInstanceCache::load(*config_.kg_cache);
  }
  return *kg_cache_;
}

std::string predictions_file_name(const std::string& system) { return "predictions." + system + ".jsonl"; }
std::string thresholds_file_name(const std::string& system) { return "thresholds." + system + ".json"; }

namespace {

constexpr const char* kFetchHint = "; run fetch-premises first";

int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void require_system(const std::string& system) {
  if (!is_known_system(system))
    throw ConfigError("unknown system '" + system + "' (expected satori, lm-baseline, qa-baseline or re-baseline)");
}

std::vector<GoldRecord> select_records(std::vector<GoldRecord> records, const Registry& registry,
                                       const std::vector<std::string>& relations) {
  for (const auto& r : relations)
    if (!registry.contains(r)) throw ConfigError("unknown relation '" + r + "'");
  if (!relations.empty()) {
    const std::set<std::string> keep(relations.begin(), relations.end());
    std::erase_if(records, [&](const GoldRecord& g) { return keep.count(g.pair.relation) == 0; });
  }
  require_relations(records, registry);
  return records;
}

/// Records sorted by pair with duplicate pairs dropped.
std::vector<GoldRecord> unique_sorted(std::vector<GoldRecord> records) {
  records = sorted_records(std::move(records));
  records.erase(std::unique(records.begin(), records.end(),
                            [](const GoldRecord& a, const GoldRecord& b) { return a.pair == b.pair; }),
                records.end());
  return records;
}

std::vector<GoldRecord> eval_records(const Session& s, const CommandOptions& o) {
  return select_records(load_dataset(s.config().dataset), s.registry(), o.relations);
}

std::vector<GoldRecord> train_records(const Session& s, const CommandOptions& o) {
  const auto& path = s.config().train_dataset ? *s.config().train_dataset : s.config().dataset;
  return select_records(load_dataset(path), s.registry(), o.relations);
}

void require_premise_cache(const Session& s) {
  if (!fs::exists(s.config().premise_cache))
    throw MissingCacheError("premise cache " + s.config().premise_cache.string() + " does not exist" + kFetchHint);
}

/// Thread-safe progress reporting.
class Progress {
 public:
  Progress(const CommandOptions& o, std::size_t total) : fn_(o.progress), total_(total) {}
  void tick() {
    if (!fn_) return;
    const auto done = ++done_;
    std::lock_guard lock(mu_);
    fn_(done, total_);
  }

 private:
  std::function<void(std::size_t, std::size_t)> fn_;
  std::size_t total_;
  std::atomic<std::size_t> done_{0};
  std::mutex mu_;
};

/// Runs fn over [0, n) in parallel, re-throwing a missing cache with the
/// fetch hint attached.
void run_pairs(std::size_t n, const CommandOptions& o, const std::function<void(std::size_t)>& fn) {
  Progress progress(o, n);
  try {
    parallel_for(n, resolve_jobs(o.jobs), [&](std::size_t i) {
      fn(i);
      progress.tick();
    });
  } catch (const MissingCacheError& e) {
    const std::string msg = e.what();
    if (msg.find(kFetchHint) != std::string::npos) throw;
    throw MissingCacheError(msg + kFetchHint);
  }
}

json file_ref(const fs::path& path) {
  return {{"path", path.filename().string()}, {"fnv1a64", fnv1a_hex(io::read_file(path))}};
}

json thresholds_json(const Registry& registry, const std::vector<GoldRecord>& records) {
  std::set<std::string> relations;
  for (const auto& r : records) relations.insert(r.pair.relation);
  json out = json::object();
  for (const auto& rel : relations) {
    const auto& s = registry.at(rel);
    out[rel] = {{"T_lm", s.lm_threshold}, {"T_e", s.entail_threshold}, {"T_qa", s.qa_threshold}};
  }
  return out;
}

fs::path output_path(const Session& s, const std::string& name) {
  fs::create_directories(s.config().output_dir);
  return s.config().output_dir / name;
}

/// Writes <stem>.manifest.json next to an output file.
void write_manifest(const Session& s, const std::string& command, const fs::path& output, json extra) {
  const auto& c = s.config();
  json m = {{"command", command},
            {"version", kVersionString},
            {"config", c.config_path.filename().string()},
            {"config_fnv1a64", fnv1a_hex(c.config_text)},
            {"seed", c.seed},
            {"k", c.k},
            {"top_n", c.top_n},
            {"backends", s.backends().descriptions},
            {"output", output.filename().string()},
            {"created_at", utc_timestamp_now()}};
  json inputs = {{"relations", file_ref(c.relations)}, {"dataset", file_ref(c.dataset)}};
  if (c.train_dataset) inputs["train_dataset"] = file_ref(*c.train_dataset);
  if (fs::exists(c.premise_cache)) inputs["premise_cache"] = file_ref(c.premise_cache);
  if (c.fixture) inputs["fixture"] = file_ref(*c.fixture);
  m["inputs"] = inputs;
  for (auto& [k, v] : extra.items()) m[k] = v;
  auto path = output;
  path.replace_extension(".manifest.json");
  io::write_file_atomic(path, m.dump(2) + "\n");
}

Backends offline_backends(const Session& s, bool refresh) {
  Backends b = s.backends().backends;
  if (!refresh) b.search = nullptr;
  return b;
}

// Per-pair material from which any threshold setting can be decided without
// further backend calls.
struct PairMaterial {
  std::optional<ScoredPair> scored;    // satori
  std::vector<ScoredItem> items;       // lm-baseline, qa-baseline
  std::optional<PredictionRecord> fixed;  // re-baseline
  std::optional<std::string> error;
};

struct MaterialContext {
  Session* session;
  std::string system;
  Backends backends;
  PipelineContext pipeline;
};

MaterialContext material_context(Session& s, const std::string& system, bool refresh) {
  MaterialContext mc{&s, system, offline_backends(s, refresh), {}};
  mc.pipeline = {&s.registry(), nullptr, &s.premise_cache(), &s.kg_cache(), &s.stoplist(), s.config().k,
                 s.config().top_n, refresh};
  if (system == kSystemLmBaseline && !mc.backends.mask_fill) throw ConfigError("lm-baseline needs a fill_mask backend");
  if (system == kSystemQaBaseline && !mc.backends.qa) throw ConfigError("qa-baseline needs a qa backend");
  if (system == kSystemReBaseline) {
    if (!mc.backends.relext) throw ConfigError("re-baseline needs a relext backend");
    if (!s.config().relation_map) throw ConfigError("re-baseline needs a relation_map");
  }
  return mc;
}

PairMaterial gather(const MaterialContext& mc, const InputPair& pair) {
  PipelineContext ctx = mc.pipeline;
  ctx.backends = &mc.backends;
  PairMaterial m;
  if (mc.system == kSystemSatori) {
    m.scored = score_pair(pair, ctx, 0.0);
    m.error = m.scored->error;
    return m;
  }
  try {
    if (mc.system == kSystemLmBaseline) {
      m.items = lm_baseline_scores(pair, *ctx.registry, *mc.backends.mask_fill, *ctx.stoplist, ctx.top_n);
      return m;
    }
    const auto premises = fetch_premises(pair, *ctx.registry, ctx.k, mc.backends.search.get(), *ctx.premises, ctx.refresh);
    if (mc.system == kSystemQaBaseline) {
      m.items = qa_baseline_scores(pair, premises, *mc.backends.qa, *ctx.registry);
    } else {
      m.fixed = re_baseline(pair, premises, *mc.backends.relext, mc.session->relation_map());
    }
  } catch (const MissingCacheError&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    m.error = e.what();
  }
  return m;
}

PredictionRecord decide_from(const std::string& system, const Registry& registry, const InputPair& pair,
                             const PairMaterial& m) {
  const auto& schema = registry.at(pair.relation);
  if (system == kSystemSatori) return decide(*m.scored, schema.lm_threshold, schema.entail_threshold);
  PredictionRecord rec;
  rec.pair = pair;
  rec.system = system;
  rec.error = m.error;
  if (m.fixed) return *m.fixed;
  for (const auto& it : m.items) {
    if (system == kSystemLmBaseline && it.score >= schema.lm_threshold)
      add_object(rec, {it.surface, Source::LM, it.score, it.score});
    if (system == kSystemQaBaseline && it.score >= schema.qa_threshold)
      add_object(rec, {it.surface, Source::QA, it.score, std::nullopt});
  }
  return rec;
}

struct Calibrated {
  ThresholdOverlay overlay;
  json details = json::object();
  std::vector<std::string> warnings;
};

Calibrated calibrate_from(const std::string& system, const Registry& registry, const std::vector<GoldRecord>& records,
                          const std::map<InputPair, PairMaterial>& material) {
  if (system == kSystemReBaseline) throw ConfigError("re-baseline has no thresholds to calibrate");
  std::map<std::string, std::vector<const GoldRecord*>> by_relation;
  for (const auto& r : records) by_relation[r.pair.relation].push_back(&r);

  Calibrated out;
  for (const auto& [rel, recs] : by_relation) {
    const auto& schema = registry.at(rel);
    ThresholdOverride ov;
    json detail;
    if (system == kSystemSatori) {
      std::vector<ScoredPair> scored;
      std::vector<GoldRecord> gold;
      for (const auto* r : recs) {
        scored.push_back(*material.at(r->pair).scored);
        gold.push_back(*r);
      }
      if (schema.sources.contains(Source::LM)) {
        const auto rows = joint_calibration_data(scored, gold);
        if (rows.empty()) {
          out.warnings.push_back(rel + ": no usable calibration pairs, thresholds unchanged");
          continue;
        }
        const auto res = calibrate_joint(rows);
        ov.lm = res.lm_threshold;
        ov.entail = res.entail_threshold;
        detail = {{"T_lm", res.lm_threshold}, {"T_e", res.entail_threshold}, {"f1", res.f1}, {"pairs", rows.size()}};
      } else {
        const auto rows = entailment_calibration_data(scored, gold);
        if (rows.empty()) {
          out.warnings.push_back(rel + ": no usable calibration pairs, thresholds unchanged");
          continue;
        }
        const auto res = calibrate_1d(rows);
        ov.entail = res.threshold;
        detail = {{"T_e", res.threshold}, {"f1", res.f1}, {"pairs", rows.size()}};
      }
    } else {
      std::vector<CalibrationPair> rows;
      for (const auto* r : recs) {
        const auto& m = material.at(r->pair);
        if (m.error) continue;
        rows.push_back({m.items, r->gold_objects});
      }
      if (rows.empty()) {
        out.warnings.push_back(rel + ": no usable calibration pairs, thresholds unchanged");
        continue;
      }
      const auto res = calibrate_1d(rows);
      const char* key = system == kSystemLmBaseline ? "T_lm" : "T_qa";
      (system == kSystemLmBaseline ? ov.lm : ov.qa) = res.threshold;
      detail = {{key, res.threshold}, {"f1", res.f1}, {"pairs", rows.size()}};
    }
    out.overlay[rel] = ov;
    out.details[rel] = detail;
  }
  return out;
}

std::map<InputPair, PairMaterial> gather_all(const MaterialContext& mc, const std::vector<GoldRecord>& records,
                                             const CommandOptions& o) {
  std::vector<PairMaterial> rows(records.size());
  run_pairs(records.size(), o, [&](std::size_t i) { rows[i] = gather(mc, records[i].pair); });
  std::map<InputPair, PairMaterial> out;
  for (std::size_t i = 0; i < records.size(); ++i) out.emplace(records[i].pair, std::move(rows[i]));
  return out;
}

std::optional<fs::path> overlay_path(const Session& s, const CommandOptions& o) {
  if (o.thresholds) return o.thresholds;
  return s.config().thresholds;
}

}  // namespace

json cmd_fetch_premises(Session& s, const CommandOptions& o) {
  const auto& backends = s.backends().backends;
  if (!backends.search) throw ConfigError("fetch-premises needs a search backend");
  auto records = eval_records(s, o);
  if (s.config().train_dataset) {
    auto train = train_records(s, o);
    records.insert(records.end(), train.begin(), train.end());
  }
  records = unique_sorted(std::move(records));

  auto& cache = s.premise_cache();
  std::vector<std::string> failures(records.size());
  std::atomic<std::size_t> fetched{0};
  run_pairs(records.size(), o, [&](std::size_t i) {
    const auto& pair = records[i].pair;
    if (o.refresh || !cache.contains(build_query(pair, s.registry()))) ++fetched;
    try {
      fetch_premises(pair, s.registry(), s.config().k, backends.search.get(), cache, o.refresh);
    } catch (const RetrievalError& e) {
      failures[i] = e.what();
    }
  });
  std::erase(failures, std::string());
  cache.save(s.config().premise_cache);

  json summary = {{"pairs", records.size()}, {"fetched", fetched.load()}, {"failures", failures},
                  {"outputs", {s.config().premise_cache.string()}}};

  // Range-class instances for KG-sourced relations, fetched once per class.
  if (s.config().kg_cache && backends.kg) {
    std::set<std::string> classes;
    for (const auto& r : records) {
      const auto& schema = s.registry().at(r.pair.relation);
      if (schema.sources.contains(Source::KG)) classes.insert(schema.range_classes.begin(), schema.range_classes.end());
    }
    for (const auto& cls : classes) s.kg_cache().instances(cls, backends.kg.get());
    s.kg_cache().save(*s.config().kg_cache);
    summary["kg_classes"] = classes.size();
    summary["outputs"].push_back(s.config().kg_cache->string());
  }
  write_manifest(s, "fetch-premises", s.config().premise_cache,
                 {{"pairs", records.size()}, {"fetched", fetched.load()}, {"failures", failures.size()}});
  return summary;
}

json cmd_predict(Session& s, const CommandOptions& o) {
  require_system(o.system);
  if (!o.refresh) require_premise_cache(s);
  auto registry = s.registry();
  std::optional<fs::path> overlay_file = overlay_path(s, o);
  if (overlay_file) registry = registry.with_overlay(load_overlay(*overlay_file));

  const auto records = unique_sorted(eval_records(s, o));
  auto mc = material_context(s, o.system, o.refresh);
  mc.pipeline.registry = &registry;

  std::vector<PredictionRecord> out(records.size());
  run_pairs(records.size(), o, [&](std::size_t i) {
    const auto& pair = records[i].pair;
    if (o.system == kSystemSatori) {
      PipelineContext ctx = mc.pipeline;
      ctx.backends = &mc.backends;
      out[i] = predict_objects(pair, ctx);
    } else {
      out[i] = decide_from(o.system, registry, pair, gather(mc, pair));
    }
  });
  if (o.refresh) s.premise_cache().save(s.config().premise_cache);

  const auto path = output_path(s, predictions_file_name(o.system));
  io::write_file_atomic(path, predictions_to_jsonl(out, o.explain));
  std::size_t errors = 0;
  for (const auto& r : out) errors += r.error ? 1 : 0;
  json extra = {{"system", o.system},
                {"explain", o.explain},
                {"thresholds", thresholds_json(registry, records)},
                {"pairs", out.size()},
                {"pair_errors", errors}};
  if (overlay_file) extra["thresholds_overlay"] = file_ref(*overlay_file);
  write_manifest(s, "predict", path, extra);
  return {{"system", o.system}, {"pairs", out.size()}, {"pair_errors", errors}, {"outputs", {path.string()}}};
}

json cmd_calibrate(Session& s, const CommandOptions& o) {
  require_system(o.system);
  if (!o.refresh) require_premise_cache(s);
  const auto records = unique_sorted(train_records(s, o));
  const auto mc = material_context(s, o.system, o.refresh);
  const auto material = gather_all(mc, records, o);
  const auto cal = calibrate_from(o.system, s.registry(), records, material);

  const auto path = output_path(s, thresholds_file_name(o.system));
  io::write_file_atomic(path, overlay_to_json(cal.overlay).dump(2) + "\n");
  write_manifest(s, "calibrate", path,
                 {{"system", o.system}, {"calibration", cal.details}, {"warnings", cal.warnings}, {"pairs", records.size()}});
  return {{"system", o.system}, {"calibration", cal.details}, {"warnings", cal.warnings}, {"outputs", {path.string()}}};
}

json cmd_evaluate(Session& s, const CommandOptions& o) {
  const auto pred_path = o.predictions ? *o.predictions : s.config().output_dir / predictions_file_name(o.system);
  if (!fs::exists(pred_path)) throw ConfigError("no predictions file " + pred_path.string());
  const auto gold = eval_records(s, o);
  if (gold.empty()) throw ConfigError("no gold records to evaluate");
  const auto predictions = load_predictions(pred_path);
  const auto report = macro_report(score_predictions(gold, predictions), o.pooled);

  std::string stem = pred_path.stem().string();
  if (stem.rfind("predictions.", 0) == 0) stem = stem.substr(12);
  const auto json_path = output_path(s, "evaluation." + stem + ".json");
  const auto table_path = output_path(s, "evaluation." + stem + ".txt");
  const auto table = report_to_table(report, stem);
  io::write_file_atomic(json_path, report_to_json(report).dump(2) + "\n");
  io::write_file_atomic(table_path, table);
  write_manifest(s, "evaluate", json_path, {{"predictions", file_ref(pred_path)}, {"pooled", o.pooled}});
  return {{"report", report_to_json(report)}, {"table", table}, {"outputs", {json_path.string(), table_path.string()}}};
}

json cmd_traingen(Session& s, const CommandOptions& o) {
  static const std::vector<std::string> kKinds = {"mlm", "entailment", "qa", "re"};
  std::vector<std::string> kinds;
  if (o.kind == "all") {
    kinds = kKinds;
  } else if (std::find(kKinds.begin(), kKinds.end(), o.kind) != kKinds.end()) {
    kinds = {o.kind};
  } else {
    throw ConfigError("unknown traingen kind '" + o.kind + "' (expected mlm, entailment, qa, re or all)");
  }
  const bool needs_premises = kinds.size() > 1 || kinds.front() != "mlm";
  if (needs_premises) require_premise_cache(s);
  if (o.kind == "re" && !s.config().relation_map) throw ConfigError("traingen re needs a relation_map");

  const auto records = train_records(s, o);
  const TraingenInputs in{&s.registry(), needs_premises ? &s.premise_cache() : nullptr, s.config().k};
  json summary = {{"outputs", json::array()}, {"stats", json::object()}, {"warnings", json::array()}};
  for (const auto& kind : kinds) {
    TraingenStats stats;
    std::string body;
    if (kind == "mlm") {
      body = instances_to_jsonl(gen_mlm(records, s.registry(), &stats));
    } else if (kind == "entailment") {
      const EntailmentOptions opts{s.backends().backends.mask_fill.get(), &s.stoplist(), s.config().top_n};
      body = instances_to_jsonl(gen_entailment(records, in, opts, &stats));
    } else if (kind == "qa") {
      body = instances_to_jsonl(gen_qa(records, in, &stats));
    } else {
      if (!s.config().relation_map) {
        summary["warnings"].push_back("re skipped: no relation_map configured");
        continue;
      }
      body = instances_to_jsonl(gen_re(records, in, s.relation_map(), &stats));
    }
    const auto path = output_path(s, "traingen." + kind + ".jsonl");
    io::write_file_atomic(path, body);
    write_manifest(s, "traingen", path, {{"kind", kind}, {"stats", stats.to_json()}});
    summary["outputs"].push_back(path.string());
    summary["stats"][kind] = stats.to_json();
  }
  return summary;
}

json cmd_regime(Session& s, const CommandOptions& o) {
  require_system(o.system);
  if (!o.refresh) require_premise_cache(s);
  RegimeSpec spec = s.config().regime;
  if (o.seed) spec.seed = *o.seed;
  if (o.fraction) spec.fraction = *o.fraction;
  if (o.repetitions) spec.repetitions = *o.repetitions;
  validate_regime(spec);

  const auto train = unique_sorted(train_records(s, o));
  const auto eval = unique_sorted(eval_records(s, o));
  const auto mc = material_context(s, o.system, o.refresh);
  auto all = train;
  all.insert(all.end(), eval.begin(), eval.end());
  const auto material = gather_all(mc, unique_sorted(all), o);

  std::vector<std::string> warnings;
  if (!s.config().train_dataset) warnings.emplace_back("no train_dataset configured; calibrating on the evaluation set");
  const fs::path sample_dir = s.config().output_dir / ("regime-samples." + o.system);
  fs::create_directories(sample_dir);

  auto experiment = [&](const std::vector<GoldRecord>& sample, int rep) {
    write_dataset(sample, sample_dir / ("sample-" + std::to_string(rep) + ".jsonl"));
    auto registry = s.registry();
    if (o.system != kSystemReBaseline) {
      auto cal = calibrate_from(o.system, registry, sample, material);
      for (auto& w : cal.warnings) warnings.push_back("repetition " + std::to_string(rep) + ": " + w);
      registry = registry.with_overlay(cal.overlay);
    }
    std::vector<PredictionRecord> preds;
    for (const auto& g : eval) preds.push_back(decide_from(o.system, registry, g.pair, material.at(g.pair)));
    return macro_report(score_predictions(eval, preds), o.pooled);
  };
  auto result = run_regime(train, spec, experiment);
  result.warnings.insert(result.warnings.end(), warnings.begin(), warnings.end());

  const auto path = output_path(s, "regime." + o.system + ".json");
  const auto table_path = output_path(s, "regime." + o.system + ".txt");
  const auto doc = regime_to_json(result, spec);
  const auto table = report_to_table(result.mean, o.system + " (mean of " + std::to_string(spec.repetitions) + ")");
  io::write_file_atomic(path, doc.dump(2) + "\n");
  io::write_file_atomic(table_path, table);
  write_manifest(s, "regime", path,
                 {{"system", o.system}, {"fraction", spec.fraction}, {"repetitions", spec.repetitions}, {"seed", spec.seed}});
  return {{"regime", doc}, {"table", table}, {"outputs", {path.string(), table_path.string()}}};
}

}  // namespace kbp
