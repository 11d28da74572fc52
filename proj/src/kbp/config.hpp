#pragma once

// Run configuration. A JSON document whose relative paths resolve against
// the directory holding it:
//
// {
//   "relations": "relations.json",          required
//   "dataset": "test.jsonl",                required; predicted and evaluated
//   "train_dataset": "train.jsonl",         calibration, traingen, regime
//   "premise_cache": "premises.jsonl",      required; written by fetch-premises
//   "kg_cache": "kg.jsonl",
//   "stoplist": "stopwords_en.txt",
//   "relation_map": "relation_map.json",
//   "thresholds": "thresholds.json",        overlay applied by predict
//   "output_dir": "out",                    required
//   "k": 3, "top_n": 100, "seed": 0,
//   "sources": ["LM", "KG"] | {"Relation": ["NER"], ...},
//   "regime": {"fraction": 0.05, "repetitions": 10},
//   "backends": {
//     "fixture": "fixtures.json",           default for every capability
//     "<capability>": {"url": ..., "headers": {...}, "api_key_env": ...,
//                      "timeout_s": 60, "retries": 3}
//   }
// }
//
// Capabilities: search, fill_mask, entail, ner, qa, relext, sparql. The
// sparql entry also takes "typing_predicate". A capability entry may be
// {"mode": "fixture"} to force the fixture twin.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbp/backends/backends.hpp"
#include "kbp/backends/http.hpp"
#include "kbp/regime.hpp"
#include "kbp/types.hpp"

namespace kbp {

inline constexpr const char* kCapabilities[] = {"search", "fill_mask", "entail", "ner", "qa", "relext", "sparql"};

struct CapabilityConfig {
  enum class Mode { Fixture, Http, Off } mode = Mode::Off;
  HttpEndpoint endpoint;
  std::string api_key_env;  // value sent as "Authorization: Bearer <key>"
  std::string typing_predicate = "rdf:type";
};

struct RunConfig {
  std::filesystem::path config_path;
  std::string config_text;

  std::filesystem::path relations;
  std::filesystem::path dataset;
  std::optional<std::filesystem::path> train_dataset;
  std::filesystem::path premise_cache;
  std::optional<std::filesystem::path> kg_cache;
  std::optional<std::filesystem::path> stoplist;
  std::optional<std::filesystem::path> relation_map;
  std::optional<std::filesystem::path> thresholds;
  std::filesystem::path output_dir;

  int k = 3;
  int top_n = 100;
  std::uint64_t seed = 0;
  std::map<std::string, SourceSet> sources;           // per relation
  std::optional<SourceSet> sources_all;                // every relation
  RegimeSpec regime;

  std::optional<std::filesystem::path> fixture;
  std::map<std::string, CapabilityConfig> capabilities;
};

/// Parses and validates; every referenced input path must exist except the
/// premise cache, the KG cache and the output directory.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

SourceSet parse_source_list(const nlohmann::json& list, const std::string& where);

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

struct BackendBundle {
  Backends backends;
  std::map<std::string, std::string> descriptions;  // capability -> "fixture:..." | "http:..."
};

BackendBundle build_backends(const RunConfig& config);

}  // namespace kbp
