#include "kbp/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "kbp/backends/fixture.hpp"
#include "kbp/errors.hpp"
#include "kbp/jsonl.hpp"

namespace kbp {

namespace fs = std::filesystem;

SourceSet parse_source_list(const nlohmann::json& list, const std::string& where) {
  if (!list.is_array() || list.empty()) throw ConfigError(where + ": expected a non-empty list of sources");
  SourceSet set;
  for (const auto& item : list) {
    auto s = item.is_string() ? parse_source(item.get<std::string>()) : std::nullopt;
    if (!s) throw ConfigError(where + ": unknown source " + item.dump());
    set.insert(*s);
  }
  return set;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

fs::path resolve(const fs::path& base, const std::string& value) {
  fs::path p(value);
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

std::string string_field(const nlohmann::json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (!v.is_string() || v.get<std::string>().empty()) throw ConfigError(std::string("field '") + key + "' must be a non-empty string");
  return v.get<std::string>();
}

fs::path required_path(const nlohmann::json& doc, const fs::path& base, const char* key, bool must_exist) {
  if (!doc.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  auto p = resolve(base, string_field(doc, key));
  if (must_exist && !fs::exists(p)) throw ConfigError(std::string("field '") + key + "': no such file " + p.string());
  return p;
}

std::optional<fs::path> optional_path(const nlohmann::json& doc, const fs::path& base, const char* key, bool must_exist) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  return required_path(doc, base, key, must_exist);
}

int int_field(const nlohmann::json& doc, const char* key, int fallback, int min) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < min)
    throw ConfigError(std::string("field '") + key + "' must be an integer >= " + std::to_string(min));
  return v.get<int>();
}

CapabilityConfig parse_capability(const std::string& name, const nlohmann::json& doc, bool have_fixture) {
  CapabilityConfig cap;
  if (!doc.is_object()) throw ConfigError("backend '" + name + "' must be an object");
  const std::string mode = doc.value("mode", doc.contains("url") ? "http" : "fixture");
  if (mode == "fixture") {
    if (!have_fixture) throw ConfigError("backend '" + name + "' uses fixture mode but no fixture file is configured");
    cap.mode = CapabilityConfig::Mode::Fixture;
  } else if (mode == "http") {
    cap.mode = CapabilityConfig::Mode::Http;
    if (!doc.contains("url") || !doc["url"].is_string()) throw ConfigError("backend '" + name + "' needs a url");
    cap.endpoint.base_url = doc["url"].get<std::string>();
    if (doc.contains("headers")) {
      for (const auto& [k, v] : doc["headers"].items()) {
        if (!v.is_string()) throw ConfigError("backend '" + name + "': header '" + k + "' must be a string");
        cap.endpoint.headers[k] = v.get<std::string>();
      }
    }
    cap.api_key_env = doc.value("api_key_env", "");
    cap.endpoint.timeout = std::chrono::seconds(int_field(doc, "timeout_s", 60, 1));
    cap.endpoint.retry.max_retries = int_field(doc, "retries", 3, 0);
    cap.typing_predicate = doc.value("typing_predicate", "rdf:type");
  } else if (mode == "off") {
    cap.mode = CapabilityConfig::Mode::Off;
  } else {
    throw ConfigError("backend '" + name + "': unknown mode '" + mode + "'");
  }
  return cap;
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("run config must be a JSON object");
  RunConfig c;
  try {
    c.relations = required_path(doc, base_dir, "relations", true);
    c.dataset = required_path(doc, base_dir, "dataset", true);
    c.train_dataset = optional_path(doc, base_dir, "train_dataset", true);
    c.premise_cache = required_path(doc, base_dir, "premise_cache", false);
    c.kg_cache = optional_path(doc, base_dir, "kg_cache", false);
    c.stoplist = optional_path(doc, base_dir, "stoplist", true);
    c.relation_map = optional_path(doc, base_dir, "relation_map", true);
    c.thresholds = optional_path(doc, base_dir, "thresholds", true);
    c.output_dir = required_path(doc, base_dir, "output_dir", false);

    c.k = int_field(doc, "k", 3, 1);
    c.top_n = int_field(doc, "top_n", kDefaultTopN, 1);
    if (doc.contains("seed")) {
      if (!doc["seed"].is_number_unsigned()) throw ConfigError("field 'seed' must be a non-negative integer");
      c.seed = doc["seed"].get<std::uint64_t>();
    }

    if (doc.contains("sources")) {
      const auto& s = doc["sources"];
      if (s.is_array()) {
        c.sources_all = parse_source_list(s, "sources");
      } else if (s.is_object()) {
        for (const auto& [rel, list] : s.items()) c.sources[rel] = parse_source_list(list, "sources." + rel);
      } else {
        throw ConfigError("field 'sources' must be a list or an object");
      }
    }

    c.regime.seed = c.seed;
    if (doc.contains("regime")) {
      const auto& r = doc["regime"];
      if (!r.is_object()) throw ConfigError("field 'regime' must be an object");
      if (r.contains("fraction")) {
        if (!r["fraction"].is_number()) throw ConfigError("regime.fraction must be a number");
        c.regime.fraction = r["fraction"].get<double>();
      }
      c.regime.repetitions = int_field(r, "repetitions", c.regime.repetitions, 1);
      validate_regime(c.regime);
    }

    const auto backends = doc.value("backends", nlohmann::json::object());
    if (!backends.is_object()) throw ConfigError("field 'backends' must be an object");
    if (backends.contains("fixture")) c.fixture = required_path(backends, base_dir, "fixture", true);
    for (const char* name : kCapabilities) {
      if (backends.contains(name)) {
        c.capabilities[name] = parse_capability(name, backends[name], c.fixture.has_value());
      } else if (c.fixture) {
        c.capabilities[name].mode = CapabilityConfig::Mode::Fixture;
      }
    }
    for (const auto& [name, _] : backends.items()) {
      if (name == "fixture") continue;
      if (std::find(std::begin(kCapabilities), std::end(kCapabilities), name) == std::end(kCapabilities))
        throw ConfigError("unknown backend capability '" + name + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  auto base = fs::absolute(path).parent_path();
  auto config = parse_run_config(doc, base);
  config.config_path = fs::absolute(path).lexically_normal();
  config.config_text = std::move(text);
  return config;
}

BackendBundle build_backends(const RunConfig& config) {
  BackendBundle bundle;
  Backends fixture;
  if (config.fixture) fixture = load_fixture_backends(*config.fixture);

  for (const auto& [name, cap] : config.capabilities) {
    if (cap.mode == CapabilityConfig::Mode::Off) continue;
    if (cap.mode == CapabilityConfig::Mode::Fixture) {
      bundle.descriptions[name] = "fixture:" + config.fixture->filename().string();
      if (name == "search") bundle.backends.search = fixture.search;
      if (name == "fill_mask") bundle.backends.mask_fill = fixture.mask_fill;
      if (name == "entail") bundle.backends.entailment = fixture.entailment;
      if (name == "ner") bundle.backends.ner = fixture.ner;
      if (name == "qa") bundle.backends.qa = fixture.qa;
      if (name == "relext") bundle.backends.relext = fixture.relext;
      if (name == "sparql") bundle.backends.kg = fixture.kg;
      continue;
    }
    auto ep = cap.endpoint;
    if (!cap.api_key_env.empty()) {
      const char* key = std::getenv(cap.api_key_env.c_str());
      if (key == nullptr || *key == '\0')
        throw ConfigError("backend '" + name + "': environment variable " + cap.api_key_env + " is not set");
      ep.headers["Authorization"] = std::string("Bearer ") + key;
    }
    bundle.descriptions[name] = "http:" + ep.base_url;
    if (name == "search") bundle.backends.search = std::make_shared<HttpSearch>(ep);
    if (name == "fill_mask") bundle.backends.mask_fill = std::make_shared<HttpMaskFill>(ep);
    if (name == "entail") bundle.backends.entailment = std::make_shared<HttpEntailment>(ep);
    if (name == "ner") bundle.backends.ner = std::make_shared<HttpNer>(ep);
    if (name == "qa") bundle.backends.qa = std::make_shared<HttpQa>(ep);
    if (name == "relext") bundle.backends.relext = std::make_shared<HttpRelationExtraction>(ep);
    if (name == "sparql") bundle.backends.kg = std::make_shared<SparqlKnowledgeGraph>(ep, cap.typing_predicate);
  }
  return bundle;
}

}  // namespace kbp
