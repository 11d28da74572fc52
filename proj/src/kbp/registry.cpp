#include "kbp/registry.hpp"

#include <fstream>
#include <set>

#include "kbp/errors.hpp"
#include "kbp/template.hpp"

namespace kbp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& relation, const std::string& field, const std::string& what) {
  throw ConfigError("relation '" + relation + "': field '" + field + "' " + what);
}

void check_fraction(const std::string& relation, const char* field, double v) {
  if (!(v >= 0.0 && v <= 1.0)) fail(relation, field, "must be in [0,1], got " + std::to_string(v));
}

std::string get_string(const json& entry, const std::string& relation, const char* field) {
  if (!entry.contains(field) || !entry[field].is_string()) fail(relation, field, "must be a string");
  return entry[field].get<std::string>();
}

double get_fraction(const json& entry, const std::string& relation, const char* field, double fallback) {
  if (!entry.contains(field)) return fallback;
  if (!entry[field].is_number()) fail(relation, field, "must be a number");
  return entry[field].get<double>();
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace

void validate_schema(const RelationSchema& s, const std::map<std::string, NerLabel>& class_labels) {
  const auto& r = s.name;
  if (r.empty()) throw ConfigError("relation with empty name");
  if (count_placeholder(s.search_template, kSubjectPlaceholder) == 0) fail(r, "t_search", "must contain {X}");
  if (count_placeholder(s.prompt_template, kSubjectPlaceholder) == 0) fail(r, "t_lm", "must contain {X}");
  if (count_placeholder(s.prompt_template, kMaskPlaceholder) != 1) fail(r, "t_lm", "must contain exactly one {MASK}");
  if (count_placeholder(s.hypothesis_template, kSubjectPlaceholder) == 0) fail(r, "t_h", "must contain {X}");
  if (count_placeholder(s.hypothesis_template, kObjectPlaceholder) == 0) fail(r, "t_h", "must contain {Y}");
  if (count_placeholder(s.question_template, kSubjectPlaceholder) == 0) fail(r, "t_qa", "must contain {X}");
  if (s.range_classes.empty()) fail(r, "range_classes", "must not be empty");
  if (s.sources.empty()) fail(r, "sources", "must not be empty");
  for (auto src : s.sources.members())
    if (src != Source::LM && src != Source::KG && src != Source::NER)
      fail(r, "sources", "may only contain LM, KG, NER");
  check_fraction(r, "T_lm", s.lm_threshold);
  check_fraction(r, "T_e", s.entail_threshold);
  check_fraction(r, "T_qa", s.qa_threshold);
  if (s.sources.contains(Source::NER)) {
    for (const auto& cls : s.range_classes)
      if (!class_labels.count(cls)) fail(r, "range_classes", "class '" + cls + "' has no NER label mapping");
  }
}

Registry::Registry(std::vector<RelationSchema> schemas, std::map<std::string, NerLabel> class_labels)
    : class_labels_(std::move(class_labels)) {
  if (schemas.empty()) throw ConfigError("relation config defines no relations");
  for (auto& s : schemas) {
    validate_schema(s, class_labels_);
    const auto name = s.name;
    if (!schemas_.emplace(name, std::move(s)).second) throw ConfigError("duplicate relation '" + name + "'");
  }
}

const RelationSchema& Registry::at(const std::string& relation) const {
  auto it = schemas_.find(relation);
  if (it == schemas_.end()) throw ConfigError("unknown relation '" + relation + "'");
  return it->second;
}

std::vector<std::string> Registry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : schemas_) out.push_back(name);
  return out;
}

std::optional<NerLabel> Registry::label_for_class(const std::string& cls) const {
  auto it = class_labels_.find(cls);
  if (it == class_labels_.end()) return std::nullopt;
  return it->second;
}

Registry Registry::with_overlay(const ThresholdOverlay& overlay) const {
  std::vector<RelationSchema> schemas;
  for (const auto& [name, s] : schemas_) {
    auto copy = s;
    if (auto it = overlay.find(name); it != overlay.end()) {
      if (it->second.lm) copy.lm_threshold = *it->second.lm;
      if (it->second.entail) copy.entail_threshold = *it->second.entail;
      if (it->second.qa) copy.qa_threshold = *it->second.qa;
    }
    schemas.push_back(std::move(copy));
  }
  for (const auto& [name, _] : overlay)
    if (!schemas_.count(name)) throw ConfigError("threshold overlay names unknown relation '" + name + "'");
  return Registry(std::move(schemas), class_labels_);
}

Registry Registry::with_sources(const std::map<std::string, SourceSet>& sources) const {
  std::vector<RelationSchema> schemas;
  for (const auto& [name, s] : schemas_) {
    auto copy = s;
    if (auto it = sources.find(name); it != sources.end()) copy.sources = it->second;
    schemas.push_back(std::move(copy));
  }
  return Registry(std::move(schemas), class_labels_);
}

Registry parse_registry(const json& doc) {
  if (!doc.is_object()) throw ConfigError("relation config must be a JSON object");
  std::map<std::string, NerLabel> labels;
  if (doc.contains("ner_class_labels")) {
    for (const auto& [cls, label] : doc["ner_class_labels"].items()) {
      auto parsed = label.is_string() ? parse_ner_label(label.get<std::string>()) : std::nullopt;
      if (!parsed) throw ConfigError("ner_class_labels: class '" + cls + "' must map to PER, LOC or ORG");
      labels.emplace(cls, *parsed);
    }
  }
  if (!doc.contains("relations") || !doc["relations"].is_array())
    throw ConfigError("relation config needs a 'relations' array");

  std::vector<RelationSchema> schemas;
  std::set<std::string> seen;
  for (const auto& entry : doc["relations"]) {
    if (!entry.is_object()) throw ConfigError("relation entries must be objects");
    RelationSchema s;
    s.name = entry.value("name", std::string{});
    if (s.name.empty()) throw ConfigError("relation entry without a name");
    if (!seen.insert(s.name).second) throw ConfigError("duplicate relation '" + s.name + "'");
    s.domain_class = entry.value("domain_class", std::string{});
    if (entry.contains("range_classes")) {
      if (!entry["range_classes"].is_array()) fail(s.name, "range_classes", "must be a list");
      for (const auto& c : entry["range_classes"]) {
        if (!c.is_string()) fail(s.name, "range_classes", "must hold strings");
        s.range_classes.push_back(c.get<std::string>());
      }
    }
    s.search_template = get_string(entry, s.name, "t_search");
    s.prompt_template = get_string(entry, s.name, "t_lm");
    s.hypothesis_template = get_string(entry, s.name, "t_h");
    s.question_template = get_string(entry, s.name, "t_qa");
    if (entry.contains("sources")) {
      if (!entry["sources"].is_array()) fail(s.name, "sources", "must be a list");
      for (const auto& v : entry["sources"]) {
        auto src = v.is_string() ? parse_source(v.get<std::string>()) : std::nullopt;
        if (!src) fail(s.name, "sources", "has unknown source " + v.dump());
        s.sources.insert(*src);
      }
    }
    s.lm_threshold = get_fraction(entry, s.name, "T_lm", s.lm_threshold);
    s.entail_threshold = get_fraction(entry, s.name, "T_e", s.entail_threshold);
    s.qa_threshold = get_fraction(entry, s.name, "T_qa", s.qa_threshold);
    s.optional_relation = entry.value("optional_relation", false);
    schemas.push_back(std::move(s));
  }
  return Registry(std::move(schemas), std::move(labels));
}

Registry load_registry(const std::filesystem::path& config_path) {
  const auto doc = read_json_file(config_path);
  try {
    return parse_registry(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(config_path.string() + ": " + e.what());
  }
}

json schema_to_json(const RelationSchema& s) {
  return json{{"name", s.name},
              {"domain_class", s.domain_class},
              {"range_classes", s.range_classes},
              {"t_search", s.search_template},
              {"t_lm", s.prompt_template},
              {"t_h", s.hypothesis_template},
              {"t_qa", s.question_template},
              {"sources", s.sources.names()},
              {"T_lm", s.lm_threshold},
              {"T_e", s.entail_threshold},
              {"T_qa", s.qa_threshold},
              {"optional_relation", s.optional_relation}};
}

ThresholdOverlay parse_overlay(const json& doc) {
  ThresholdOverlay overlay;
  const json& rels = doc.contains("relations") ? doc["relations"] : doc;
  if (!rels.is_object()) throw ConfigError("threshold overlay must be an object keyed by relation");
  for (const auto& [name, entry] : rels.items()) {
    ThresholdOverride o;
    auto take = [&](const char* key, std::optional<double>& slot) {
      if (!entry.contains(key)) return;
      const double v = entry[key].get<double>();
      check_fraction(name, key, v);
      slot = v;
    };
    take("T_lm", o.lm);
    take("T_e", o.entail);
    take("T_qa", o.qa);
    overlay.emplace(name, o);
  }
  return overlay;
}

ThresholdOverlay load_overlay(const std::filesystem::path& path) {
  try {
    return parse_overlay(read_json_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json overlay_to_json(const ThresholdOverlay& overlay) {
  json rels = json::object();
  for (const auto& [name, o] : overlay) {
    json entry = json::object();
    if (o.lm) entry["T_lm"] = *o.lm;
    if (o.entail) entry["T_e"] = *o.entail;
    if (o.qa) entry["T_qa"] = *o.qa;
    rels[name] = entry;
  }
  return json{{"relations", rels}};
}

}  // namespace kbp
