#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbp/types.hpp"

namespace kbp {

struct RelationSchema {
  std::string name;
  std::string domain_class;
  std::vector<std::string> range_classes;
  std::string search_template;      // t_search: {X}
  std::string prompt_template;      // t_lm: {X} and one {MASK}
  std::string hypothesis_template;  // t_h: {X} and {Y}
  std::string question_template;    // t_qa: {X}
  SourceSet sources;
  double lm_threshold = 0.0;
  double entail_threshold = 0.5;
  double qa_threshold = 0.0;
  bool optional_relation = false;
};

/// Per-relation threshold overrides written by calibration.
struct ThresholdOverride {
  std::optional<double> lm;
  std::optional<double> entail;
  std::optional<double> qa;
};
using ThresholdOverlay = std::map<std::string, ThresholdOverride>;

/// Immutable after construction.
class Registry {
 public:
  Registry(std::vector<RelationSchema> schemas, std::map<std::string, NerLabel> class_labels);

  const RelationSchema& at(const std::string& relation) const;
  bool contains(const std::string& relation) const { return schemas_.count(relation) != 0; }
  std::size_t size() const { return schemas_.size(); }
  std::vector<std::string> names() const;

  std::optional<NerLabel> label_for_class(const std::string& cls) const;
  const std::map<std::string, NerLabel>& class_labels() const { return class_labels_; }

  Registry with_overlay(const ThresholdOverlay& overlay) const;
  Registry with_sources(const std::map<std::string, SourceSet>& sources) const;

 private:
  std::map<std::string, RelationSchema> schemas_;
  std::map<std::string, NerLabel> class_labels_;
};

/// Throws ConfigError naming the relation and field on violation.
void validate_schema(const RelationSchema& schema, const std::map<std::string, NerLabel>& class_labels);

Registry parse_registry(const nlohmann::json& doc);
Registry load_registry(const std::filesystem::path& config_path);

nlohmann::json schema_to_json(const RelationSchema& schema);

ThresholdOverlay parse_overlay(const nlohmann::json& doc);
ThresholdOverlay load_overlay(const std::filesystem::path& path);
nlohmann::json overlay_to_json(const ThresholdOverlay& overlay);

}  // namespace kbp
