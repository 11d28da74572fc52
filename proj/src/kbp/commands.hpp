#pragma once

// Batch commands behind the CLI. Each writes its outputs atomically into the
// configured output directory next to a run manifest and returns a JSON
// summary naming the files it wrote.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbp/baselines.hpp"
#include "kbp/candidates.hpp"
#include "kbp/config.hpp"
#include "kbp/registry.hpp"
#include "kbp/retrieval.hpp"

namespace kbp {

struct CommandOptions {
  std::string system{"satori"};
  std::vector<std::string> relations;  // empty: all
  bool refresh = false;
  bool explain = false;
  bool pooled = false;
  int jobs = 0;  // 0: available processors
  std::optional<std::uint64_t> seed;
  std::optional<double> fraction;
  std::optional<int> repetitions;
  std::optional<std::filesystem::path> thresholds;   // overlay for predict
  std::optional<std::filesystem::path> predictions;  // input for evaluate
  std::string kind{"all"};                           // traingen dataset type
  std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Loaded configuration plus the resources every command shares.
class Session {
 public:
  explicit Session(RunConfig config);
  static Session open(const std::filesystem::path& config_path);

  const RunConfig& config() const { return config_; }
  const Registry& registry() const { return registry_; }
  const BackendBundle& backends() const { return backends_; }
  const Stoplist& stoplist() const { return stoplist_; }
  const RelationMap& relation_map() const { return relation_map_; }

  PremiseCache& premise_cache();
  KgInstanceCache& kg_cache();

 private:
  RunConfig config_;
  Registry registry_;
  BackendBundle backends_;
  Stoplist stoplist_;
  RelationMap relation_map_;
  std::unique_ptr<PremiseCache> premises_;
  std::unique_ptr<KgInstanceCache> kg_cache_;
};

nlohmann::json cmd_fetch_premises(Session& session, const CommandOptions& options);
nlohmann::json cmd_predict(Session& session, const CommandOptions& options);
nlohmann::json cmd_calibrate(Session& session, const CommandOptions& options);
nlohmann::json cmd_evaluate(Session& session, const CommandOptions& options);
nlohmann::json cmd_traingen(Session& session, const CommandOptions& options);
nlohmann::json cmd_regime(Session& session, const CommandOptions& options);

/// Output file names inside output_dir.
std::string predictions_file_name(const std::string& system);
std::string thresholds_file_name(const std::string& system);

}  // namespace kbp
