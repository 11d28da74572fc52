#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbp/types.hpp"
#include "kbp/validation.hpp"

namespace kbp {

inline constexpr std::string_view kSystemSatori = "satori";
inline constexpr std::string_view kSystemLmBaseline = "lm-baseline";
inline constexpr std::string_view kSystemQaBaseline = "qa-baseline";
inline constexpr std::string_view kSystemReBaseline = "re-baseline";

bool is_known_system(std::string_view system);

inline constexpr std::string_view kFlagUnsupported = "UNSUPPORTED";

struct PredictionRecord {
  InputPair pair;
  std::string system{kSystemSatori};
  std::vector<PredictedObject> objects;  // case-insensitively unique
  std::vector<Verdict> verdicts;         // satori only
  std::vector<std::string> flags;
  std::optional<std::string> error;      // pair-level failure
};

/// Appends obj unless its canonical surface is already present, in which case
/// sources are merged and the larger scores kept.
void add_object(PredictionRecord& record, PredictedObject obj);

nlohmann::json verdict_to_json(const Verdict& v);
nlohmann::json prediction_to_json(const PredictionRecord& record, bool explain);
PredictionRecord prediction_from_json(const nlohmann::json& row);

std::string predictions_to_jsonl(const std::vector<PredictionRecord>& records, bool explain);
std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path);

}  // namespace kbp
