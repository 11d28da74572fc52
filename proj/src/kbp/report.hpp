#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "kbp/metrics.hpp"
#include "kbp/regime.hpp"

namespace kbp {

nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& doc);

/// Aligned plain-text table: one row per relation plus the overall row,
/// columns P, R, F in percent.
std::string report_to_table(const EvalReport& report, const std::string& scenario = "");

/// relation,pairs,precision,recall,f1
std::string report_to_csv(const EvalReport& report);

nlohmann::json regime_to_json(const RegimeResult& result, const RegimeSpec& spec);

}  // namespace kbp
