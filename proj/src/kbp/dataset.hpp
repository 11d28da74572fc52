#pragma once

#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbp/registry.hpp"
#include "kbp/types.hpp"

namespace kbp {

/// Accepts {"subject","relation","objects"} rows, and the LM-KBC field names
/// SubjectEntity/Relation/ObjectEntities. Plain string objects are promoted
/// to singleton alias-sets.
GoldRecord parse_gold_record(const nlohmann::json& row);
std::vector<GoldRecord> load_dataset(const std::filesystem::path& path);

nlohmann::json gold_record_to_json(const GoldRecord& record);
void write_dataset(const std::vector<GoldRecord>& records, const std::filesystem::path& path);

/// Every relation in records must resolve in the registry.
void require_relations(const std::vector<GoldRecord>& records, const Registry& registry);

}  // namespace kbp
