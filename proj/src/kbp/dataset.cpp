#include "kbp/dataset.hpp"

#include "kbp/errors.hpp"
#include "kbp/jsonl.hpp"
#include "kbp/text.hpp"

namespace kbp {

namespace {

using nlohmann::json;

const json* field(const json& row, const char* name, const char* alt) {
  if (row.contains(name)) return &row[name];
  if (row.contains(alt)) return &row[alt];
  return nullptr;
}

}  // namespace

GoldRecord parse_gold_record(const json& row) {
  if (!row.is_object()) throw ParseError("record is not an object");
  const json* subject = field(row, "subject", "SubjectEntity");
  const json* relation = field(row, "relation", "Relation");
  const json* objects = field(row, "objects", "ObjectEntities");
  if (!subject || !subject->is_string()) throw ParseError("record needs a string 'subject'");
  if (!relation || !relation->is_string()) throw ParseError("record needs a string 'relation'");
  if (!objects || !objects->is_array()) throw ParseError("record needs an 'objects' list");

  GoldRecord rec;
  rec.pair.subject = text::trim(subject->get<std::string>());
  rec.pair.relation = relation->get<std::string>();
  if (rec.pair.subject.empty()) throw ParseError("record has an empty subject");
  if (rec.pair.relation.empty()) throw ParseError("record has an empty relation");
  for (const auto& obj : *objects) {
    AliasSet aliases;
    if (obj.is_string()) {
      aliases.push_back(obj.get<std::string>());
    } else if (obj.is_array()) {
      for (const auto& a : obj) {
        if (!a.is_string()) throw ParseError("alias lists must hold strings");
        aliases.push_back(a.get<std::string>());
      }
    } else {
      throw ParseError("objects must be strings or lists of strings");
    }
    if (aliases.empty()) throw ParseError("empty alias-set for subject '" + rec.pair.subject + "'");
    for (const auto& a : aliases)
      if (text::canonical(a).empty()) throw ParseError("blank alias for subject '" + rec.pair.subject + "'");
    rec.gold_objects.push_back(std::move(aliases));
  }
  return rec;
}

std::vector<GoldRecord> load_dataset(const std::filesystem::path& path) {
  std::vector<GoldRecord> records;
  io::for_each_jsonl(path, [&](const json& row, std::size_t lineno) {
    try {
      records.push_back(parse_gold_record(row));
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  });
  return records;
}

json gold_record_to_json(const GoldRecord& record) {
  json objects = json::array();
  for (const auto& aliases : record.gold_objects) objects.push_back(aliases);
  return json{{"subject", record.pair.subject}, {"relation", record.pair.relation}, {"objects", objects}};
}

void write_dataset(const std::vector<GoldRecord>& records, const std::filesystem::path& path) {
  std::vector<json> rows;
  rows.reserve(records.size());
  for (const auto& r : records) rows.push_back(gold_record_to_json(r));
  io::write_file_atomic(path, io::to_jsonl(rows));
}

void require_relations(const std::vector<GoldRecord>& records, const Registry& registry) {
  for (const auto& r : records)
    if (!registry.contains(r.pair.relation))
      throw ConfigError("dataset relation '" + r.pair.relation + "' (subject '" + r.pair.subject +
                        "') is not in the relation config");
}

}  // namespace kbp
