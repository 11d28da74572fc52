#include "kbp/baselines.hpp"

#include <fstream>

#include "kbp/errors.hpp"
#include "kbp/template.hpp"
#include "kbp/text.hpp"

namespace kbp {

RelationMap RelationMap::parse(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("relation map must be an object");
  std::map<std::string, std::optional<std::string>> entries;
  for (const auto& [rel, label] : doc.items()) {
    if (label.is_null()) {
      entries.emplace(rel, std::nullopt);
    } else if (label.is_string() && !label.get<std::string>().empty()) {
      entries.emplace(rel, label.get<std::string>());
    } else {
      throw ConfigError("relation map entry '" + rel + "' must be a label or null");
    }
  }
  return RelationMap(std::move(entries));
}

RelationMap RelationMap::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open relation map " + path.string());
  try {
    return parse(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::optional<std::string> RelationMap::label_for(const std::string& relation) const {
  auto it = entries_.find(relation);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::vector<ScoredItem> lm_baseline_scores(const InputPair& pair, const Registry& registry,
                                           const MaskFillBackend& mask_fill, const Stoplist& stoplist, int top_n) {
  auto cands = filter_stopwords(lm_candidates(pair, registry, mask_fill, 0.0, top_n), stoplist);
  std::vector<ScoredItem> out;
  for (auto& c : cands) out.push_back({std::move(c.surface), *c.lm_score});
  return out;
}

PredictionRecord lm_baseline(const InputPair& pair, const Registry& registry, const MaskFillBackend& mask_fill,
                             const Stoplist& stoplist, int top_n) {
  const double threshold = registry.at(pair.relation).lm_threshold;
  PredictionRecord rec;
  rec.pair = pair;
  rec.system = std::string(kSystemLmBaseline);
  for (auto& item : lm_baseline_scores(pair, registry, mask_fill, stoplist, top_n))
    if (item.score >= threshold) add_object(rec, {std::move(item.surface), Source::LM, item.score, item.score});
  return rec;
}

namespace {

bool is_conjunction(const std::string& word) {
  const auto w = text::canonical(word);
  return w == "and" || w == "or";
}

}  // namespace

std::vector<std::string> split_list_answer(std::string_view answer) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : answer) {
    if (c == ',') {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);

  // The last comma part may hold "x and y" or, after an Oxford comma, "and y".
  std::vector<std::string> items;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto tokens = text::whitespace_tokens(parts[i]);
    if (i + 1 != parts.size()) {
      items.push_back(text::trim(parts[i]));
      continue;
    }
    std::size_t split = tokens.size();
    for (std::size_t t = tokens.size(); t-- > 0;) {
      if (is_conjunction(tokens[t].text)) {
        split = t;
        break;
      }
    }
    if (split == tokens.size()) {
      items.push_back(text::trim(parts[i]));
      continue;
    }
    auto join = [&](std::size_t from, std::size_t to) {
      std::string s;
      for (std::size_t t = from; t < to; ++t) {
        if (!s.empty()) s.push_back(' ');
        s += tokens[t].text;
      }
      return s;
    };
    items.push_back(join(0, split));
    items.push_back(join(split + 1, tokens.size()));
  }
  std::erase_if(items, [](const std::string& s) { return s.empty(); });
  return items;
}

std::vector<ScoredItem> qa_baseline_scores(const InputPair& pair, const std::vector<Premise>& premises,
                                           const QaBackend& qa, const Registry& registry) {
  const auto question = render_template(registry.at(pair.relation).question_template, pair.subject);
  std::vector<ScoredItem> out;
  for (const auto& p : premises) {
    const auto answer = qa.qa(question, p.text);
    if (answer.answer.empty()) continue;
    for (auto& item : split_list_answer(answer.answer)) out.push_back({std::move(item), answer.score});
  }
  return out;
}

PredictionRecord qa_baseline(const InputPair& pair, const std::vector<Premise>& premises, const QaBackend& qa,
                             const Registry& registry) {
  const double threshold = registry.at(pair.relation).qa_threshold;
  PredictionRecord rec;
  rec.pair = pair;
  rec.system = std::string(kSystemQaBaseline);
  for (auto& item : qa_baseline_scores(pair, premises, qa, registry))
    if (item.score >= threshold) add_object(rec, {std::move(item.surface), Source::QA, item.score, std::nullopt});
  return rec;
}

PredictionRecord re_baseline(const InputPair& pair, const std::vector<Premise>& premises,
                             const RelationExtractionBackend& re, const RelationMap& relation_map,
                             bool require_subject_match) {
  PredictionRecord rec;
  rec.pair = pair;
  rec.system = std::string(kSystemReBaseline);
  const auto label = relation_map.label_for(pair.relation);
  if (!label) {
    rec.flags.emplace_back(kFlagUnsupported);
    return rec;
  }
  const auto wanted = text::canonical(*label);
  for (const auto& p : premises) {
    for (const auto& t : re.extract_relations(p.text)) {
      if (text::canonical(t.relation_label) != wanted) continue;
      if (require_subject_match && !text::equals_canonical(t.subject, pair.subject)) continue;
      auto surface = text::trim(t.object);
      if (!surface.empty()) add_object(rec, {std::move(surface), Source::RE, std::nullopt, std::nullopt});
    }
  }
  return rec;
}

}  // namespace kbp
