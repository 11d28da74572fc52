#include "kbp/candidates.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <unordered_map>

#include "kbp/errors.hpp"
#include "kbp/jsonl.hpp"
#include "kbp/template.hpp"
#include "kbp/text.hpp"

namespace kbp {

Stoplist::Stoplist(const std::vector<std::string>& words) {
  for (const auto& w : words) {
    auto c = text::canonical(w);
    if (!c.empty()) words_.insert(std::move(c));
  }
}

Stoplist Stoplist::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open stoplist " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    words.push_back(line);
  }
  return Stoplist(words);
}

bool Stoplist::contains(std::string_view word) const { return words_.count(text::canonical(word)) != 0; }

std::vector<CandidateObject> lm_candidates(const InputPair& pair, const Registry& registry,
                                           const MaskFillBackend& mask_fill, double threshold, int top_n) {
  const auto prompt = render_template(registry.at(pair.relation).prompt_template, pair.subject);
  std::vector<CandidateObject> out;
  for (const auto& r : mask_fill.fill_mask(prompt, top_n)) {
    if (r.score < threshold) continue;
    auto surface = text::trim(r.token);
    if (surface.empty()) continue;
    out.push_back({std::move(surface), Source::LM, r.score});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return *a.lm_score > *b.lm_score; });
  return out;
}

KgInstanceCache KgInstanceCache::load(const std::filesystem::path& path) {
  KgInstanceCache cache;
  io::for_each_jsonl(path, [&](const nlohmann::json& row, std::size_t) {
    cache.entries_[row.at("class").get<std::string>()] = row.at("labels").get<std::vector<std::string>>();
  });
  return cache;
}

std::vector<std::string> KgInstanceCache::instances(const std::string& cls, const KnowledgeGraphBackend* kg) {
  {
    std::shared_lock lock(mu_);
    if (auto it = entries_.find(cls); it != entries_.end()) return it->second;
  }
  if (!kg) throw MissingCacheError("no cached instances for class '" + cls + "' and no knowledge graph configured");
  auto labels = kg->sparql_instances(cls);
  std::unique_lock lock(mu_);
  return entries_.emplace(cls, std::move(labels)).first->second;
}

bool KgInstanceCache::contains(const std::string& cls) const {
  std::shared_lock lock(mu_);
  return entries_.count(cls) != 0;
}

std::string KgInstanceCache::to_jsonl() const {
  std::shared_lock lock(mu_);
  std::string out;
  for (const auto& [cls, labels] : entries_) {
    out += nlohmann::json{{"class", cls}, {"labels", labels}}.dump();
    out += '\n';
  }
  return out;
}

void KgInstanceCache::save(const std::filesystem::path& path) const { io::write_file_atomic(path, to_jsonl()); }

std::vector<CandidateObject> kg_candidates(const RelationSchema& schema, const KnowledgeGraphBackend* kg,
                                           KgInstanceCache* cache) {
  if (schema.range_classes.empty()) throw ConfigError("relation '" + schema.name + "' has no range classes");
  std::vector<CandidateObject> out;
  std::set<std::string> seen;
  for (const auto& cls : schema.range_classes) {
    std::vector<std::string> labels;
    if (cache) {
      labels = cache->instances(cls, kg);
    } else {
      if (!kg) throw ConfigError("relation '" + schema.name + "' uses KG candidates but no knowledge graph is configured");
      labels = kg->sparql_instances(cls);
    }
    for (auto& label : labels) {
      auto surface = text::trim(label);
      if (surface.empty() || !seen.insert(text::canonical(surface)).second) continue;
      out.push_back({std::move(surface), Source::KG, std::nullopt});
    }
  }
  return out;
}

NerCandidateResult ner_candidates(const std::vector<Premise>& premises, const RelationSchema& schema,
                                  const NerBackend& ner, const Registry& registry) {
  std::set<NerLabel> wanted;
  for (const auto& cls : schema.range_classes)
    if (auto label = registry.label_for_class(cls)) wanted.insert(*label);

  NerCandidateResult result;
  std::set<std::string> seen;
  for (const auto& p : premises) {
    std::vector<NerSpan> spans;
    try {
      spans = ner.ner(p.text);
    } catch (const Error&) {
      ++result.failed_premises;
      continue;
    }
    for (const auto& s : spans) {
      if (!wanted.count(s.label)) continue;
      auto surface = text::trim(s.surface);
      if (surface.empty() || !seen.insert(text::canonical(surface)).second) continue;
      result.candidates.push_back({std::move(surface), Source::NER, std::nullopt});
    }
  }
  return result;
}

std::vector<CandidateObject> filter_stopwords(std::vector<CandidateObject> cands, const Stoplist& stoplist) {
  std::erase_if(cands, [&](const CandidateObject& c) {
    return text::is_punctuation_only(c.surface) || stoplist.contains(c.surface);
  });
  return cands;
}

std::vector<CandidateObject> filter_mentioned(std::vector<CandidateObject> cands, const std::vector<Premise>& premises) {
  std::erase_if(cands, [&](const CandidateObject& c) {
    return std::none_of(premises.begin(), premises.end(),
                        [&](const Premise& p) { return text::mentions(p.text, c.surface); });
  });
  return cands;
}

std::vector<CandidateObject> merge_candidates(const std::vector<std::vector<CandidateObject>>& lists) {
  std::vector<CandidateObject> merged;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& list : lists) {
    for (const auto& c : list) {
      auto key = text::canonical(c.surface);
      auto [it, inserted] = index.emplace(key, merged.size());
      if (inserted) {
        merged.push_back(c);
        continue;
      }
      auto& m = merged[it->second];
      m.sources |= c.sources;
      if (c.lm_score && (!m.lm_score || *c.lm_score > *m.lm_score)) m.lm_score = c.lm_score;
    }
  }
  auto group = [](const CandidateObject& c) {
    if (c.sources.contains(Source::LM)) return 0;
    if (c.sources.contains(Source::KG)) return 1;
    return 2;
  };
  std::vector<std::string> keys;
  std::vector<std::size_t> order(merged.size());
  for (std::size_t i = 0; i < merged.size(); ++i) {
    order[i] = i;
    keys.push_back(text::canonical(merged[i].surface));
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const int ga = group(merged[a]);
    const int gb = group(merged[b]);
    if (ga != gb) return ga < gb;
    if (ga == 0) {
      const double sa = merged[a].lm_score.value_or(0.0);
      const double sb = merged[b].lm_score.value_or(0.0);
      if (sa != sb) return sa > sb;
    }
    return keys[a] < keys[b];
  });
  std::vector<CandidateObject> out;
  out.reserve(merged.size());
  for (auto i : order) out.push_back(std::move(merged[i]));
  return out;
}

}  // namespace kbp
