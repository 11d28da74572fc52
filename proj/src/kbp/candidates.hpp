#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "kbp/backends/backends.hpp"
#include "kbp/registry.hpp"
#include "kbp/retrieval.hpp"
#include "kbp/types.hpp"

namespace kbp {

struct CandidateObject {
  std::string surface;
  SourceSet sources;
  std::optional<double> lm_score;  // present iff LM is among the sources
};

/// Canonicalized (lowercased) stop words.
class Stoplist {
 public:
  Stoplist() = default;
  explicit Stoplist(const std::vector<std::string>& words);
  static Stoplist load(const std::filesystem::path& path);

  bool contains(std::string_view word) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string, std::less<>> words_;
};

/// Fill-mask tokens for the rendered t_lm with score >= threshold, in
/// descending score order.
std::vector<CandidateObject> lm_candidates(const InputPair& pair, const Registry& registry,
                                           const MaskFillBackend& mask_fill, double threshold,
                                           int top_n = kDefaultTopN);

/// Instances of the relation's range classes, fetched once per class. Thread
/// safe; optionally persisted as JSONL {"class","labels"}.
class KgInstanceCache {
 public:
  KgInstanceCache() = default;
  KgInstanceCache(KgInstanceCache&& o) noexcept : entries_(std::move(o.entries_)) {}
  KgInstanceCache& operator=(KgInstanceCache&& o) noexcept {
    entries_ = std::move(o.entries_);
    return *this;
  }
  static KgInstanceCache load(const std::filesystem::path& path);

  std::vector<std::string> instances(const std::string& cls, const KnowledgeGraphBackend* kg);
  bool contains(const std::string& cls) const;
  std::string to_jsonl() const;
  void save(const std::filesystem::path& path) const;

 private:
  mutable std::shared_mutex mu_;
  std::map<std::string, std::vector<std::string>> entries_;
};

/// Union over range classes, case-insensitively deduplicated, first spelling kept.
std::vector<CandidateObject> kg_candidates(const RelationSchema& schema, const KnowledgeGraphBackend* kg,
                                           KgInstanceCache* cache = nullptr);

struct NerCandidateResult {
  std::vector<CandidateObject> candidates;
  std::size_t failed_premises = 0;
};

/// Entities recognized in the premises whose label is the NER label of some
/// range class. A premise whose NER call fails is skipped and counted.
NerCandidateResult ner_candidates(const std::vector<Premise>& premises, const RelationSchema& schema,
                                  const NerBackend& ner, const Registry& registry);

/// Drops candidates whose canonical surface is a stop word, and any surface
/// made only of punctuation, symbols or whitespace.
std::vector<CandidateObject> filter_stopwords(std::vector<CandidateObject> cands, const Stoplist& stoplist);

/// Keeps candidates mentioned, on word boundaries and case-insensitively, in
/// at least one premise.
std::vector<CandidateObject> filter_mentioned(std::vector<CandidateObject> cands, const std::vector<Premise>& premises);

/// Case-insensitive union. Merged entries carry the union of sources and the
/// max LM score. Order: candidates with an LM score by score descending,
/// then KG, then NER, each group alphabetical by canonical form.
std::vector<CandidateObject> merge_candidates(const std::vector<std::vector<CandidateObject>>& lists);

}  // namespace kbp
