#pragma once

// Contracts for every external capability. Each has a fixture twin
// (fixture.hpp) and an HTTP client (http.hpp); both must satisfy the same
// postconditions. All implementations are safe for concurrent calls.
//
// Character offsets crossing these interfaces are Unicode code point indices
// into the text that was sent, matching Python string slicing on the server.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "kbp/types.hpp"

namespace kbp {

inline constexpr int kDefaultTopN = 100;

struct MaskFillResult {
  std::string token;
  double score = 0.0;
};

struct EntailmentLogits {
  double entail = 0.0;
  double contradiction = 0.0;
  double neutral = 0.0;
};

struct NerSpan {
  std::string surface;
  NerLabel label = NerLabel::PER;
  std::size_t start = 0;
  std::size_t end = 0;
};

struct QaAnswer {
  std::string answer;  // empty means no answer
  double score = 0.0;
  long start = -1;
  long end = -1;
};

struct ExtractedTriple {
  std::string subject;
  std::string relation_label;
  std::string object;
};

struct SearchHit {
  std::string title;
  std::string url;
  std::string snippet;
};

class MaskFillBackend {
 public:
  virtual ~MaskFillBackend() = default;
  /// prompt holds exactly one {MASK}. At most top_n results, score-descending.
  virtual std::vector<MaskFillResult> fill_mask(std::string_view prompt, int top_n) const = 0;
};

class EntailmentBackend {
 public:
  virtual ~EntailmentBackend() = default;
  virtual EntailmentLogits entail(std::string_view premise, std::string_view hypothesis) const = 0;
};

class NerBackend {
 public:
  virtual ~NerBackend() = default;
  virtual std::vector<NerSpan> ner(std::string_view text) const = 0;
};

class QaBackend {
 public:
  virtual ~QaBackend() = default;
  virtual QaAnswer qa(std::string_view question, std::string_view context) const = 0;
};

class RelationExtractionBackend {
 public:
  virtual ~RelationExtractionBackend() = default;
  virtual std::vector<ExtractedTriple> extract_relations(std::string_view text) const = 0;
};

class KnowledgeGraphBackend {
 public:
  virtual ~KnowledgeGraphBackend() = default;
  /// Labels of instances of class_name, deduplicated. Unknown class -> empty.
  virtual std::vector<std::string> sparql_instances(std::string_view class_name) const = 0;
};

class SearchBackend {
 public:
  virtual ~SearchBackend() = default;
  /// At most k hits in engine rank order.
  virtual std::vector<SearchHit> web_search(std::string_view query, int k) const = 0;
};

/// Any member may be null when the capability is not configured; callers
/// that need it throw ConfigError.
struct Backends {
  std::shared_ptr<const SearchBackend> search;
  std::shared_ptr<const MaskFillBackend> mask_fill;
  std::shared_ptr<const EntailmentBackend> entailment;
  std::shared_ptr<const NerBackend> ner;
  std::shared_ptr<const QaBackend> qa;
  std::shared_ptr<const RelationExtractionBackend> relext;
  std::shared_ptr<const KnowledgeGraphBackend> kg;
};

// Postcondition checks shared by fixture and HTTP implementations. Each
// throws ContractError on violation.
void check_mask_prompt(std::string_view prompt);
void check_fill_mask_results(const std::vector<MaskFillResult>& results, int top_n);
void check_logits(const EntailmentLogits& logits);
void check_ner_spans(std::string_view text, const std::vector<NerSpan>& spans);
void check_qa_answer(std::string_view context, const QaAnswer& answer);
void check_triples(const std::vector<ExtractedTriple>& triples);
void require_non_empty(std::string_view value, const char* what);

/// Order-preserving exact dedup.
std::vector<std::string> dedup_labels(std::vector<std::string> labels);

}  // namespace kbp
