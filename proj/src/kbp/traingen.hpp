#pragma once

// Fine-tuning dataset generators. All of them are pure functions of the gold
// records, the premise cache and (for entailment negatives) the fill-mask
// backend; output is ordered by (relation, subject).

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbp/backends/backends.hpp"
#include "kbp/baselines.hpp"
#include "kbp/candidates.hpp"
#include "kbp/registry.hpp"
#include "kbp/retrieval.hpp"
#include "kbp/text.hpp"
#include "kbp/types.hpp"

namespace kbp {

enum class EntailmentLabel { Entailment, Contradiction };
std::string_view to_string(EntailmentLabel l);

struct EntailmentInstance {
  std::string premise;
  std::string hypothesis;
  EntailmentLabel label = EntailmentLabel::Entailment;
  Triple triple;  // the (possibly substituted) triple behind the hypothesis
};

struct QaInstance {
  std::string id;
  std::string question;
  std::string context;
  std::string answer;     // empty for no-answer
  long answer_start = -1; // code points into context
  InputPair pair;
};

struct MlmInstance {
  std::string prompt;
  std::string target;
};

struct ReInstance {
  std::string text;
  std::vector<Triple> triples;
};

struct TraingenStats {
  std::size_t pairs = 0;
  std::size_t pairs_without_premises = 0;
  std::size_t instances = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t negatives_from_lm = 0;
  std::size_t negatives_from_gold = 0;
  std::size_t skipped_positives = 0;
  std::size_t skipped_negatives = 0;
  std::size_t skipped_pairs = 0;
  std::size_t unmapped_pairs = 0;
  std::size_t backend_failures = 0;

  nlohmann::json to_json() const;
};

struct TraingenInputs {
  const Registry* registry = nullptr;
  const PremiseCache* premises = nullptr;
  int k = kDefaultPremiseCount;
};

/// Cached premises for the pair, first k by rank; empty when not cached.
std::vector<Premise> cached_premises(const InputPair& pair, const TraingenInputs& in);

/// Records sorted by (relation, subject); stable for duplicates.
std::vector<GoldRecord> sorted_records(std::vector<GoldRecord> records);

std::vector<MlmInstance> gen_mlm(const std::vector<GoldRecord>& records, const Registry& registry,
                                 TraingenStats* stats = nullptr);

struct EntailmentOptions {
  const MaskFillBackend* mask_fill = nullptr;  // null disables LM negatives
  const Stoplist* stoplist = nullptr;
  int top_n = kDefaultTopN;
};

std::vector<EntailmentInstance> gen_entailment(const std::vector<GoldRecord>& records, const TraingenInputs& in,
                                               const EntailmentOptions& options, TraingenStats* stats = nullptr);

std::vector<QaInstance> gen_qa(const std::vector<GoldRecord>& records, const TraingenInputs& in,
                               TraingenStats* stats = nullptr);

std::vector<ReInstance> gen_re(const std::vector<GoldRecord>& records, const TraingenInputs& in,
                               const RelationMap& relation_map, TraingenStats* stats = nullptr);

/// Best answer window of a passage for a multi-object gold set: the run of
/// object mentions covering the most distinct objects in which each mention
/// starts at most 3 whitespace tokens after the furthest token already
/// covered. Ties prefer the earlier span, then the shorter one.
struct AnswerWindow {
  std::size_t distinct = 0;
  text::Span span;
};
AnswerWindow best_answer_window(const std::string& passage, const std::vector<AliasSet>& gold);

inline constexpr std::size_t kMaxTokenGap = 3;

nlohmann::json to_json(const EntailmentInstance& x);
nlohmann::json to_json(const QaInstance& x);
nlohmann::json to_json(const MlmInstance& x);
nlohmann::json to_json(const ReInstance& x);

template <typename T>
std::string instances_to_jsonl(const std::vector<T>& instances) {
  std::string out;
  for (const auto& x : instances) {
    out += to_json(x).dump();
    out.push_back('\n');
  }
  return out;
}

}  // namespace kbp
