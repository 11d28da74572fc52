#include <cmath>
#include <set>

#include "kbp/backends/backends.hpp"
#include "kbp/errors.hpp"
#include "kbp/template.hpp"
#include "kbp/text.hpp"

namespace kbp {

void require_non_empty(std::string_view value, const char* what) {
  if (value.empty()) throw ContractError(std::string(what) + " must not be empty");
}

void check_mask_prompt(std::string_view prompt) {
  if (count_placeholder(prompt, kMaskPlaceholder) != 1)
    throw ContractError("fill-mask prompt must contain exactly one {MASK}: '" + std::string(prompt) + "'");
}

void check_fill_mask_results(const std::vector<MaskFillResult>& results, int top_n) {
  if (static_cast<long>(results.size()) > top_n) throw ContractError("fill-mask returned more than top_n results");
  for (std::size_t i = 0; i < results.size(); ++i) {
    const double s = results[i].score;
    if (!(s >= 0.0 && s <= 1.0)) throw ContractError("fill-mask score outside [0,1]");
    if (i > 0 && s > results[i - 1].score) throw ContractError("fill-mask results not sorted by descending score");
  }
}

void check_logits(const EntailmentLogits& l) {
  if (!std::isfinite(l.entail) || !std::isfinite(l.contradiction) || !std::isfinite(l.neutral))
    throw ContractError("entailment logits must be finite");
}

void check_ner_spans(std::string_view text, const std::vector<NerSpan>& spans) {
  const auto len = text::codepoint_length(text);
  for (const auto& s : spans) {
    if (!(s.start < s.end && s.end <= len))
      throw ContractError("NER span [" + std::to_string(s.start) + "," + std::to_string(s.end) + ") out of range");
    if (text::substr_codepoints(text, s.start, s.end) != s.surface)
      throw ContractError("NER span surface '" + s.surface + "' does not match text at its offsets");
  }
}

void check_qa_answer(std::string_view context, const QaAnswer& a) {
  if (!(a.score >= 0.0 && a.score <= 1.0)) throw ContractError("QA score outside [0,1]");
  if (a.answer.empty()) return;
  const auto len = static_cast<long>(text::codepoint_length(context));
  if (!(a.start >= 0 && a.start < a.end && a.end <= len))
    throw ContractError("QA answer offsets out of range");
  if (text::substr_codepoints(context, static_cast<std::size_t>(a.start), static_cast<std::size_t>(a.end)) != a.answer)
    throw ContractError("QA answer '" + a.answer + "' does not match context at its offsets");
}

void check_triples(const std::vector<ExtractedTriple>& triples) {
  for (const auto& t : triples)
    if (t.subject.empty() || t.relation_label.empty() || t.object.empty())
      throw ContractError("extracted triple with an empty field");
}

std::vector<std::string> dedup_labels(std::vector<std::string> labels) {
  std::set<std::string> seen;
  std::vector<std::string> out;
  for (auto& l : labels)
    if (seen.insert(l).second) out.push_back(std::move(l));
  return out;
}

}  // namespace kbp
