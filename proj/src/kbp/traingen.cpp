#include "kbp/traingen.hpp"

#include <algorithm>
#include <set>

#include "kbp/errors.hpp"
#include "kbp/metrics.hpp"
#include "kbp/template.hpp"
#include "kbp/text.hpp"

namespace kbp {

std::string_view to_string(EntailmentLabel l) {
  return l == EntailmentLabel::Entailment ? "ENTAILMENT" : "CONTRADICTION";
}

nlohmann::json TraingenStats::to_json() const {
  return {{"pairs", pairs},
          {"pairs_without_premises", pairs_without_premises},
          {"instances", instances},
          {"positives", positives},
          {"negatives", negatives},
          {"negatives_from_lm", negatives_from_lm},
          {"negatives_from_gold", negatives_from_gold},
          {"skipped_positives", skipped_positives},
          {"skipped_negatives", skipped_negatives},
          {"skipped_pairs", skipped_pairs},
          {"unmapped_pairs", unmapped_pairs},
          {"backend_failures", backend_failures}};
}

std::vector<Premise> cached_premises(const InputPair& pair, const TraingenInputs& in) {
  if (in.premises == nullptr) return {};
  auto hit = in.premises->get(build_query(pair, *in.registry));
  if (!hit) return {};
  auto premises = std::move(*hit);
  std::stable_sort(premises.begin(), premises.end(), [](const Premise& a, const Premise& b) { return a.rank < b.rank; });
  if (in.k >= 0 && premises.size() > static_cast<std::size_t>(in.k)) premises.resize(static_cast<std::size_t>(in.k));
  return premises;
}

std::vector<GoldRecord> sorted_records(std::vector<GoldRecord> records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const GoldRecord& a, const GoldRecord& b) { return a.pair < b.pair; });
  return records;
}

namespace {

TraingenStats& sink(TraingenStats* stats, TraingenStats& fallback) { return stats ? *stats : fallback; }

/// First alias of the set mentioned in text, if any.
std::optional<std::string> mentioned_alias(const std::string& text, const AliasSet& aliases) {
  for (const auto& a : aliases)
    if (text::mentions(text, a)) return a;
  return std::nullopt;
}

bool matches_gold(std::string_view surface, const std::vector<AliasSet>& gold) {
  return std::any_of(gold.begin(), gold.end(), [&](const AliasSet& g) { return match(surface, g); });
}

const Premise* first_mentioning(const std::vector<Premise>& premises, std::string_view surface) {
  for (const auto& p : premises)
    if (text::mentions(p.text, surface)) return &p;
  return nullptr;
}

}  // namespace

std::vector<MlmInstance> gen_mlm(const std::vector<GoldRecord>& records, const Registry& registry,
                                 TraingenStats* stats) {
  TraingenStats local;
  auto& st = sink(stats, local);
  std::vector<MlmInstance> out;
  for (const auto& rec : sorted_records(records)) {
    ++st.pairs;
    const auto& schema = registry.at(rec.pair.relation);
    const auto prompt = render_template(schema.prompt_template, rec.pair.subject);
    for (const auto& g : rec.gold_objects) out.push_back({prompt, g.front()});
  }
  st.instances += out.size();
  return out;
}

std::vector<EntailmentInstance> gen_entailment(const std::vector<GoldRecord>& input, const TraingenInputs& in,
                                               const EntailmentOptions& options, TraingenStats* stats) {
  TraingenStats local;
  auto& st = sink(stats, local);
  const auto records = sorted_records(input);
  std::vector<EntailmentInstance> out;

  for (const auto& rec : records) {
    ++st.pairs;
    const auto& pair = rec.pair;
    const auto& schema = in.registry->at(pair.relation);
    const auto premises = cached_premises(pair, in);
    if (premises.empty()) ++st.pairs_without_premises;

    std::vector<EntailmentInstance> positives;
    for (const auto& g : rec.gold_objects) {
      const Premise* chosen = nullptr;
      std::string object;
      for (const auto& p : premises) {
        if (!text::mentions(p.text, pair.subject)) continue;
        if (auto alias = mentioned_alias(p.text, g)) {
          chosen = &p;
          object = *alias;
          break;
        }
      }
      if (chosen == nullptr) {
        ++st.skipped_positives;
        continue;
      }
      positives.push_back({chosen->text, render_template(schema.hypothesis_template, pair.subject, object),
                           EntailmentLabel::Entailment, {pair.subject, pair.relation, object}});
    }
    if (positives.empty()) continue;

    // Negative pool (a): fill-mask tokens mentioned in a premise, not gold,
    // highest score first.
    std::set<std::string> used;
    std::vector<std::pair<std::string, const Premise*>> lm_pool;
    if (options.mask_fill != nullptr) {
      try {
        auto cands = lm_candidates(pair, *in.registry, *options.mask_fill, 0.0, options.top_n);
        cands = filter_stopwords(std::move(cands), options.stoplist ? *options.stoplist : Stoplist{});
        for (const auto& c : cands) {
          if (matches_gold(c.surface, rec.gold_objects)) continue;
          const Premise* p = first_mentioning(premises, c.surface);
          if (p == nullptr) continue;
          if (!used.insert(text::canonical(c.surface)).second) continue;
          lm_pool.emplace_back(text::trim(c.surface), p);
        }
      } catch (const Error&) {
        ++st.backend_failures;
      }
    }

    // Pool (b): gold objects of other subjects of the relation, those
    // mentioned in a premise first, each group in dataset order.
    std::vector<std::pair<std::string, const Premise*>> gold_mentioned;
    std::vector<std::pair<std::string, const Premise*>> gold_unmentioned;
    std::size_t lm_next = 0;
    bool gold_pool_built = false;
    std::size_t gold_next = 0;
    auto build_gold_pool = [&] {
      gold_pool_built = true;
      for (const auto& other : records) {
        if (other.pair.relation != pair.relation || text::equals_canonical(other.pair.subject, pair.subject)) continue;
        for (const auto& g : other.gold_objects) {
          const bool overlaps = std::any_of(g.begin(), g.end(), [&](const std::string& a) {
            return matches_gold(a, rec.gold_objects);
          });
          if (overlaps) continue;
          const auto& surface = g.front();
          if (!used.insert(text::canonical(surface)).second) continue;
          if (const Premise* p = first_mentioning(premises, surface)) {
            gold_mentioned.emplace_back(surface, p);
          } else {
            gold_unmentioned.emplace_back(surface, &premises.front());
          }
        }
      }
      gold_mentioned.insert(gold_mentioned.end(), gold_unmentioned.begin(), gold_unmentioned.end());
    };

    for (auto& pos : positives) {
      ++st.positives;
      out.push_back(pos);
      std::optional<std::pair<std::string, const Premise*>> neg;
      if (lm_next < lm_pool.size()) {
        neg = lm_pool[lm_next++];
        ++st.negatives_from_lm;
      } else {
        if (!gold_pool_built) build_gold_pool();
        if (gold_next < gold_mentioned.size()) {
          neg = gold_mentioned[gold_next++];
          ++st.negatives_from_gold;
        }
      }
      if (!neg) {
        ++st.skipped_negatives;
        continue;
      }
      ++st.negatives;
      out.push_back({neg->second->text, render_template(schema.hypothesis_template, pair.subject, neg->first),
                     EntailmentLabel::Contradiction, {pair.subject, pair.relation, neg->first}});
    }
  }
  st.instances += out.size();
  return out;
}

AnswerWindow best_answer_window(const std::string& passage, const std::vector<AliasSet>& gold) {
  struct Occurrence {
    std::size_t object;
    text::Span span;
    std::size_t first_token;
    std::size_t last_token;
  };
  const auto tokens = text::whitespace_tokens(passage);
  std::vector<Occurrence> occ;
  for (std::size_t g = 0; g < gold.size(); ++g) {
    for (const auto& alias : gold[g]) {
      for (const auto& span : text::find_mentions(passage, alias)) {
        std::size_t first = 0;
        while (first < tokens.size() && tokens[first].span.end <= span.start) ++first;
        std::size_t last = first;
        while (last + 1 < tokens.size() && tokens[last + 1].span.start < span.end) ++last;
        occ.push_back({g, span, first, last});
      }
    }
  }
  std::sort(occ.begin(), occ.end(), [](const Occurrence& a, const Occurrence& b) {
    if (a.span.start != b.span.start) return a.span.start < b.span.start;
    return a.span.end < b.span.end;
  });

  AnswerWindow best;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    std::vector<int> seen(gold.size(), 0);
    std::size_t distinct = 0;
    std::size_t reach = occ[i].last_token;
    std::size_t end = occ[i].span.end;
    for (std::size_t j = i; j < occ.size(); ++j) {
      if (j > i) {
        if (occ[j].first_token > reach + 1 + kMaxTokenGap) break;
        reach = std::max(reach, occ[j].last_token);
        end = std::max(end, occ[j].span.end);
      }
      if (seen[occ[j].object]++ == 0) ++distinct;
      const text::Span span{occ[i].span.start, end};
      // Runs are visited by ascending start, so among equal coverage the
      // earliest run wins and, for the same start, the shortest.
      if (distinct > best.distinct) best = {distinct, span};
    }
  }
  return best;
}

std::vector<QaInstance> gen_qa(const std::vector<GoldRecord>& records, const TraingenInputs& in,
                               TraingenStats* stats) {
  TraingenStats local;
  auto& st = sink(stats, local);
  std::vector<QaInstance> out;
  for (const auto& rec : sorted_records(records)) {
    ++st.pairs;
    const auto& pair = rec.pair;
    const auto premises = cached_premises(pair, in);
    if (premises.empty()) {
      ++st.pairs_without_premises;
      ++st.skipped_pairs;
      continue;
    }
    QaInstance inst;
    inst.id = pair.relation + "/" + pair.subject;
    inst.question = render_template(in.registry->at(pair.relation).question_template, pair.subject);
    inst.pair = pair;
    if (rec.gold_objects.empty()) {
      inst.context = premises.front().text;
      out.push_back(std::move(inst));
      continue;
    }
    const Premise* best_premise = nullptr;
    AnswerWindow best;
    for (const auto& p : premises) {
      const auto w = best_answer_window(p.text, rec.gold_objects);
      if (w.distinct > best.distinct) {
        best = w;
        best_premise = &p;
      }
    }
    if (best_premise == nullptr) {
      ++st.skipped_pairs;
      continue;
    }
    inst.context = best_premise->text;
    inst.answer = text::substr_codepoints(inst.context, best.span.start, best.span.end);
    inst.answer_start = static_cast<long>(best.span.start);
    out.push_back(std::move(inst));
  }
  st.instances += out.size();
  return out;
}

std::vector<ReInstance> gen_re(const std::vector<GoldRecord>& records, const TraingenInputs& in,
                               const RelationMap& relation_map, TraingenStats* stats) {
  TraingenStats local;
  auto& st = sink(stats, local);
  std::vector<ReInstance> out;
  for (const auto& rec : sorted_records(records)) {
    ++st.pairs;
    const auto label = relation_map.label_for(rec.pair.relation);
    if (!label) {
      ++st.unmapped_pairs;
      continue;
    }
    const auto premises = cached_premises(rec.pair, in);
    if (premises.empty()) ++st.pairs_without_premises;
    bool emitted = false;
    for (const auto& p : premises) {
      ReInstance inst{p.text, {}};
      for (const auto& g : rec.gold_objects)
        if (auto alias = mentioned_alias(p.text, g)) inst.triples.push_back({rec.pair.subject, *label, *alias});
      if (!inst.triples.empty()) {
        out.push_back(std::move(inst));
        emitted = true;
        break;
      }
    }
    if (!emitted) ++st.skipped_pairs;
  }
  st.instances += out.size();
  return out;
}

nlohmann::json to_json(const EntailmentInstance& x) {
  return {{"premise", x.premise}, {"hypothesis", x.hypothesis}, {"label", std::string(to_string(x.label))}};
}

nlohmann::json to_json(const QaInstance& x) {
  nlohmann::json answers = {{"text", nlohmann::json::array()}, {"answer_start", nlohmann::json::array()}};
  if (!x.answer.empty()) {
    answers["text"].push_back(x.answer);
    answers["answer_start"].push_back(x.answer_start);
  }
  return {{"id", x.id}, {"question", x.question}, {"context", x.context}, {"answers", answers}};
}

nlohmann::json to_json(const MlmInstance& x) { return {{"prompt", x.prompt}, {"target", x.target}}; }

nlohmann::json to_json(const ReInstance& x) {
  auto triples = nlohmann::json::array();
  for (const auto& t : x.triples) triples.push_back({{"subject", t.subject}, {"relation", t.relation}, {"object", t.object}});
  return {{"text", x.text}, {"triples", triples}};
}

}  // namespace kbp
