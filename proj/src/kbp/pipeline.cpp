#include "kbp/pipeline.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "kbp/errors.hpp"

namespace kbp {

ScoredPair score_pair(const InputPair& pair, const PipelineContext& ctx, double lm_floor) {
  const auto& registry = *ctx.registry;
  const auto& backends = *ctx.backends;
  const auto& schema = registry.at(pair.relation);

  ScoredPair out;
  out.pair = pair;
  try {
    out.premises = fetch_premises(pair, registry, ctx.k, backends.search.get(), *ctx.premises, ctx.refresh);
  } catch (const MissingCacheError&) {
    throw;
  } catch (const Error& e) {
    out.error = std::string("retrieval: ") + e.what();
    return out;
  }

  std::vector<std::vector<CandidateObject>> lists;
  try {
    if (schema.sources.contains(Source::LM)) {
      if (!backends.mask_fill) throw ConfigError("relation '" + schema.name + "' uses LM candidates but no mask-fill backend is configured");
      auto lm = lm_candidates(pair, registry, *backends.mask_fill, lm_floor, ctx.top_n);
      lists.push_back(filter_mentioned(filter_stopwords(std::move(lm), *ctx.stoplist), out.premises));
    }
    if (schema.sources.contains(Source::KG)) {
      auto kg = kg_candidates(schema, backends.kg.get(), ctx.kg_cache);
      lists.push_back(filter_mentioned(filter_stopwords(std::move(kg), *ctx.stoplist), out.premises));
    }
    if (schema.sources.contains(Source::NER)) {
      if (!backends.ner) throw ConfigError("relation '" + schema.name + "' uses NER candidates but no NER backend is configured");
      auto ner = ner_candidates(out.premises, schema, *backends.ner, registry);
      out.ner_failures = ner.failed_premises;
      lists.push_back(filter_stopwords(std::move(ner.candidates), *ctx.stoplist));
    }
  } catch (const MissingCacheError&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    out.error = std::string("candidates: ") + e.what();
    return out;
  }

  auto merged = merge_candidates(lists);
  if (!merged.empty() && !backends.entailment)
    throw ConfigError("no entailment backend is configured");
  for (auto& c : merged) {
    Triple triple{pair.subject, pair.relation, c.surface};
    auto verdict = validate_triple(triple, registry, out.premises, *backends.entailment, schema.entail_threshold);
    out.candidates.push_back({std::move(c), std::move(verdict)});
  }
  return out;
}

PredictionRecord decide(const ScoredPair& scored, double lm_threshold, double entail_threshold) {
  PredictionRecord rec;
  rec.pair = scored.pair;
  rec.system = std::string(kSystemSatori);
  rec.error = scored.error;
  for (const auto& sc : scored.candidates) {
    auto verdict = sc.verdict;
    const auto& c = sc.candidate;
    const bool lm_gate = c.sources.bits() != SourceSet(Source::LM).bits() || (c.lm_score && *c.lm_score >= lm_threshold);
    apply_threshold(verdict, entail_threshold);
    if (!lm_gate && verdict.accepted) {
      verdict.accepted = false;
      verdict.status = VerdictStatus::Rejected;
    }
    if (verdict.accepted) add_object(rec, {c.surface, c.sources, verdict.mean_probability, c.lm_score});
    rec.verdicts.push_back(std::move(verdict));
  }
  return rec;
}

PredictionRecord predict_objects(const InputPair& pair, const PipelineContext& ctx) {
  const auto& schema = ctx.registry->at(pair.relation);
  return decide(score_pair(pair, ctx, schema.lm_threshold), schema.lm_threshold, schema.entail_threshold);
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace kbp
