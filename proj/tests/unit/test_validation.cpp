#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "kbp/backends/fixture.hpp"
#include "kbp/errors.hpp"
#include "kbp/pipeline.hpp"
#include "kbp/validation.hpp"
#include "test_support.hpp"

using namespace kbp;
using nlohmann::json;

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<Premise> premises_of(std::initializer_list<const char*> texts) {
  std::vector<Premise> out;
  int rank = 1;
  for (const char* t : texts) out.push_back({t, rank++, "", "", "q", ""});
  return out;
}

Registry mini_registry(const std::string& sources) {
  return parse_registry(json::parse(R"({
    "ner_class_labels": {"Instrument": "ORG"},
    "relations": [{
      "name": "PlaysInstrument", "domain_class": "Person", "range_classes": ["Instrument"],
      "t_search": "{X} instrument", "t_lm": "{X} plays {MASK}.", "t_h": "{X} plays {Y}.",
      "t_qa": "What does {X} play?", "sources": )" + sources + R"(,
      "T_lm": 0.2, "T_e": 0.5, "T_qa": 0.3, "optional_relation": true
    }]
  })"));
}

}  // namespace

TEST(EntailProbability, MatchesTwoClassSoftmax) {
  EXPECT_DOUBLE_EQ(entail_probability({0.0, 0.0, 9.0}), 0.5);
  EXPECT_NEAR(entail_probability({2.0, -1.0, 0.0}), logistic(3.0), 1e-15);
  EXPECT_NEAR(entail_probability({-1.0, 2.0, 5.0}), logistic(-3.0), 1e-15);
  // No overflow at extreme logits.
  EXPECT_DOUBLE_EQ(entail_probability({1000.0, -1000.0, 0.0}), 1.0);
  EXPECT_DOUBLE_EQ(entail_probability({-1000.0, 1000.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(entail_probability({800.0, 800.0, 0.0}), 0.5);
}

TEST(EntailProbability, NeutralIsIgnored) {
  EXPECT_DOUBLE_EQ(entail_probability({1.0, 0.5, -7.0}), entail_probability({1.0, 0.5, 70.0}));
}

TEST(EntailProbability, NonFiniteIsContractError) {
  EXPECT_THROW(entail_probability({std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0}), ContractError);
  EXPECT_THROW(entail_probability({std::numeric_limits<double>::infinity(), 0.0, 0.0}), ContractError);
}

TEST(Validation, MeanOverPremises) {
  kbp::testing::LambdaEntailment rte([](std::string_view premise, std::string_view) -> EntailmentLogits {
    if (premise == "p1") return {2.0, 0.0, 0.0};
    if (premise == "p2") return {0.0, 1.0, 0.0};
    return {0.0, 0.0, 0.0};
  });
  const Triple t{"Bob", "PlaysInstrument", "guitar"};
  const auto v = validate_triple(t, "Bob plays guitar.", premises_of({"p1", "p2", "p3"}), rte, 0.5);
  ASSERT_TRUE(v.mean_probability);
  const double expected = (logistic(2.0) + logistic(-1.0) + 0.5) / 3.0;
  EXPECT_NEAR(*v.mean_probability, expected, 1e-15);
  ASSERT_EQ(v.per_premise.size(), 3u);
  EXPECT_EQ(v.per_premise[1].rank, 2);
  EXPECT_TRUE(v.accepted);
  EXPECT_EQ(v.status, VerdictStatus::Validated);

  const auto strict = validate_triple(t, "Bob plays guitar.", premises_of({"p1", "p2", "p3"}), rte, 0.6);
  EXPECT_FALSE(strict.accepted);
  EXPECT_EQ(strict.status, VerdictStatus::Rejected);
}

TEST(Validation, AcceptanceAtExactThreshold) {
  kbp::testing::LambdaEntailment rte([](std::string_view, std::string_view) { return EntailmentLogits{0, 0, 0}; });
  const auto v = validate_triple({"a", "r", "b"}, "h", premises_of({"p"}), rte, 0.5);
  EXPECT_TRUE(v.accepted);
}

TEST(Validation, NoPremisesIsRejection) {
  kbp::testing::LambdaEntailment rte([](std::string_view, std::string_view) { return EntailmentLogits{9, 0, 0}; });
  const auto v = validate_triple({"a", "r", "b"}, "h", {}, rte, 0.01);
  EXPECT_FALSE(v.accepted);
  EXPECT_EQ(v.status, VerdictStatus::NoPremises);
  EXPECT_FALSE(v.mean_probability);
}

TEST(Validation, BackendFailureIsFlaggedRejection) {
  kbp::testing::LambdaEntailment rte([](std::string_view, std::string_view) -> EntailmentLogits {
    throw TransportError("server gone");
  });
  const auto v = validate_triple({"a", "r", "b"}, "h", premises_of({"p"}), rte, 0.01);
  EXPECT_FALSE(v.accepted);
  ASSERT_TRUE(v.error);
  EXPECT_NE(v.error->find("server gone"), std::string::npos);
}

TEST(Validation, ApplyThresholdRedecides) {
  kbp::testing::LambdaEntailment rte([](std::string_view, std::string_view) { return EntailmentLogits{1, 0, 0}; });
  auto v = validate_triple({"a", "r", "b"}, "h", premises_of({"p"}), rte, 0.5);
  EXPECT_TRUE(v.accepted);
  apply_threshold(v, 0.99);
  EXPECT_FALSE(v.accepted);
  apply_threshold(v, 0.01);
  EXPECT_TRUE(v.accepted);
}

TEST(Validation, HypothesisFromTemplate) {
  const auto reg = mini_registry(R"(["LM"])");
  EXPECT_EQ(make_hypothesis({"Bob", "PlaysInstrument", "the {Y} guitar"}, reg), "Bob plays the {Y} guitar.");
}

namespace {

struct PipelineFixture {
  Registry registry;
  Backends backends;
  PremiseCache cache;
  Stoplist stoplist{std::vector<std::string>{"the"}};
  PipelineContext ctx;

  explicit PipelineFixture(const std::string& sources) : registry(mini_registry(sources)) {
    auto mf = std::make_shared<kbp::testing::StubMaskFill>();
    mf->table["Bob plays {MASK}."] = {{"guitar", 0.6}, {"the", 0.5}, {"piano", 0.3}, {"drums", 0.1}, {"flute", 0.4}};
    backends.mask_fill = mf;
    backends.entailment = std::make_shared<kbp::testing::LambdaEntailment>(
        [](std::string_view, std::string_view hypothesis) -> EntailmentLogits {
          if (hypothesis == "Bob plays guitar.") return {3, -3, 0};
          if (hypothesis == "Bob plays piano.") return {0.2, 0, 0};
          return {-3, 3, 0};
        });
    backends.kg = make_fixture_backends(json::parse(R"({"sparql":{"Instrument":["Drums","harp"]}})")).kg;
    backends.ner = make_fixture_backends(json::parse(R"({"ner":{
      "Bob plays guitar, piano and drums.": [{"surface":"drums","label":"ORG"}]}})")).ner;
    cache.put("Bob instrument", {{"Bob plays guitar, piano and drums.", 1, "", "", "Bob instrument", ""},
                                 {"Bob once saw the harp.", 2, "", "", "Bob instrument", ""}});
    ctx.registry = &registry;
    ctx.backends = &backends;
    ctx.premises = &cache;
    ctx.stoplist = &stoplist;
  }
};

std::vector<std::string> object_surfaces(const PredictionRecord& r) {
  std::vector<std::string> out;
  for (const auto& o : r.objects) out.push_back(o.surface);
  return out;
}

}  // namespace

TEST(Pipeline, ScoresFilteredMergedCandidates) {
  PipelineFixture f(R"(["LM", "KG"])");
  const auto scored = score_pair({"Bob", "PlaysInstrument"}, f.ctx, 0.0);
  EXPECT_FALSE(scored.error);
  std::vector<std::string> names;
  for (const auto& c : scored.candidates) names.push_back(c.candidate.surface);
  // flute is not mentioned, "the" is a stop word; Drums merges LM and KG.
  EXPECT_EQ(names, (std::vector<std::string>{"guitar", "piano", "drums", "harp"}));
  EXPECT_EQ(scored.candidates[2].candidate.sources, SourceSet(Source::LM) | Source::KG);
  EXPECT_EQ(scored.premises.size(), 2u);
}

TEST(Pipeline, DecideAppliesBothThresholds) {
  PipelineFixture f(R"(["LM", "KG"])");
  const auto scored = score_pair({"Bob", "PlaysInstrument"}, f.ctx, 0.0);
  // piano: mean of logistic(0.2) over two premises, about 0.55.
  EXPECT_EQ(object_surfaces(decide(scored, 0.2, 0.5)), (std::vector<std::string>{"guitar", "piano"}));
  EXPECT_EQ(object_surfaces(decide(scored, 0.4, 0.5)), (std::vector<std::string>{"guitar"}));
  EXPECT_EQ(object_surfaces(decide(scored, 0.2, 0.6)), (std::vector<std::string>{"guitar"}));
  const auto rec = decide(scored, 0.2, 0.5);
  EXPECT_EQ(rec.verdicts.size(), 4u);
  ASSERT_TRUE(rec.objects[0].lm_score);
  EXPECT_DOUBLE_EQ(*rec.objects[0].lm_score, 0.6);
}

TEST(Pipeline, KgSourcedCandidatesBypassLmGate) {
  PipelineFixture f(R"(["LM", "KG"])");
  f.backends.entailment = std::make_shared<kbp::testing::LambdaEntailment>(
      [](std::string_view, std::string_view) { return EntailmentLogits{1, 0, 0}; });
  const auto scored = score_pair({"Bob", "PlaysInstrument"}, f.ctx, 0.0);
  // drums has LM score 0.1 but is also a KG candidate.
  EXPECT_EQ(object_surfaces(decide(scored, 0.5, 0.5)), (std::vector<std::string>{"guitar", "drums", "harp"}));
}

TEST(Pipeline, PredictUsesRegistryThresholds) {
  PipelineFixture f(R"(["LM"])");
  const auto rec = predict_objects({"Bob", "PlaysInstrument"}, f.ctx);
  EXPECT_EQ(rec.system, "satori");
  EXPECT_EQ(object_surfaces(rec), (std::vector<std::string>{"guitar", "piano"}));
}

TEST(Pipeline, NerSourceSkipsMentionFilter) {
  PipelineFixture f(R"(["NER"])");
  const auto scored = score_pair({"Bob", "PlaysInstrument"}, f.ctx, 0.0);
  ASSERT_EQ(scored.candidates.size(), 1u);
  EXPECT_EQ(scored.candidates[0].candidate.surface, "drums");
}

TEST(Pipeline, MissingPremisesGiveEmptyPrediction) {
  PipelineFixture f(R"(["LM"])");
  f.cache.put("Ann instrument", {});
  const auto rec = predict_objects({"Ann", "PlaysInstrument"}, f.ctx);
  EXPECT_TRUE(rec.objects.empty());
  EXPECT_FALSE(rec.error);
}

TEST(Pipeline, RetrievalFailureIsPairError) {
  PipelineFixture f(R"(["LM"])");
  class Down final : public SearchBackend {
    std::vector<SearchHit> web_search(std::string_view, int) const override { throw TransportError("down"); }
  };
  f.backends.search = std::make_shared<Down>();
  const auto rec = predict_objects({"Nobody", "PlaysInstrument"}, f.ctx);
  EXPECT_TRUE(rec.objects.empty());
  ASSERT_TRUE(rec.error);
}

TEST(Pipeline, OfflineCacheMissIsMissingCache) {
  PipelineFixture f(R"(["LM"])");
  EXPECT_THROW(predict_objects({"Nobody", "PlaysInstrument"}, f.ctx), MissingCacheError);
}

TEST(Pipeline, MissingBackendIsConfigError) {
  PipelineFixture f(R"(["LM"])");
  f.backends.mask_fill.reset();
  EXPECT_THROW(score_pair({"Bob", "PlaysInstrument"}, f.ctx, 0.0), ConfigError);
}

TEST(Pipeline, CandidateSourceFailureIsPairError) {
  PipelineFixture f(R"(["LM"])");
  f.backends.mask_fill = std::make_shared<kbp::testing::ThrowingMaskFill>();
  const auto scored = score_pair({"Bob", "PlaysInstrument"}, f.ctx, 0.0);
  ASSERT_TRUE(scored.error);
  EXPECT_TRUE(scored.candidates.empty());
}

TEST(Pipeline, ParallelForVisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(257);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                 if (i == 5) throw Error("boom");
               }),
               Error);
}
