#include <gtest/gtest.h>

#include "kbp/text.hpp"
#include "kbp/traingen.hpp"
#include "test_support.hpp"

using namespace kbp;
using nlohmann::json;

namespace {

Registry music_registry() {
  return parse_registry(json::parse(R"({
    "relations": [{
      "name": "PersonInstrument", "domain_class": "Person", "range_classes": ["Instrument"],
      "t_search": "{X} instrument", "t_lm": "{X} plays {MASK}.", "t_h": "{X} plays {Y}",
      "t_qa": "What does {X} play?", "sources": ["LM", "KG"],
      "T_lm": 0.1, "T_e": 0.5, "T_qa": 0.3, "optional_relation": true
    }, {
      "name": "PersonCauseOfDeath", "domain_class": "Person", "range_classes": ["Cause"],
      "t_search": "{X} death", "t_lm": "{X} died of {MASK}.", "t_h": "{X} died of {Y}.",
      "t_qa": "What did {X} die of?", "sources": ["LM"],
      "T_lm": 0.1, "T_e": 0.5, "T_qa": 0.3, "optional_relation": true
    }]
  })"));
}

struct Corpus {
  Registry registry = music_registry();
  PremiseCache cache;
  TraingenInputs inputs() const { return {&registry, &cache, 3}; }

  void premises(const std::string& query, std::initializer_list<const char*> texts) {
    std::vector<Premise> ps;
    int rank = 1;
    for (const char* t : texts) ps.push_back({t, rank++, "", "", query, ""});
    cache.put(query, ps);
  }
};

}  // namespace

TEST(TraingenMlm, OneInstancePerAliasSet) {
  const auto reg = music_registry();
  TraingenStats stats;
  const auto out = gen_mlm({{{"Niue", "PersonInstrument"}, {{"Niuean", "Niue language"}, {"English"}}},
                            {{"Nobody", "PersonInstrument"}, {}}},
                           reg, &stats);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].prompt, "Niue plays {MASK}.");
  EXPECT_EQ(out[0].target, "Niuean");
  EXPECT_EQ(out[1].target, "English");
  EXPECT_EQ(instances_to_jsonl(out), "{\"prompt\":\"Niue plays {MASK}.\",\"target\":\"Niuean\"}\n"
                                     "{\"prompt\":\"Niue plays {MASK}.\",\"target\":\"English\"}\n");
}

TEST(TraingenEntailment, PositiveAndLmNegative) {
  Corpus c;
  c.premises("John Lennon instrument", {"John Lennon was a singer.", "John Lennon plays guitar while Ringo plays drums."});
  kbp::testing::StubMaskFill mf;
  mf.table["John Lennon plays {MASK}."] = {{"guitar", 0.5}, {"drums", 0.3}, {"piano", 0.2}};
  Stoplist stop;
  TraingenStats stats;
  const auto out = gen_entailment({{{"John Lennon", "PersonInstrument"}, {{"guitar"}}}}, c.inputs(), {&mf, &stop, 10},
                                  &stats);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].label, EntailmentLabel::Entailment);
  EXPECT_EQ(out[0].premise, "John Lennon plays guitar while Ringo plays drums.");
  EXPECT_EQ(out[0].hypothesis, "John Lennon plays guitar");
  EXPECT_EQ(out[1].label, EntailmentLabel::Contradiction);
  EXPECT_EQ(out[1].hypothesis, "John Lennon plays drums");
  EXPECT_EQ(out[1].premise, "John Lennon plays guitar while Ringo plays drums.");
  EXPECT_EQ(stats.positives, 1u);
  EXPECT_EQ(stats.negatives_from_lm, 1u);
  EXPECT_EQ(to_json(out[1]).dump(),
            R"({"hypothesis":"John Lennon plays drums","label":"CONTRADICTION","premise":"John Lennon plays guitar while Ringo plays drums."})");
}

TEST(TraingenEntailment, NoCooccurrenceMeansNoPositive) {
  Corpus c;
  c.premises("Ann instrument", {"Ann is a painter.", "The violin is old."});
  TraingenStats stats;
  const auto out = gen_entailment({{{"Ann", "PersonInstrument"}, {{"violin"}}}}, c.inputs(), {}, &stats);
  EXPECT_TRUE(out.empty());
  EXPECT_EQ(stats.skipped_positives, 1u);
}

TEST(TraingenEntailment, FallsBackToOtherSubjectsGold) {
  Corpus c;
  c.premises("Ann instrument", {"Ann plays violin and knows a harpist.", "Ann once held a harp."});
  c.premises("Bo instrument", {"Bo plays harp."});
  TraingenStats stats;
  const auto out = gen_entailment({{{"Ann", "PersonInstrument"}, {{"violin"}}}, {{"Bo", "PersonInstrument"}, {{"harp"}, {"oboe"}}}},
                                  c.inputs(), {}, &stats);
  // Ann: violin positive, harp negative from rank 2 (mentioned). Bo: harp
  // positive, violin negative from the rank-1 premise (mentioned nowhere).
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out[1].hypothesis, "Ann plays harp");
  EXPECT_EQ(out[1].premise, "Ann once held a harp.");
  EXPECT_EQ(out[3].hypothesis, "Bo plays violin");
  EXPECT_EQ(out[3].premise, "Bo plays harp.");
  EXPECT_EQ(stats.negatives_from_gold, 2u);
  EXPECT_LE(stats.negatives, stats.positives);
}

TEST(TraingenQa, EmptyGoldUsesFirstPassage) {
  Corpus c;
  c.premises("Ann instrument", {"First passage.", "Second passage."});
  const auto out = gen_qa({{{"Ann", "PersonInstrument"}, {}}}, c.inputs());
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].context, "First passage.");
  EXPECT_EQ(out[0].answer, "");
  EXPECT_EQ(out[0].answer_start, -1);
  EXPECT_EQ(to_json(out[0])["answers"].dump(), R"({"answer_start":[],"text":[]})");
  EXPECT_EQ(out[0].id, "PersonInstrument/Ann");
}

TEST(TraingenQa, MultiObjectSpanWithinGap) {
  Corpus c;
  c.premises("Bob instrument", {"Bob plays guitar, keyboard and harmonica on tour."});
  const auto out = gen_qa({{{"Bob", "PersonInstrument"}, {{"guitar"}, {"harmonica"}}}}, c.inputs());
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].answer, "guitar, keyboard and harmonica");
  EXPECT_EQ(out[0].answer_start, 10);
  EXPECT_EQ(to_json(out[0])["answers"].dump(), R"({"answer_start":[10],"text":["guitar, keyboard and harmonica"]})");
}

TEST(TraingenQa, ObjectsTooFarApartGiveSingleObjectWindow) {
  Corpus c;
  c.premises("Bob instrument",
             {"Bob plays guitar and also, on rare days, harmonica.", "Nothing here.", "guitar and harmonica together"});
  // Rank 1 has four tokens between the objects; rank 3 covers both.
  auto out = gen_qa({{{"Bob", "PersonInstrument"}, {{"guitar"}, {"harmonica"}}}}, c.inputs());
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].context, "guitar and harmonica together");
  EXPECT_EQ(out[0].answer, "guitar and harmonica");

  Corpus d;
  d.premises("Bob instrument", {"Nothing.", "Bob plays guitar a b c d harmonica.", "harmonica only"});
  out = gen_qa({{{"Bob", "PersonInstrument"}, {{"guitar"}, {"harmonica"}}}}, d.inputs());
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].context, "Bob plays guitar a b c d harmonica.");
  EXPECT_EQ(out[0].answer, "guitar");
}

TEST(TraingenQa, ThreeTokenGapIsAllowed) {
  const auto w = best_answer_window("guitar a b c harmonica", {{"guitar"}, {"harmonica"}});
  EXPECT_EQ(w.distinct, 2u);
  EXPECT_EQ(w.span, (text::Span{0, 22}));
  const auto far = best_answer_window("guitar a b c d harmonica", {{"guitar"}, {"harmonica"}});
  EXPECT_EQ(far.distinct, 1u);
  EXPECT_EQ(far.span, (text::Span{0, 6}));
}

TEST(TraingenQa, AliasesCountOnceAndPassagesWithoutObjectsSkip) {
  const auto w = best_answer_window("Flemish or Dutch and French", {{"Dutch", "Flemish"}, {"French"}});
  EXPECT_EQ(w.distinct, 2u);
  Corpus c;
  c.premises("Ann instrument", {"No instruments mentioned."});
  TraingenStats stats;
  EXPECT_TRUE(gen_qa({{{"Ann", "PersonInstrument"}, {{"oboe"}}}}, c.inputs(), &stats).empty());
  EXPECT_EQ(stats.skipped_pairs, 1u);
}

TEST(TraingenRe, MentionedObjectsBecomeTriples) {
  Corpus c;
  c.premises("Bob instrument", {"Bob sings.", "Bob plays guitar and harmonica.", "Bob plays piano."});
  c.premises("Ann death", {"Ann died of pneumonia."});
  const RelationMap map({{"PersonInstrument", "instrument"}, {"PersonCauseOfDeath", std::nullopt}});
  TraingenStats stats;
  const auto out = gen_re({{{"Bob", "PersonInstrument"}, {{"guitar"}, {"harmonica"}, {"piano"}}},
                           {{"Ann", "PersonCauseOfDeath"}, {{"pneumonia"}}}},
                          c.inputs(), map, &stats);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].text, "Bob plays guitar and harmonica.");
  ASSERT_EQ(out[0].triples.size(), 2u);
  EXPECT_EQ(out[0].triples[1], (Triple{"Bob", "instrument", "harmonica"}));
  EXPECT_EQ(stats.unmapped_pairs, 1u);
}

TEST(Traingen, OutputSortedByRelationThenSubject) {
  const auto reg = music_registry();
  const auto out = gen_mlm({{{"Zed", "PersonInstrument"}, {{"a"}}},
                            {{"Amy", "PersonInstrument"}, {{"b"}}},
                            {{"Bo", "PersonCauseOfDeath"}, {{"c"}}}},
                           reg);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].target, "c");
  EXPECT_EQ(out[1].target, "b");
  EXPECT_EQ(out[2].target, "a");
}
