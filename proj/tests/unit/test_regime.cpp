#include <gtest/gtest.h>

#include <set>

#include "kbp/errors.hpp"
#include "kbp/regime.hpp"
#include "kbp/report.hpp"
#include "test_support.hpp"

using namespace kbp;

namespace {

std::vector<GoldRecord> dataset(int per_relation) {
  std::vector<GoldRecord> out;
  for (const char* rel : {"R1", "R2"})
    for (int i = 0; i < per_relation; ++i) out.push_back({{"s" + std::to_string(i), rel}, {{"o"}}});
  return out;
}

}  // namespace

TEST(Regime, SampleSizeRoundsUp) {
  EXPECT_EQ(sample_size(0.05, 100), 5u);
  EXPECT_EQ(sample_size(0.05, 30), 2u);
  EXPECT_EQ(sample_size(0.1, 10), 1u);
  EXPECT_EQ(sample_size(1.0, 7), 7u);
  EXPECT_EQ(sample_size(0.3, 10), 3u);
}

TEST(Regime, SamplesPerRelationDeterministically) {
  const auto data = dataset(40);
  const auto a = sample_per_relation(data, 0.1, 3);
  const auto b = sample_per_relation(data, 0.1, 3);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.size(), 8u);
  std::map<std::string, int> per;
  for (const auto& r : a) ++per[r.pair.relation];
  EXPECT_EQ(per["R1"], 4);
  EXPECT_EQ(per["R2"], 4);
  // Returned in dataset order.
  for (std::size_t i = 1; i < a.size(); ++i) {
    const auto pos = [&](const GoldRecord& r) { return std::find(data.begin(), data.end(), r) - data.begin(); };
    EXPECT_LT(pos(a[i - 1]), pos(a[i]));
  }
  EXPECT_NE(sample_per_relation(data, 0.1, 4), a);
}

TEST(Regime, RejectsBadSpecs) {
  EXPECT_THROW(validate_regime({0.0, 3, 0}), ConfigError);
  EXPECT_THROW(validate_regime({1.5, 3, 0}), ConfigError);
  EXPECT_THROW(validate_regime({0.5, 0, 0}), ConfigError);
  EXPECT_NO_THROW(validate_regime({1.0, 1, 0}));
}

TEST(Regime, RunsEveryRepetitionWithShiftedSeed) {
  const auto data = dataset(20);
  std::vector<int> reps;
  const auto result = run_regime(data, {0.25, 3, 10}, [&](const std::vector<GoldRecord>& sample, int rep) {
    reps.push_back(rep);
    EXPECT_EQ(sample, sample_per_relation(data, 0.25, 10 + static_cast<std::uint64_t>(rep)));
    EvalReport r;
    r.per_relation["R1"] = {{rep / 10.0, 0.5, 0.5}, 5};
    r.overall = {rep / 10.0, 0.5, 0.5};
    return r;
  });
  EXPECT_EQ(reps, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(result.sample_sizes, (std::vector<std::size_t>{10, 10, 10}));
  EXPECT_DOUBLE_EQ(result.mean.overall.precision, 0.1);
}

TEST(Report, JsonRoundTrip) {
  EvalReport r;
  r.per_relation["R"] = {{0.5, 0.25, 1.0 / 3.0}, 4};
  r.overall = {0.5, 0.25, 1.0 / 3.0};
  r.pooled = MetricTriple{0.1, 0.2, 0.3};
  const auto j = report_to_json(r);
  const auto back = report_from_json(j);
  EXPECT_EQ(report_to_json(back).dump(), j.dump());
  EXPECT_EQ(back.per_relation.at("R").pairs, 4u);
}

TEST(Report, TableAndCsv) {
  EvalReport r;
  r.per_relation["Alpha"] = {{0.5, 0.25, 1.0 / 3.0}, 4};
  r.per_relation["Beta"] = {{1.0, 1.0, 1.0}, 2};
  r.overall = {0.75, 0.625, 2.0 / 3.0};
  const auto table = report_to_table(r, "demo");
  EXPECT_NE(table.find("demo"), std::string::npos);
  EXPECT_NE(table.find("Alpha"), std::string::npos);
  EXPECT_NE(table.find("33.3"), std::string::npos);
  EXPECT_NE(table.find("62.5"), std::string::npos);
  const auto csv = report_to_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "relation,pairs,precision,recall,f1");
  EXPECT_NE(csv.find("Beta,2,"), std::string::npos);
}

TEST(Report, GoldenTableMatchesGoldenJson) {
  const auto report = report_from_json(nlohmann::json::parse(kbp::testing::slurp(kbp::testing::golden_dir() / "evaluation.satori.json")));
  EXPECT_EQ(report_to_table(report, "satori"), kbp::testing::slurp(kbp::testing::golden_dir() / "evaluation.satori.txt"));
}
