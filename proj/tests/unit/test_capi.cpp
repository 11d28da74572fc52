#include <gtest/gtest.h>

#include <cstring>
#include <string>

#include <nlohmann/json.hpp>

#include "kbp/kbp.h"
#include "test_support.hpp"

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STREQ(kbp_version(), "0.1.0");
  EXPECT_STREQ(kbp_status_name(KBP_OK), "ok");
  EXPECT_STREQ(kbp_status_name(KBP_ERR_MISSING_CACHE), "missing cache");
  EXPECT_EQ(kbp_exit_code(KBP_OK), 0);
  EXPECT_EQ(kbp_exit_code(KBP_ERR_CONFIG), 2);
  EXPECT_EQ(kbp_exit_code(KBP_ERR_INVALID_ARGUMENT), 2);
  EXPECT_EQ(kbp_exit_code(KBP_ERR_MISSING_CACHE), 1);
  EXPECT_EQ(kbp_exit_code(KBP_ERR_BACKEND), 1);
}

TEST(CApi, EntailProbability) {
  double p = 0.0;
  ASSERT_EQ(kbp_entail_probability(1.0, 1.0, 3.0, &p), KBP_OK);
  EXPECT_DOUBLE_EQ(p, 0.5);
  EXPECT_EQ(kbp_entail_probability(1.0, 1.0, 0.0, nullptr), KBP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(kbp_entail_probability(NAN, 1.0, 0.0, &p), KBP_ERR_BACKEND);
  EXPECT_GT(std::strlen(kbp_last_error()), 0u);
}

TEST(CApi, RenderTemplate) {
  char* out = nullptr;
  ASSERT_EQ(kbp_render_template("{X} plays {Y}.", "Bob", "guitar", &out), KBP_OK);
  EXPECT_STREQ(out, "Bob plays guitar.");
  kbp_string_free(out);
  out = nullptr;
  EXPECT_EQ(kbp_render_template("{X} plays {Y}.", "Bob", nullptr, &out), KBP_ERR_CONFIG);
  EXPECT_EQ(out, nullptr);
  EXPECT_NE(std::string(kbp_last_error()).find("{Y}"), std::string::npos);
}

TEST(CApi, SessionOpenErrors) {
  kbp_session* s = nullptr;
  EXPECT_EQ(kbp_session_open("/nonexistent/config.json", &s), KBP_ERR_CONFIG);
  EXPECT_EQ(s, nullptr);
  EXPECT_EQ(kbp_session_open(nullptr, &s), KBP_ERR_INVALID_ARGUMENT);
  kbp::testing::TempDir dir;
  kbp::testing::spit(dir.path() / "broken.json", "{ not json");
  EXPECT_EQ(kbp_session_open((dir.path() / "broken.json").c_str(), &s), KBP_ERR_CONFIG);
}

TEST(CApi, PredictEvaluateThroughSession) {
  kbp::testing::TempDir dir;
  const auto config = kbp::testing::write_corpus_config(dir.path());
  kbp_session* s = nullptr;
  ASSERT_EQ(kbp_session_open(config.c_str(), &s), KBP_OK) << kbp_last_error();

  kbp_run_options o;
  kbp_run_options_init(&o);
  EXPECT_STREQ(o.system, "satori");
  std::size_t last_done = 0, last_total = 0;
  o.progress = [](size_t done, size_t total, void* user) {
    auto* p = static_cast<std::pair<std::size_t*, std::size_t*>*>(user);
    *p->first = done;
    *p->second = total;
  };
  std::pair<std::size_t*, std::size_t*> sink{&last_done, &last_total};
  o.progress_user = &sink;

  char* summary = nullptr;
  ASSERT_EQ(kbp_predict(s, &o, &summary), KBP_OK) << kbp_last_error();
  ASSERT_NE(summary, nullptr);
  EXPECT_NO_THROW(nlohmann::json::parse(summary));
  kbp_string_free(summary);
  EXPECT_EQ(last_total, 17u);
  EXPECT_EQ(last_done, 17u);

  ASSERT_EQ(kbp_evaluate(s, &o, nullptr), KBP_OK) << kbp_last_error();
  EXPECT_EQ(kbp::testing::slurp(dir.path() / "out" / "evaluation.satori.json"),
            kbp::testing::slurp(kbp::testing::golden_dir() / "evaluation.satori.json"));

  const char* relations[] = {"NoSuchRelation"};
  o.relations = relations;
  o.relation_count = 1;
  EXPECT_EQ(kbp_predict(s, &o, nullptr), KBP_ERR_CONFIG);
  EXPECT_EQ(kbp_predict(nullptr, &o, nullptr), KBP_ERR_INVALID_ARGUMENT);
  kbp_session_close(s);
}

TEST(CApi, MissingCacheStatus) {
  kbp::testing::TempDir dir;
  const auto config = kbp::testing::write_corpus_config(dir.path(), {{"premise_cache", (dir.path() / "none.jsonl").string()}});
  kbp_session* s = nullptr;
  ASSERT_EQ(kbp_session_open(config.c_str(), &s), KBP_OK);
  kbp_run_options o;
  kbp_run_options_init(&o);
  EXPECT_EQ(kbp_predict(s, &o, nullptr), KBP_ERR_MISSING_CACHE);
  EXPECT_NE(std::string(kbp_last_error()).find("fetch-premises"), std::string::npos);
  kbp_session_close(s);
}
