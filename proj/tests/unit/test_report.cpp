#include <random>

#include <gtest/gtest.h>

#include "t2vbench/report.hpp"
#include "../support/oracles.hpp"
#include "../support/test_util.hpp"

using namespace t2vbench;

namespace {

ScoreRecord rec(const std::string& model, const std::string& pid, Category c, double s) {
  return {model, pid, c, s, std::nullopt, std::nullopt, std::string(metric_for(c)), {}, std::nullopt};
}

std::vector<ScoreRecord> full_model(const std::string& model, double base) {
  std::vector<ScoreRecord> out;
  for (std::size_t i = 0; i < kAllCategories.size(); ++i)
    for (int k = 0; k < 2; ++k)
      out.push_back(rec(model, std::string(category_token(kAllCategories[i])) + "_" + std::to_string(k),
                        kAllCategories[i], base + 0.05 * static_cast<double>(i) + 0.01 * k));
  return out;
}

}  // namespace

TEST(Human, AggregateMeansAndWarnings) {
  const auto agg = aggregate_human({{"m", "p", "a1", 3}, {"m", "p", "a2", 4}, {"m", "p", "a3", 5}, {"m", "q", "a1", 5}});
  EXPECT_EQ(agg.means.at({"m", "p"}), 4.0);
  EXPECT_EQ(agg.means.at({"m", "q"}), 5.0);
  ASSERT_EQ(agg.warnings.size(), 1u);
  EXPECT_NE(agg.warnings[0].find("m/q"), std::string::npos);
  EXPECT_TRUE(aggregate_human({}).means.empty());
}

TEST(Human, CsvLoading) {
  testutil::TempDir dir;
  testutil::write_text(dir / "h.csv", "model_id,prompt_id,annotator_id,rating\nm,p,a,3\r\n\nm,p,b,5\n");
  const auto r = load_human_ratings(dir / "h.csv");
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[1].rating, 5);
  testutil::write_text(dir / "bad.csv", "model_id,prompt_id,annotator_id,rating\nm,p,a,6\n");
  try {
    load_human_ratings(dir / "bad.csv");
    FAIL();
  } catch (const schema_error& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos);
  }
  testutil::write_text(dir / "hdr.csv", "model,prompt,who,score\n");
  EXPECT_THROW(load_human_ratings(dir / "hdr.csv"), schema_error);
  testutil::write_text(dir / "nan.csv", "model_id,prompt_id,annotator_id,rating\nm,p,a,4.5\n");
  EXPECT_THROW(load_human_ratings(dir / "nan.csv"), schema_error);
  EXPECT_THROW(load_human_ratings(dir / "absent.csv"), io_error);
}

TEST(Correlate, PerfectAgreementAndOverlapRules) {
  std::vector<ScoreRecord> recs;
  std::map<RatingKey, double> human;
  for (int i = 0; i < 6; ++i) {
    recs.push_back(rec("m", "s" + std::to_string(i), Category::spatial, 0.1 * i));
    human[{"m", "s" + std::to_string(i)}] = 1.0 + 0.5 * i;
  }
  const auto r = correlate(recs, human, Category::spatial);
  EXPECT_EQ(r.tau, 1.0);
  EXPECT_EQ(r.rho, 1.0);
  EXPECT_EQ(r.n, 6);

  const std::map<RatingKey, double> one{{{"m", "s0"}, 3.0}};
  EXPECT_THROW(correlate(recs, one, Category::spatial), insufficient_overlap_error);
  EXPECT_THROW(correlate(recs, human, Category::motion), insufficient_overlap_error);
  recs.push_back(recs.front());
  EXPECT_THROW(correlate(recs, human, Category::spatial), duplicate_id_error);
}

TEST(Correlate, MatchesOracleOnMatchedPairs) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> s(0, 6), h(3, 15);
  std::vector<ScoreRecord> recs;
  std::map<RatingKey, double> human;
  std::vector<double> xs, ys;
  for (int i = 0; i < 60; ++i) {
    const std::string model = i % 2 ? "a" : "b";
    const std::string pid = "n" + std::to_string(i);
    const double score = s(rng) / 6.0;
    recs.push_back(rec(model, pid, Category::numeracy, score));
    if (i % 5 == 0) continue;  // unrated
    const double mean = h(rng) / 3.0;
    human[{model, pid}] = mean;
    xs.push_back(score);
    ys.push_back(mean);
  }
  const auto r = correlate(recs, human, Category::numeracy);
  EXPECT_EQ(r.n, static_cast<int>(xs.size()));
  EXPECT_NEAR(r.tau, oracle::kendall_tau_b(xs, ys), 1e-12);
  EXPECT_NEAR(r.rho, oracle::spearman_rho(xs, ys), 1e-12);
}

TEST(Correlate, AllRowsCarryNotesWhenUnavailable) {
  std::vector<ScoreRecord> recs{rec("m", "a", Category::action, 0.5), rec("m", "b", Category::action, 0.5)};
  const std::map<RatingKey, double> human{{{"m", "a"}, 2.0}, {{"m", "b"}, 4.0}};
  const auto rows = correlate_all(recs, human);
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[4].category, Category::action);
  EXPECT_EQ(rows[4].note, "degenerate input");
  EXPECT_EQ(rows[0].note, "insufficient overlap");
  EXPECT_EQ(correlation_csv(rows).substr(0, 33), "metric,category,n,tau,rho,note\ngr");
  EXPECT_NE(correlation_csv(rows).find("grid-llava,action,,,,degenerate input\n"), std::string::npos);
}

TEST(Leaderboard, ColumnOrderAndBlankCells) {
  auto recs = full_model("alpha", 0.5);
  recs.push_back(rec("beta", "motion_0", Category::motion, 0.25));
  const auto csv = leaderboard_csv(leaderboard(recs));
  EXPECT_EQ(csv,
            "model_id,consist-attr,dynamic-attr,spatial,motion,action,interaction,numeracy\n"
            "alpha,0.5050,0.5550,0.6050,0.6550,0.7050,0.7550,0.8050\n"
            "beta,,,,0.2500,,,\n");
}

TEST(Report, WritesDeterministicFiles) {
  testutil::TempDir a, b;
  auto recs = full_model("alpha", 0.2);
  auto more = full_model("beta", 0.3);
  recs.insert(recs.end(), more.begin(), more.end());
  std::map<RatingKey, double> human;
  for (const auto& r : recs) human[{r.model_id, r.prompt_id}] = 1 + std::fmod(r.score * 37, 4.0);
  const auto rows = correlate_all(recs, human);
  write_report(recs, rows, a.path(), {ReportFormat::csv, ReportFormat::json});
  std::reverse(recs.begin(), recs.end());
  const auto files = write_report(recs, rows, b.path(), {ReportFormat::csv, ReportFormat::json});
  EXPECT_EQ(files.written.size(), 5u);
  for (const char* f : {"records.jsonl", "leaderboard.csv", "leaderboard.json", "correlation.csv", "correlation.json"})
    EXPECT_EQ(testutil::read_text(a / f), testutil::read_text(b / f)) << f;
  EXPECT_EQ(load_records(a / "records.jsonl").size(), recs.size());
}

TEST(Report, UnwritableDirectoryIsIoError) {
  testutil::TempDir dir;
  testutil::write_text(dir / "blocker", "x");
  EXPECT_THROW(write_report({rec("m", "p", Category::spatial, 1)}, std::nullopt, dir / "blocker" / "out"), io_error);
  EXPECT_THROW(parse_formats("csv,xml"), schema_error);
  EXPECT_EQ(parse_formats("CSV, json").size(), 2u);
}
