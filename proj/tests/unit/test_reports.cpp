#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "xrank/reports.hpp"

using namespace xrank;
using json = nlohmann::json;

namespace {

xmetrics::FailureExplanation sample(bool with_optionals) {
  xmetrics::FailureExplanation e;
  e.failure = FailureRecord::make("q1", "g", "r", 4);
  e.ca = 0.25;
  e.ce = 3;
  e.sd_binary_count = 1;
  e.sd_match_count = 3;
  e.sd_optimistic = 1.5;
  if (with_optionals) {
    e.ncs = 0.1388888888888889;
    e.ncs_pairs = {{SynsetId("hill.n.01"), SynsetId("grassland.n.01"), 1.0 / 9}};
    e.sd_avg = 1.0 / 3;
  }
  return e;
}

}  // namespace

TEST(Reports, ExplanationsRoundTripIncludingNulls) {
  const std::vector<xmetrics::FailureExplanation> es = {sample(true), sample(false)};
  std::stringstream buf;
  reports::write_explanations(buf, es);
  const std::string text = buf.str();
  EXPECT_NE(text.find("\"ncs\":null"), std::string::npos);
  const auto back = reports::read_explanations(buf);
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].failure, es[i].failure);
    EXPECT_EQ(back[i].ca, es[i].ca);
    EXPECT_EQ(back[i].ncs, es[i].ncs);
    EXPECT_EQ(back[i].ncs_pairs, es[i].ncs_pairs);
    EXPECT_EQ(back[i].ce, es[i].ce);
    EXPECT_EQ(back[i].sd_avg, es[i].sd_avg);
    EXPECT_EQ(back[i].sd_optimistic, es[i].sd_optimistic);
  }
}

TEST(Reports, GlobalReportColumnNames) {
  xmetrics::GlobalReport r;
  r.num_failures = 2;
  r.avg_ca = 0.5;
  r.avg_ncs = 0.2;
  std::stringstream buf;
  reports::write_global_report(buf, r);
  const auto j = json::parse(buf.str());
  for (auto key : {"ca", "ncs", "ce", "sd", "obj_hit", "obj_miss", "matched_synset_pct", "avg_enum_disagreement_pct"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_TRUE(j["sd"].is_null());
  EXPECT_EQ(j["metadata"]["sd_variant"], "binary_average");
}

TEST(Reports, RankSummaryAndCsv) {
  ranker::RankSummary s;
  s.num_queries = 2;
  s.recall_at = {{1, 0.5}, {2, 1.0}};
  s.mrr_at = {{1, 0.5}, {2, 0.75}};
  s.median_rank = 1;
  s.fail_fraction = 0.5;
  s.failures = {FailureRecord::make("q2", "g", "r", 2)};
  std::stringstream buf;
  reports::write_rank_summary(buf, s);
  const auto j = json::parse(buf.str());
  EXPECT_EQ(j["recall_at"]["2"], 1.0);
  EXPECT_EQ(j["num_failures"], 1);

  ranker::RankResult r;
  r.query_id = "q1";
  r.gt_rank = 3;
  r.top1_id = "img";
  std::stringstream csv;
  reports::write_rank_csv(csv, std::vector<ranker::RankResult>{r});
  EXPECT_EQ(csv.str(), "query_id,gt_rank,top1_id\nq1,3,img\n");
}

TEST(Reports, PerturbedRoundTrip) {
  const std::vector<adversarial::PerturbedQuery> ps = {
      {"q1", "a large dog", "a tiny dog", {{1, "large", "tiny"}}},
      {"q2", "a \"red\" car", "a \"blue\" car", {{1, "red", "blue"}}}};
  std::stringstream buf;
  reports::write_perturbed(buf, ps);
  EXPECT_EQ(reports::read_perturbed(buf), ps);
}

TEST(Reports, RerankDeltaAndRules) {
  std::stringstream buf;
  reports::write_rerank_delta(buf, {3, 100.0 / 3, 100.0 / 3, 100.0 / 3}, "antonym");
  const auto j = json::parse(buf.str());
  EXPECT_EQ(j["kind"], "antonym");
  EXPECT_EQ(j["adv_queries"], 3);

  rules::LabelDistribution d;
  d.pct = {{rules::Label::Action, 50.0}};
  d.mean_rating = 7;
  d.num_records = 2;
  const std::vector<rules::Rule> mined = {{rules::Label::Action, rules::Label::Details, 100.0, 1}};
  std::stringstream rb;
  reports::write_rules(rb, d, mined, 10);
  const auto rj = json::parse(rb.str());
  EXPECT_EQ(rj["rules"][0]["antecedent"], "action");
  EXPECT_EQ(rj["rules"][0]["consequent"], "details");
}
