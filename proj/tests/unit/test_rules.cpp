#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "support/fixture.hpp"
#include "xrank/error.hpp"
#include "xrank/rules.hpp"

using namespace xrank;
using namespace xrank::rules;

namespace {

HumanLabelRecord rec(const std::string& id, std::vector<Label> labels, int rating = 5) {
  return HumanLabelRecord::make(id, std::move(labels), rating);
}

const Rule* find_rule(const std::vector<Rule>& rules, Label a, Label b) {
  for (auto& r : rules) {
    if (r.antecedent == a && r.consequent == b) return &r;
  }
  return nullptr;
}

}  // namespace

TEST(Labels, NamesRoundTrip) {
  for (auto l : kAllLabels) EXPECT_EQ(parse_label(to_string(l)), l);
  EXPECT_FALSE(parse_label("color").has_value());
}

TEST(HumanLabelRecord, Invariants) {
  const auto r = rec("q", {Label::Details, Label::Action, Label::Details});
  EXPECT_EQ(r.labels, (std::vector<Label>{Label::Action, Label::Details}));
  EXPECT_TRUE(r.has(Label::Action));
  EXPECT_FALSE(r.has(Label::Size));
  EXPECT_THROW(rec("q", {}), Error);
  EXPECT_THROW(rec("q", {Label::SuccessfulAlternative, Label::Size}), Error);
  EXPECT_THROW(rec("q", {Label::Size}, 0), Error);
  EXPECT_THROW(rec("q", {Label::Size}, 11), Error);
}

TEST(LabelDistribution, OneInFourHasDetails) {
  const std::vector<HumanLabelRecord> rs = {rec("a", {Label::Details}, 2), rec("b", {Label::Action}, 4),
                                            rec("c", {Label::Size}, 6), rec("d", {Label::ObjectClass}, 8)};
  const auto d = label_distribution(rs);
  EXPECT_DOUBLE_EQ(d.pct.at(Label::Details), 25.0);
  EXPECT_DOUBLE_EQ(d.mean_rating, 5.0);
  EXPECT_EQ(d.pct.size(), kAllLabels.size());
}

TEST(LabelDistribution, AllSuccessfulAlternatives) {
  const std::vector<HumanLabelRecord> rs = {rec("a", {Label::SuccessfulAlternative}),
                                            rec("b", {Label::SuccessfulAlternative})};
  const auto d = label_distribution(rs);
  for (auto l : kAllLabels) EXPECT_DOUBLE_EQ(d.pct.at(l), l == Label::SuccessfulAlternative ? 100.0 : 0.0);
  EXPECT_THROW(label_distribution(std::vector<HumanLabelRecord>{}), Error);
}

TEST(MineRules, ActionImpliesDetails) {
  const std::vector<HumanLabelRecord> rs = {rec("a", {Label::Action, Label::Details}),
                                            rec("b", {Label::Action, Label::Details}), rec("c", {Label::Action})};
  const auto rules = mine_rules(rs, 10);
  const auto* r = find_rule(rules, Label::Action, Label::Details);
  ASSERT_NE(r, nullptr);
  EXPECT_NEAR(r->pct, 66.7, 0.05);
  EXPECT_EQ(r->support, 2u);
  EXPECT_EQ(find_rule(rules, Label::Size, Label::Details), nullptr);
  EXPECT_DOUBLE_EQ(find_rule(rules, Label::Details, Label::Action)->pct, 100.0);
}

TEST(MineRules, SingleRecordBothDirections) {
  const std::vector<HumanLabelRecord> rs = {rec("a", {Label::ObjectColor, Label::ObjectEnumeration})};
  const auto rules = mine_rules(rs, 50);
  ASSERT_EQ(rules.size(), 2u);
  EXPECT_DOUBLE_EQ(find_rule(rules, Label::ObjectColor, Label::ObjectEnumeration)->pct, 100.0);
  EXPECT_DOUBLE_EQ(find_rule(rules, Label::ObjectEnumeration, Label::ObjectColor)->pct, 100.0);
}

TEST(MineRules, SortedThresholdedAndStableUnderReordering) {
  std::mt19937_64 rng(4);
  std::vector<HumanLabelRecord> rs;
  for (int i = 0; i < 60; ++i) {
    std::vector<Label> labels;
    for (std::size_t l = 0; l + 1 < kAllLabels.size(); ++l) {
      if (rng() % 3 == 0) labels.push_back(kAllLabels[l]);
    }
    if (labels.empty()) labels.push_back(Label::SuccessfulAlternative);
    rs.push_back(rec("q" + std::to_string(i), labels, 1 + static_cast<int>(rng() % 10)));
  }
  const auto rules = mine_rules(rs, 30);
  for (std::size_t i = 0; i < rules.size(); ++i) {
    EXPECT_GE(rules[i].pct, 30.0);
    EXPECT_NE(rules[i].antecedent, rules[i].consequent);
    if (i > 0) EXPECT_GE(rules[i - 1].pct, rules[i].pct);
  }
  auto shuffled = rs;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  EXPECT_EQ(mine_rules(shuffled, 30), rules);
  EXPECT_THROW(mine_rules(rs, 0), Error);
  EXPECT_THROW(mine_rules(rs, 101), Error);
}

TEST(LabelsCsv, ReadWriteRoundTripAndErrors) {
  const auto records = read_labels(testdata::fixture_dir() / "labels.csv");
  ASSERT_EQ(records.size(), 12u);
  std::stringstream buf;
  write_labels(buf, records);
  const auto back = read_labels(buf);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].query_id, records[i].query_id);
    EXPECT_EQ(back[i].labels, records[i].labels);
    EXPECT_EQ(back[i].rating, records[i].rating);
  }
  std::istringstream bad_label("q1,colour,5\n");
  EXPECT_THROW(read_labels(bad_label), ParseError);
  std::istringstream bad_rating("q1,size,eleven\n");
  EXPECT_THROW(read_labels(bad_rating), ParseError);
}
