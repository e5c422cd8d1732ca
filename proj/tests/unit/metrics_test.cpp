#include <gtest/gtest.h>

#include "generators.hpp"
#include "mann_whitney.hpp"
#include "sentinel/metrics.hpp"
#include "sentinel/trainer.hpp"

namespace sentinel {
namespace {

using V = std::vector<int>;

TEST(Confusion, CountsTrueByPredicted) {
  const auto cm = confusion(V{0, 0, 1, 2, 2}, V{0, 1, 1, 2, 0});
  EXPECT_EQ(cm.counts[0][0], 1u);
  EXPECT_EQ(cm.counts[0][1], 1u);
  EXPECT_EQ(cm.counts[2][0], 1u);
  EXPECT_EQ(cm.total(), 5u);
  EXPECT_EQ(cm.trace(), 3u);
  EXPECT_EQ(cm.true_count(2), 2u);
  EXPECT_EQ(cm.predicted_count(0), 2u);
  EXPECT_THROW(confusion(V{0}, V{}), std::invalid_argument);
  EXPECT_THROW(confusion(V{}, V{}), std::invalid_argument);
  EXPECT_THROW(confusion(V{3}, V{0}), std::invalid_argument);
}

TEST(Report, HandComputed) {
  // true 0,0,1,1,2,2 ; predicted 0,1,1,1,2,0
  const auto r = report(confusion(V{0, 0, 1, 1, 2, 2}, V{0, 1, 1, 1, 2, 0}));
  EXPECT_DOUBLE_EQ(r.accuracy, 4.0 / 6);
  EXPECT_DOUBLE_EQ(r.per_class[0].precision, 0.5);
  EXPECT_DOUBLE_EQ(r.per_class[1].precision, 2.0 / 3);
  EXPECT_DOUBLE_EQ(r.per_class[1].recall, 1.0);
  EXPECT_DOUBLE_EQ(r.per_class[1].f1, 0.8);
  EXPECT_DOUBLE_EQ(r.macro_precision, (0.5 + 2.0 / 3 + 1.0) / 3);
  EXPECT_DOUBLE_EQ(r.macro_recall, (0.5 + 1.0 + 0.5) / 3);
}

TEST(Report, AbsentClassIsExcludedAndZeroDenominatorsAreZero) {
  // Class 2 never occurs; class 1 is never predicted.
  const auto r = report(confusion(V{0, 0, 1}, V{0, 0, 0}));
  EXPECT_EQ(r.macro_classes, (V{0, 1}));
  EXPECT_DOUBLE_EQ(r.per_class[1].precision, 0.0);
  EXPECT_DOUBLE_EQ(r.per_class[1].f1, 0.0);
  EXPECT_DOUBLE_EQ(r.macro_recall, 0.5);
  EXPECT_DOUBLE_EQ(r.macro_precision, (2.0 / 3 + 0.0) / 2);
}

TEST(Report, PerfectPredictionsScoreOne) {
  const auto r = report(confusion(V{0, 1, 2, 2}, V{0, 1, 2, 2}));
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.macro_precision, 1.0);
  EXPECT_EQ(r.macro_recall, 1.0);
  EXPECT_EQ(r.macro_f1, 1.0);
}

TEST(Roc, PerfectSeparation) {
  const auto c = roc_binary(std::vector<double>{0.9, 0.8, 0.2, 0.1}, V{1, 1, 0, 0});
  EXPECT_EQ(c.auc, 1.0);
  EXPECT_EQ(c.points.front(), (RocPoint{0, 0}));
  EXPECT_EQ(c.points.back(), (RocPoint{1, 1}));
}

TEST(Roc, ConstantScoresGiveDiagonal) {
  const auto c = roc_binary(std::vector<double>{0.5, 0.5, 0.5}, V{1, 0, 0});
  ASSERT_EQ(c.points.size(), 2u);
  EXPECT_DOUBLE_EQ(c.auc, 0.5);
}

TEST(Roc, SingleClassIsUndefined) {
  EXPECT_THROW(roc_binary(std::vector<double>{0.1, 0.2}, V{1, 1}), std::invalid_argument);
  EXPECT_THROW(roc_binary(std::vector<double>{0.1}, V{1, 0}), std::invalid_argument);
}

TEST(Roc, AucMatchesPairwiseProbability) {
  testing::Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 40;
    std::vector<double> scores(n);
    V labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng() % 6) / 5.0;
      labels[i] = static_cast<int>(rng() % 2);
    }
    labels[0] = 0;
    labels[1] = 1;
    const auto c = roc_binary(scores, labels);
    EXPECT_NEAR(c.auc, oracle::pairwise_auc(scores, labels), 1e-12);
    for (std::size_t k = 1; k < c.points.size(); ++k) {
      EXPECT_GE(c.points[k].fpr, c.points[k - 1].fpr);
      EXPECT_GE(c.points[k].tpr, c.points[k - 1].tpr);
    }
    // Strictly increasing transform of the scores leaves the curve unchanged.
    std::vector<double> shifted(n);
    std::transform(scores.begin(), scores.end(), shifted.begin(), [](double s) { return 3 * s + 1; });
    EXPECT_EQ(roc_binary(shifted, labels).points, c.points);
  }
}

TEST(Roc, TrapezoidArea) {
  const std::vector<RocPoint> pts{{0, 0}, {0.5, 0.5}, {0.5, 1}, {1, 1}};
  EXPECT_DOUBLE_EQ(trapezoid_area(pts), 0.25 / 2 + 0.5);
}

TEST(OneVsRest, AbsentClassGetsNote) {
  const V labels{0, 1, 0, 1};
  const std::vector<ClassDistribution> scores{{0.9, 0.1, 0}, {0.2, 0.8, 0}, {0.7, 0.3, 0}, {0.4, 0.6, 0}};
  const auto rocs = one_vs_rest_rocs(labels, scores);
  ASSERT_TRUE(rocs[0].curve);
  EXPECT_EQ(rocs[0].curve->auc, 1.0);
  EXPECT_FALSE(rocs[2].curve);
  EXPECT_FALSE(rocs[2].note.empty());
  const auto csv = roc_csv(rocs);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "class,fpr,tpr");
  EXPECT_TRUE(to_json(rocs)[2]["auc"].is_null());
}

TEST(OneVsRest, HoldoutScoresOnlyTheTail) {
  EXPECT_EQ(holdout_train_size(1), 1u);
  EXPECT_EQ(holdout_train_size(4), 3u);
  EXPECT_EQ(holdout_train_size(60), 45u);
  const auto data = to_dataset(testing::labeled(testing::synthetic_learnable_journal(), HistoryMode::FullHistory));
  const auto rocs = one_vs_rest_rocs(data, {5, 2, 1}, EvalScheme::HoldoutSplit);
  for (const auto& r : rocs) {
    if (r.curve) {
      EXPECT_GE(r.curve->auc, 0.0);
      EXPECT_LE(r.curve->auc, 1.0);
    }
  }
  const auto iterative = one_vs_rest_rocs(data, {5, 2, 1}, EvalScheme::IterativeScores);
  for (const auto& r : iterative) EXPECT_TRUE(r.curve) << r.note;
}

TEST(Scheme, Names) {
  EXPECT_EQ(parse_eval_scheme(to_string(EvalScheme::HoldoutSplit)), EvalScheme::HoldoutSplit);
  EXPECT_THROW(parse_eval_scheme("bogus"), std::invalid_argument);
}

TEST(Render, MentionsEveryClass) {
  const auto cm = confusion(V{0, 1, 2}, V{0, 1, 2});
  const auto text = render_report(report(cm), cm);
  EXPECT_NE(text.find("accuracy"), std::string::npos);
}

}  // namespace
}  // namespace sentinel
