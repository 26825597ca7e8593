#include <gtest/gtest.h>

#include <vector>

#include "nirspec/metrics.hpp"
#include "nirspec/rng.hpp"

using namespace nirspec;

TEST(Confusion, HandCountedExample) {
  const std::vector<int> y_true = {1, 1, 1, 1, 0, 0, 0, 0, 0, 0};
  const std::vector<int> y_pred = {1, 1, 1, 0, 0, 0, 0, 0, 1, 1};
  const ConfusionCounts c = confusion(y_true, y_pred);
  EXPECT_EQ(c.tp, 3);
  EXPECT_EQ(c.fn, 1);
  EXPECT_EQ(c.tn, 4);
  EXPECT_EQ(c.fp, 2);
}

TEST(Confusion, PerfectPrediction) {
  const std::vector<int> y = {1, 0, 1, 0};
  const ConfusionCounts c = confusion(y, y);
  EXPECT_EQ(c.fp, 0);
  EXPECT_EQ(c.fn, 0);
}

TEST(Confusion, InvertedPrediction) {
  const std::vector<int> y_true = {1, 0, 1, 0};
  const std::vector<int> y_pred = {0, 1, 0, 1};
  const ConfusionCounts c = confusion(y_true, y_pred);
  EXPECT_EQ(c.tp, 0);
  EXPECT_EQ(c.tn, 0);
}

TEST(Confusion, LengthMismatchThrows) {
  const std::vector<int> a = {1, 0};
  const std::vector<int> b = {1};
  EXPECT_THROW(confusion(a, b), InvalidConfigError);
}

TEST(Metrics, HandComputedExample) {
  const MetricSet m = metrics({3, 4, 2, 1});  // tp tn fp fn
  EXPECT_NEAR(m.acc, 0.7, 1e-12);
  EXPECT_NEAR(m.recall, 0.75, 1e-12);
  EXPECT_NEAR(m.precision, 0.6, 1e-12);
  EXPECT_NEAR(m.specificity, 4.0 / 6.0, 1e-12);
  EXPECT_NEAR(m.bacc, 0.5 * (0.75 + 4.0 / 6.0), 1e-12);
  EXPECT_NEAR(m.bacc, 0.708333333333, 1e-9);
  EXPECT_NEAR(m.f_score, 2.0 * 0.75 * 0.6 / (0.75 + 0.6), 1e-12);
  EXPECT_NEAR(m.f_score, 0.666667, 1e-6);
  EXPECT_FALSE(m.degenerate_ratio);
}

TEST(Metrics, AllCorrectGivesOnes) {
  const MetricSet m = metrics({5, 7, 0, 0});
  EXPECT_DOUBLE_EQ(m.acc, 1.0);
  EXPECT_DOUBLE_EQ(m.bacc, 1.0);
  EXPECT_DOUBLE_EQ(m.recall, 1.0);
  EXPECT_DOUBLE_EQ(m.precision, 1.0);
  EXPECT_DOUBLE_EQ(m.f_score, 1.0);
}

TEST(Metrics, ZeroOverZeroResolvesToZeroWithWarning) {
  const MetricSet m = metrics({0, 4, 0, 2});  // no positive predictions
  EXPECT_DOUBLE_EQ(m.precision, 0.0);
  EXPECT_DOUBLE_EQ(m.f_score, 0.0);
  EXPECT_TRUE(m.degenerate_ratio);
}

TEST(Metrics, ScaleConsistency) {
  Rng rng(RngSeed{5});
  for (int trial = 0; trial < 1000; ++trial) {
    ConfusionCounts c{static_cast<long>(rng.below(50)), static_cast<long>(rng.below(50)),
                      static_cast<long>(rng.below(50)), static_cast<long>(rng.below(50))};
    if (c.total() == 0) continue;
    const long k = 1 + static_cast<long>(rng.below(9));
    const MetricSet a = metrics(c);
    const MetricSet b = metrics({c.tp * k, c.tn * k, c.fp * k, c.fn * k});
    ASSERT_NEAR(a.acc, b.acc, 1e-12);
    ASSERT_NEAR(a.bacc, b.bacc, 1e-12);
    ASSERT_NEAR(a.recall, b.recall, 1e-12);
    ASSERT_NEAR(a.precision, b.precision, 1e-12);
    ASSERT_NEAR(a.f_score, b.f_score, 1e-12);
  }
}

TEST(Metrics, BaccEqualsAccOnBalancedSets) {
  Rng rng(RngSeed{6});
  for (int trial = 0; trial < 1000; ++trial) {
    // Construct tp+fn = tn+fp.
    const long positives = 1 + static_cast<long>(rng.below(60));
    const long tp = static_cast<long>(rng.below(positives + 1));
    const long tn = static_cast<long>(rng.below(positives + 1));
    const ConfusionCounts c{tp, tn, positives - tn, positives - tp};
    const MetricSet m = metrics(c);
    ASSERT_NEAR(m.bacc, m.acc, 1e-12);
  }
}

TEST(Metrics, FScoreBetweenRecallAndPrecision) {
  Rng rng(RngSeed{7});
  for (int trial = 0; trial < 1000; ++trial) {
    const ConfusionCounts c{1 + static_cast<long>(rng.below(40)),
                            1 + static_cast<long>(rng.below(40)),
                            1 + static_cast<long>(rng.below(40)),
                            1 + static_cast<long>(rng.below(40))};
    const MetricSet m = metrics(c);
    ASSERT_LE(m.f_score, std::max(m.recall, m.precision) + 1e-12);
    ASSERT_GE(m.f_score, std::min(m.recall, m.precision) - 1e-12);
  }
}
