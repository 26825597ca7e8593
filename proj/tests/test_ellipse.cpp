#include <gtest/gtest.h>

#include <cmath>

#include "nirspec/ellipse.hpp"
#include "nirspec/rng.hpp"
#include "support/oracles.hpp"

using namespace nirspec;

namespace {

Eigen::MatrixXd standard_gaussian(int n, int d, std::uint64_t seed) {
  Rng rng(RngSeed{seed});
  Eigen::MatrixXd m(n, d);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < d; ++c) m(r, c) = rng.gaussian();
  }
  return m;
}

}  // namespace

TEST(Chi2Quantile, ClosedFormMatchesMinusTwoLog) {
  EXPECT_NEAR(chi2_quantile_2dof(0.95), -2.0 * std::log(0.05), 1e-12);
  EXPECT_NEAR(chi2_quantile_2dof(0.95), 5.991464547107980, 1e-9);
}

TEST(Chi2Quantile, MatchesBisectionOracle) {
  for (double confidence : {0.5, 0.9, 0.95, 0.99, 0.999}) {
    EXPECT_NEAR(chi2_quantile_2dof(confidence),
                testsupport::chi2_quantile_2dof_bisection(confidence), 1e-9)
        << "confidence " << confidence;
  }
}

TEST(FitEllipse, CenterPointIsInside) {
  const Eigen::MatrixXd data = standard_gaussian(500, 5, 1);
  const EllipseFilter filter = fit_ellipse(data);
  const Eigen::RowVectorXd center_row = data.colwise().mean();
  EXPECT_TRUE(filter.contains(center_row));
  EXPECT_NEAR(filter.mahalanobis_sq(center_row), 0.0, 1e-18);
}

TEST(FitEllipse, GaussianRetentionNear95Percent) {
  const Eigen::MatrixXd data = standard_gaussian(10000, 2, 7);
  const EllipseFilter filter = fit_ellipse(data);
  const auto mask = inside_mask(data, filter);
  int kept = 0;
  for (bool m : mask) kept += m ? 1 : 0;
  const double retention = static_cast<double>(kept) / 10000.0;
  EXPECT_GE(retention, 0.93);
  EXPECT_LE(retention, 0.97);
}

TEST(FitEllipse, TooFewSamplesInvalid) {
  const Eigen::MatrixXd data = standard_gaussian(2, 4, 2);
  EXPECT_THROW(fit_ellipse(data), InvalidConfigError);
}

TEST(FitEllipse, SingularScoresIsZeroVariance) {
  // Rank-1 data: the second principal score has zero variance.
  Eigen::MatrixXd data(10, 3);
  for (int i = 0; i < 10; ++i) {
    data(i, 0) = i;
    data(i, 1) = 2.0 * i;
    data(i, 2) = -i;
  }
  EXPECT_THROW(fit_ellipse(data), ZeroVarianceError);
}

TEST(FilterGenerated, EmptyInEmptyOut) {
  const Eigen::MatrixXd data = standard_gaussian(100, 4, 3);
  const EllipseFilter filter = fit_ellipse(data);
  const Eigen::MatrixXd none(0, 4);
  EXPECT_EQ(filter_generated(none, filter).rows(), 0);
}

TEST(FilterGenerated, RetainedRealSampleStaysRetained) {
  const Eigen::MatrixXd data = standard_gaussian(300, 6, 4);
  const EllipseFilter filter = fit_ellipse(data);
  const auto mask = inside_mask(data, filter);
  // Copy of a retained real row must be retained again.
  for (int i = 0; i < 300; ++i) {
    if (!mask[i]) continue;
    Eigen::MatrixXd copy = data.row(i);
    EXPECT_EQ(filter_generated(copy, filter).rows(), 1);
    break;
  }
}

TEST(FilterGenerated, FarOutlierRemoved) {
  const Eigen::MatrixXd data = standard_gaussian(400, 3, 5);
  const EllipseFilter filter = fit_ellipse(data);
  Eigen::MatrixXd batch = data.topRows(10);
  // Push one row far along the first principal direction: score norm far
  // beyond the threshold.
  batch.row(3) = filter.mean.transpose() +
                 (10.0 * std::sqrt(filter.threshold * filter.covariance(0, 0))) *
                     filter.components.col(0).transpose();
  const auto mask = inside_mask(batch, filter);
  EXPECT_FALSE(mask[3]);
  const Eigen::MatrixXd kept = filter_generated(batch, filter);
  EXPECT_LT(kept.rows(), batch.rows());
}

TEST(FitEllipse, MembershipInvariantToGlobalScaling) {
  const Eigen::MatrixXd data = standard_gaussian(800, 4, 9);
  const EllipseFilter filter = fit_ellipse(data);
  const EllipseFilter scaled_filter = fit_ellipse((3.7 * data).eval());
  const auto mask_a = inside_mask(data, filter);
  const auto mask_b = inside_mask((3.7 * data).eval(), scaled_filter);
  EXPECT_EQ(mask_a, mask_b);
}

TEST(FitEllipse, ThresholdTracksConfidence) {
  const Eigen::MatrixXd data = standard_gaussian(2000, 2, 11);
  const EllipseFilter tight = fit_ellipse(data, {2, 0.5});
  const EllipseFilter loose = fit_ellipse(data, {2, 0.999});
  int kept_tight = 0, kept_loose = 0;
  for (bool m : inside_mask(data, tight)) kept_tight += m;
  for (bool m : inside_mask(data, loose)) kept_loose += m;
  EXPECT_LT(kept_tight, kept_loose);
  EXPECT_GT(kept_loose, 1950);
}
