#include <gtest/gtest.h>

#include "nirspec/dataset_io.hpp"
#include "nirspec/smote.hpp"
#include "nirspec/synthetic.hpp"
#include "support/test_data.hpp"

using namespace nirspec;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, std::uint64_t seed) {
  Rng rng(RngSeed{seed});
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = rng.uniform(-1.0, 1.0);
  }
  return m;
}

}  // namespace

TEST(Smote, ConvexCombinationResiduals) {
  const Eigen::MatrixXd minority = random_matrix(40, 12, 1);
  SmoteConfig config;
  config.k_neighbors = 5;
  config.seed = RngSeed{2};
  const SmoteResult result = smote(minority, 100, config);
  ASSERT_EQ(result.synthetic.rows(), 100);
  ASSERT_EQ(result.provenance.size(), 100u);
  for (int s = 0; s < 100; ++s) {
    const auto& p = result.provenance[s];
    ASSERT_GE(p.gap, 0.0);
    ASSERT_LE(p.gap, 1.0);
    const Eigen::RowVectorXd expected =
        minority.row(p.base) +
        p.gap * (minority.row(p.neighbor) - minority.row(p.base));
    ASSERT_LT((result.synthetic.row(s) - expected).norm(), 1e-9);
  }
}

TEST(Smote, NeighborIsAmongKNearest) {
  const Eigen::MatrixXd minority = random_matrix(25, 6, 3);
  SmoteConfig config;
  config.k_neighbors = 4;
  config.seed = RngSeed{7};
  const SmoteResult result = smote(minority, 200, config);
  for (const auto& p : result.provenance) {
    ASSERT_NE(p.base, p.neighbor);
    // The neighbor must be within the base's k nearest by Euclidean distance:
    // count strictly closer rows; there must be < k of them.
    const double d_neighbor = (minority.row(p.base) - minority.row(p.neighbor)).norm();
    int closer = 0;
    for (int j = 0; j < minority.rows(); ++j) {
      if (j == p.base) continue;
      if ((minority.row(p.base) - minority.row(j)).norm() < d_neighbor) ++closer;
    }
    ASSERT_LT(closer, config.k_neighbors);
  }
}

TEST(Smote, TwoPointsWithKOneStayOnSegment) {
  Eigen::MatrixXd minority(2, 3);
  minority << 0.0, 0.0, 0.0, 1.0, 2.0, 3.0;
  SmoteConfig config;
  config.k_neighbors = 1;
  config.seed = RngSeed{5};
  const SmoteResult result = smote(minority, 50, config);
  const Eigen::RowVector3d direction(1.0, 2.0, 3.0);
  for (int s = 0; s < 50; ++s) {
    // Collinearity: synthetic = t * direction for t in [0, 1].
    const double t = result.synthetic(s, 0) / direction[0];
    ASSERT_GE(t, -1e-12);
    ASSERT_LE(t, 1.0 + 1e-12);
    ASSERT_LT((result.synthetic.row(s) - t * direction).norm(), 1e-9);
  }
}

TEST(Smote, KTooLargeIsInvalidConfig) {
  const Eigen::MatrixXd minority = random_matrix(5, 3, 9);
  SmoteConfig config;
  config.k_neighbors = 5;
  EXPECT_THROW(smote(minority, 10, config), InvalidConfigError);
}

TEST(Smote, ZeroGenerateGivesEmptyMatrix) {
  const Eigen::MatrixXd minority = random_matrix(8, 3, 4);
  SmoteConfig config;
  config.k_neighbors = 3;
  EXPECT_EQ(smote(minority, 0, config).synthetic.rows(), 0);
}

TEST(BalanceWithSmote, ReferenceCountsEqualize) {
  SynthSpec spec;
  spec.seed = RngSeed{11};
  const Dataset train = generate(spec);
  SmoteConfig config;
  config.seed = RngSeed{13};
  const Dataset balanced = balance_with_smote(train, SmoteMetricSpace::Stored, config);
  const ClassCounts c = class_counts(balanced);
  EXPECT_EQ(c.cancer, 586);
  EXPECT_EQ(c.non_cancer, 586);
  EXPECT_EQ(c.synthetic, 201);
}

TEST(BalanceWithSmote, OriginalsUntouchedAndFlagged) {
  const Dataset train = testsupport::random_dataset(60, 8, RngSeed{21});
  SmoteConfig config;
  config.k_neighbors = 3;
  config.seed = RngSeed{22};
  const Dataset balanced = balance_with_smote(train, SmoteMetricSpace::Stored, config);
  ASSERT_GE(balanced.size(), train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    EXPECT_EQ(balanced.records[i].id, train.records[i].id);
    EXPECT_EQ(balanced.records[i].spectrum.values, train.records[i].spectrum.values);
    EXPECT_FALSE(balanced.records[i].synthetic);
  }
  const ClassCounts c = class_counts(balanced);
  EXPECT_EQ(c.cancer, c.non_cancer);
  for (std::size_t i = train.size(); i < balanced.size(); ++i) {
    EXPECT_TRUE(balanced.records[i].synthetic);
    EXPECT_FALSE(balanced.records[i].lesion.has_value());
  }
  balanced.validate();
}

TEST(BalanceWithSmote, AlreadyBalancedReturnsUnchanged) {
  const Dataset ds = testsupport::make_dataset({{LesionType::ACK, {1, 2, 3}},
                                                {LesionType::ACK, {2, 3, 4}},
                                                {LesionType::ACK, {3, 4, 5}},
                                                {LesionType::MEL, {5, 6, 7}},
                                                {LesionType::MEL, {6, 7, 8}},
                                                {LesionType::MEL, {7, 8, 9}}},
                                               3);
  SmoteConfig config;
  config.k_neighbors = 2;
  const Dataset out = balance_with_smote(ds, SmoteMetricSpace::Stored, config);
  EXPECT_EQ(dataset_to_csv(out), dataset_to_csv(ds));
}

TEST(BalanceWithSmote, MinorityAtOrBelowKIsInvalid) {
  Dataset ds = testsupport::make_dataset({{LesionType::ACK, {1, 2, 3}},
                                          {LesionType::ACK, {2, 3, 4}},
                                          {LesionType::ACK, {3, 4, 5}},
                                          {LesionType::ACK, {9, 9, 9}},
                                          {LesionType::ACK, {8, 8, 8}},
                                          {LesionType::ACK, {7, 7, 7}},
                                          {LesionType::MEL, {5, 6, 7}},
                                          {LesionType::MEL, {6, 7, 8}}},
                                         3);
  SmoteConfig config;  // default k = 5 >= minority size 2
  EXPECT_THROW(balance_with_smote(ds, SmoteMetricSpace::Stored, config), InvalidConfigError);
}

TEST(BalanceWithSmote, SingleClassIsDegenerate) {
  const Dataset ds = testsupport::make_dataset(
      {{LesionType::ACK, {1, 2, 3}}, {LesionType::SEK, {2, 3, 4}}}, 3);
  SmoteConfig config;
  config.k_neighbors = 1;
  EXPECT_THROW(balance_with_smote(ds, SmoteMetricSpace::Stored, config),
               DegenerateClassError);
}

TEST(BalanceWithSmote, SnvMetricStillInterpolatesStoredSpectra) {
  const Dataset train = testsupport::random_dataset(50, 10, RngSeed{31});
  SmoteConfig config;
  config.k_neighbors = 3;
  config.seed = RngSeed{32};
  const Dataset balanced = balance_with_smote(train, SmoteMetricSpace::Snv, config);
  const ClassCounts c = class_counts(balanced);
  EXPECT_EQ(c.cancer, c.non_cancer);
  // Synthetic rows live in the stored (raw) space: each has a value range
  // comparable to the originals, not a normalized one.
  balanced.validate();
}

TEST(BalanceWithSmote, DeterministicUnderSeed) {
  const Dataset train = testsupport::random_dataset(50, 6, RngSeed{41});
  SmoteConfig config;
  config.k_neighbors = 3;
  config.seed = RngSeed{42};
  const Dataset a = balance_with_smote(train, SmoteMetricSpace::Stored, config);
  const Dataset b = balance_with_smote(train, SmoteMetricSpace::Stored, config);
  EXPECT_EQ(dataset_to_csv(a), dataset_to_csv(b));
}
