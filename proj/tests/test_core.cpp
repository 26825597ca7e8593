#include <gtest/gtest.h>

#include "nirspec/rng.hpp"
#include "nirspec/synthetic.hpp"
#include "nirspec/types.hpp"
#include "support/test_data.hpp"

using namespace nirspec;

TEST(BinaryLabel, CancerGroup) {
  EXPECT_EQ(binary_label(LesionType::MEL), 1);
  EXPECT_EQ(binary_label(LesionType::BCC), 1);
  EXPECT_EQ(binary_label(LesionType::SCC), 1);
}

TEST(BinaryLabel, NonCancerGroup) {
  EXPECT_EQ(binary_label(LesionType::ACK), 0);
  EXPECT_EQ(binary_label(LesionType::SEK), 0);
  EXPECT_EQ(binary_label(LesionType::NEV), 0);
}

TEST(WavelengthGrid, StandardGridEndsAt1693_6) {
  const WavelengthGrid g;
  EXPECT_EQ(g.count, 125);
  EXPECT_DOUBLE_EQ(g.wavelength(0), 900.0);
  EXPECT_DOUBLE_EQ(g.wavelength(124), 1693.6);
}

TEST(ClassCounts, ReferenceDistribution) {
  SynthSpec spec;  // default counts mirror the reference dataset
  spec.noise_sigma = 0.0;
  const Dataset ds = generate(spec);
  const ClassCounts c = class_counts(ds);
  EXPECT_EQ(c.lesion(LesionType::ACK), 336);
  EXPECT_EQ(c.lesion(LesionType::SEK), 188);
  EXPECT_EQ(c.lesion(LesionType::NEV), 62);
  EXPECT_EQ(c.lesion(LesionType::BCC), 302);
  EXPECT_EQ(c.lesion(LesionType::SCC), 72);
  EXPECT_EQ(c.lesion(LesionType::MEL), 11);
  EXPECT_EQ(c.cancer, 385);
  EXPECT_EQ(c.non_cancer, 586);
  EXPECT_EQ(c.total(), 971);
}

TEST(ClassCounts, SingleMelRecord) {
  const Dataset ds = testsupport::make_dataset({{LesionType::MEL, {1.0, 2.0, 3.0}}}, 3);
  const ClassCounts c = class_counts(ds);
  EXPECT_EQ(c.lesion(LesionType::MEL), 1);
  EXPECT_EQ(c.cancer, 1);
  EXPECT_EQ(c.non_cancer, 0);
}

TEST(ClassCounts, EmptyDatasetThrows) {
  Dataset ds;
  EXPECT_THROW(class_counts(ds), EmptyDatasetError);
}

TEST(ClassCounts, LabelCountsEqualLesionPartitionSums) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Dataset ds = testsupport::random_dataset(80, 5, RngSeed{seed});
    const ClassCounts c = class_counts(ds);
    const int cancer = c.lesion(LesionType::BCC) + c.lesion(LesionType::SCC) +
                       c.lesion(LesionType::MEL);
    const int non_cancer = c.lesion(LesionType::ACK) + c.lesion(LesionType::SEK) +
                           c.lesion(LesionType::NEV);
    EXPECT_EQ(c.cancer, cancer);
    EXPECT_EQ(c.non_cancer, non_cancer);
    EXPECT_EQ(c.total(), static_cast<int>(ds.size()));
  }
}

TEST(DatasetValidate, RejectsDuplicateIds) {
  Dataset ds = testsupport::make_dataset(
      {{LesionType::ACK, {1.0, 2.0, 3.0}}, {LesionType::ACK, {1.0, 2.0, 3.0}}}, 3);
  ds.records[1].id = ds.records[0].id;
  EXPECT_THROW(ds.validate(), InvalidConfigError);
}

TEST(DatasetValidate, RejectsLabelLesionMismatch) {
  Dataset ds = testsupport::make_dataset({{LesionType::ACK, {1.0, 2.0, 3.0}}}, 3);
  ds.records[0].label = 1;
  EXPECT_THROW(ds.validate(), InvalidConfigError);
}

TEST(Rng, DeterministicUnderSeed) {
  Rng a(RngSeed{123});
  Rng b(RngSeed{123});
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a.next_u64(), b.next_u64());
  }
  Rng c(RngSeed{123});
  Rng d(RngSeed{124});
  bool differ = false;
  for (int i = 0; i < 10; ++i) differ |= c.next_u64() != d.next_u64();
  EXPECT_TRUE(differ);
}

TEST(Rng, UniformBounds) {
  Rng rng(RngSeed{7});
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  for (int i = 0; i < 1000; ++i) {
    const auto v = rng.uniform_int(-3, 3);
    ASSERT_GE(v, -3);
    ASSERT_LE(v, 3);
  }
}

TEST(Rng, BelowIsUnbiasedEnough) {
  Rng rng(RngSeed{11});
  std::vector<int> counts(5, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) counts[rng.below(5)] += 1;
  for (int c : counts) {
    EXPECT_NEAR(c, draws / 5, 600);  // ~4.2 sigma
  }
}

TEST(Rng, GaussianMoments) {
  Rng rng(RngSeed{13});
  double sum = 0.0, sum_sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.gaussian();
    sum += z;
    sum_sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sum_sq / n, 1.0, 0.02);
}

TEST(Rng, DeriveSeedSeparatesStreams) {
  const RngSeed base{42};
  EXPECT_NE(derive_seed(base, 0).value, derive_seed(base, 1).value);
  EXPECT_EQ(derive_seed(base, 5).value, derive_seed(base, 5).value);
}
