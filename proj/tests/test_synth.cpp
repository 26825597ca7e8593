#include <gtest/gtest.h>

#include <cmath>

#include "nirspec/dataset_io.hpp"
#include "nirspec/synthetic.hpp"

using namespace nirspec;

TEST(Synth, DefaultSpecMatchesReferenceShape) {
  SynthSpec spec;
  const Dataset ds = generate(spec);
  EXPECT_EQ(ds.size(), 971u);
  const ClassCounts c = class_counts(ds);
  EXPECT_EQ(c.lesion(LesionType::ACK), 336);
  EXPECT_EQ(c.lesion(LesionType::SEK), 188);
  EXPECT_EQ(c.lesion(LesionType::NEV), 62);
  EXPECT_EQ(c.lesion(LesionType::BCC), 302);
  EXPECT_EQ(c.lesion(LesionType::SCC), 72);
  EXPECT_EQ(c.lesion(LesionType::MEL), 11);
  EXPECT_EQ(ds.grid.count, 125);
  for (const auto& r : ds.records) {
    ASSERT_EQ(r.spectrum.size(), 125u);
    for (double v : r.spectrum.values) ASSERT_TRUE(std::isfinite(v));
  }
}

TEST(Synth, ZeroNoiseMakesLesionRecordsIdentical) {
  SynthSpec spec;
  spec.noise_sigma = 0.0;
  spec.counts = {3, 0, 0, 2, 0, 0};
  const Dataset ds = generate(spec);
  ASSERT_EQ(ds.size(), 5u);
  EXPECT_EQ(ds.records[0].spectrum.values, ds.records[1].spectrum.values);
  EXPECT_EQ(ds.records[0].spectrum.values, ds.records[2].spectrum.values);
  EXPECT_EQ(ds.records[3].spectrum.values, ds.records[4].spectrum.values);
  // Separated classes differ.
  EXPECT_NE(ds.records[0].spectrum.values, ds.records[3].spectrum.values);
}

TEST(Synth, ZeroSeparationCollapsesClassTemplates) {
  SynthSpec spec;
  spec.noise_sigma = 0.0;
  spec.separation_scale = 0.0;
  spec.counts = {1, 1, 1, 1, 1, 1};
  const Dataset ds = generate(spec);
  for (std::size_t i = 1; i < ds.size(); ++i) {
    EXPECT_EQ(ds.records[0].spectrum.values, ds.records[i].spectrum.values);
  }
}

TEST(Synth, DeterministicUnderSeed) {
  SynthSpec spec;
  spec.counts = {5, 5, 5, 5, 5, 5};
  spec.seed = RngSeed{77};
  const Dataset a = generate(spec);
  const Dataset b = generate(spec);
  EXPECT_EQ(dataset_to_csv(a), dataset_to_csv(b));
  spec.seed = RngSeed{78};
  const Dataset c = generate(spec);
  EXPECT_NE(dataset_to_csv(a), dataset_to_csv(c));
}

TEST(Synth, EmpiricalChannelMeansConvergeToTemplate) {
  SynthSpec spec;
  spec.counts = {2000, 0, 0, 0, 0, 0};
  spec.noise_sigma = 0.4;
  spec.seed = RngSeed{5};
  const Dataset ds = generate(spec);
  const std::vector<double> expected = template_curve(spec, LesionType::ACK);
  const double bound = 3.0 * spec.noise_sigma / std::sqrt(2000.0);
  int outside = 0;
  for (int c = 0; c < spec.grid.count; ++c) {
    double mean = 0.0;
    for (const auto& r : ds.records) mean += r.spectrum[c];
    mean /= static_cast<double>(ds.size());
    if (std::abs(mean - expected[c]) > bound) ++outside;
  }
  // 3-sigma bound: a handful of the 125 channels may fall outside.
  EXPECT_LE(outside, 3);
}

TEST(Synth, AllCountsZeroIsInvalid) {
  SynthSpec spec;
  spec.counts = {0, 0, 0, 0, 0, 0};
  EXPECT_THROW(generate(spec), InvalidConfigError);
}

TEST(SynthSpecJson, RoundTrip) {
  SynthSpec spec;
  spec.counts = {10, 9, 8, 7, 6, 5};
  spec.noise_sigma = 0.123;
  spec.separation_scale = 0.5;
  spec.seed = RngSeed{999};
  const SynthSpec back = synth_spec_from_json(synth_spec_to_json(spec));
  EXPECT_EQ(back.counts, spec.counts);
  EXPECT_DOUBLE_EQ(back.noise_sigma, spec.noise_sigma);
  EXPECT_DOUBLE_EQ(back.separation_scale, spec.separation_scale);
  EXPECT_EQ(back.seed.value, spec.seed.value);
  EXPECT_EQ(dataset_to_csv(generate(back)), dataset_to_csv(generate(spec)));
}
