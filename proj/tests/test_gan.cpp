#include <gtest/gtest.h>

#include <cmath>

#include "nirspec/gan.hpp"
#include "nirspec/synthetic.hpp"
#include "support/test_data.hpp"

using namespace nirspec;

namespace {

// Toy target: a fixed two-Gaussian-peak template plus channel noise.
std::vector<double> two_peak_template(int width) {
  std::vector<double> t(width);
  for (int i = 0; i < width; ++i) {
    const double x = static_cast<double>(i) / (width - 1);
    t[i] = std::exp(-0.5 * std::pow((x - 0.3) / 0.08, 2.0)) +
           0.7 * std::exp(-0.5 * std::pow((x - 0.75) / 0.1, 2.0));
  }
  return t;
}

Eigen::MatrixXd toy_minority(int n, int width, double noise_sigma, std::uint64_t seed) {
  const std::vector<double> tpl = two_peak_template(width);
  Rng rng(RngSeed{seed});
  Eigen::MatrixXd m(n, width);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < width; ++c) m(r, c) = tpl[c] + rng.gaussian(0.0, noise_sigma);
  }
  return m;
}

/// Binary cross-entropy (with logits) of an Mlp against fixed targets.
double bce_loss(const Mlp& net, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const Eigen::MatrixXd logits = net.forward(x);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double z = logits(i, 0);
    // -y log p - (1-y) log(1-p), stable form.
    loss += std::max(z, 0.0) - y[i] * z + std::log1p(std::exp(-std::abs(z)));
  }
  return loss / static_cast<double>(x.rows());
}

}  // namespace

TEST(Mlp, GradientCheckOnFiveParameterMicroNetwork) {
  Rng rng(RngSeed{3});
  // 2 -> 1 -> 1: W1 (2) + b1 (1) + W2 (1) + b2 (1) = 5 parameters.
  Mlp net(2, {1}, 1, Activation::Relu, Activation::Linear, rng);
  ASSERT_EQ(net.parameter_count(), 5);

  Eigen::MatrixXd x(4, 2);
  x << 0.5, -1.2, 1.5, 0.7, -0.3, 0.9, 2.0, -0.5;
  Eigen::VectorXd y(4);
  y << 1, 0, 1, 0;

  // Analytic gradient via backward with the BCE-with-logits output gradient.
  Mlp::ForwardCache cache;
  const Eigen::MatrixXd logits = net.forward_cached(x, cache);
  Eigen::MatrixXd dz(4, 1);
  for (int i = 0; i < 4; ++i) {
    const double p = 1.0 / (1.0 + std::exp(-logits(i, 0)));
    dz(i, 0) = (p - y[i]) / 4.0;
  }
  Mlp::Gradients grads = net.make_gradients();
  net.backward(cache, dz, grads);
  const Eigen::VectorXd analytic = Mlp::flatten(grads);

  // Central finite differences over the flattened parameters.
  const double eps = 1e-6;
  Eigen::VectorXd params = net.parameters();
  Eigen::VectorXd numeric(params.size());
  for (Eigen::Index p = 0; p < params.size(); ++p) {
    Eigen::VectorXd plus = params, minus = params;
    plus[p] += eps;
    minus[p] -= eps;
    Mlp copy = net;
    copy.set_parameters(plus);
    const double up = bce_loss(copy, x, y);
    copy.set_parameters(minus);
    const double down = bce_loss(copy, x, y);
    numeric[p] = (up - down) / (2.0 * eps);
  }

  for (Eigen::Index p = 0; p < params.size(); ++p) {
    const double denom = std::max({std::abs(analytic[p]), std::abs(numeric[p]), 1e-8});
    EXPECT_LT(std::abs(analytic[p] - numeric[p]) / denom, 1e-4) << "parameter " << p;
  }
}

TEST(Mlp, GradientCheckThroughDeepReluSigmoidStack) {
  Rng rng(RngSeed{17});
  Mlp net(3, {4, 3}, 2, Activation::Relu, Activation::Sigmoid, rng);
  Eigen::MatrixXd x(5, 3);
  x << 0.1, -0.4, 0.9, 1.1, 0.2, -0.7, -0.9, 0.5, 0.3, 0.4, -1.2, 0.8, 0.6, 0.6, -0.2;

  // Quadratic loss on the sigmoid outputs: L = 0.5 * sum out^2.
  const auto loss = [&x](const Mlp& m) { return 0.5 * m.forward(x).squaredNorm(); };

  Mlp::ForwardCache cache;
  const Eigen::MatrixXd out = net.forward_cached(x, cache);
  Mlp::Gradients grads = net.make_gradients();
  net.backward(cache, out, grads);
  const Eigen::VectorXd analytic = Mlp::flatten(grads);

  const double eps = 1e-6;
  const Eigen::VectorXd params = net.parameters();
  for (Eigen::Index p = 0; p < params.size(); ++p) {
    Eigen::VectorXd plus = params, minus = params;
    plus[p] += eps;
    minus[p] -= eps;
    Mlp copy = net;
    copy.set_parameters(plus);
    const double up = loss(copy);
    copy.set_parameters(minus);
    const double down = loss(copy);
    const double numeric = (up - down) / (2.0 * eps);
    const double denom = std::max({std::abs(analytic[p]), std::abs(numeric), 1e-8});
    ASSERT_LT(std::abs(analytic[p] - numeric) / denom, 1e-4) << "parameter " << p;
  }
}

TEST(Gan, UntrainedDiscriminatorOutputsInOpenUnitInterval) {
  Rng rng(RngSeed{5});
  GanModel model;
  model.noise_dim = 8;
  model.generator = Mlp(8, {16}, 20, Activation::Relu, Activation::Linear, rng);
  model.discriminator = Mlp(20, {16}, 1, Activation::Relu, Activation::Linear, rng);
  const Eigen::MatrixXd x = model.generate(50, RngSeed{6});
  const Eigen::VectorXd p = model.discriminate(x);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    ASSERT_GT(p[i], 0.0);
    ASSERT_LT(p[i], 1.0);
  }
}

TEST(Gan, GeneratorOutputWidthMatchesTrainingData) {
  const Eigen::MatrixXd real = toy_minority(64, 125, 0.05, 1);
  GanConfig config;
  config.noise_dim = 4;
  config.generator_hidden = {8};
  config.discriminator_hidden = {8};
  config.epochs = 2;
  config.batch_size = 16;
  config.seed = RngSeed{2};
  const GanTrainResult result = train_gan(real, config);
  const Eigen::MatrixXd generated = result.model.generate(7, RngSeed{3});
  EXPECT_EQ(generated.cols(), 125);
  EXPECT_EQ(generated.rows(), 7);
  for (Eigen::Index r = 0; r < generated.rows(); ++r) {
    for (Eigen::Index c = 0; c < generated.cols(); ++c) {
      ASSERT_TRUE(std::isfinite(generated(r, c)));
    }
  }
  EXPECT_EQ(result.log.size(), 2u);
}

TEST(Gan, TooFewSamplesIsInvalidConfig) {
  const Eigen::MatrixXd real = toy_minority(20, 30, 0.05, 4);
  GanConfig config;
  config.batch_size = 16;  // needs >= 32 rows
  EXPECT_THROW(train_gan(real, config), InvalidConfigError);
}

TEST(Gan, DeterministicUnderSeed) {
  const Eigen::MatrixXd real = toy_minority(64, 40, 0.05, 8);
  GanConfig config;
  config.noise_dim = 4;
  config.generator_hidden = {8};
  config.discriminator_hidden = {8};
  config.epochs = 3;
  config.batch_size = 16;
  config.seed = RngSeed{99};
  const GanTrainResult a = train_gan(real, config);
  const GanTrainResult b = train_gan(real, config);
  EXPECT_EQ(mlp_to_json(a.model.generator), mlp_to_json(b.model.generator));
  ASSERT_EQ(a.log.size(), b.log.size());
  for (std::size_t e = 0; e < a.log.size(); ++e) {
    EXPECT_EQ(a.log[e].d_loss, b.log[e].d_loss);
    EXPECT_EQ(a.log[e].g_loss, b.log[e].g_loss);
  }
}

TEST(Gan, LearnsTwoPeakTemplateChannelMeans) {
  const int width = 125;
  const double noise_sigma = 0.1;
  const Eigen::MatrixXd real = toy_minority(500, width, noise_sigma, 21);

  GanConfig config;
  config.noise_dim = 16;
  config.generator_hidden = {32, 64};
  config.discriminator_hidden = {64, 32};
  config.learning_rate = 2e-3;
  config.epochs = 120;
  config.batch_size = 32;
  config.seed = RngSeed{22};
  const GanTrainResult result = train_gan(real, config);

  const Eigen::MatrixXd generated = result.model.generate(400, RngSeed{23});
  const Eigen::RowVectorXd gen_mean = generated.colwise().mean();
  const std::vector<double> tpl = two_peak_template(width);
  int within = 0;
  for (int c = 0; c < width; ++c) {
    if (std::abs(gen_mean[c] - tpl[c]) <= 3.0 * noise_sigma) ++within;
  }
  EXPECT_GE(within, static_cast<int>(0.9 * width))
      << "only " << within << " of " << width << " channels within 3 sigma";
}

TEST(GanSerialization, GeneratorJsonRoundTrip) {
  Rng rng(RngSeed{31});
  const Mlp net(4, {6, 5}, 10, Activation::Relu, Activation::Linear, rng);
  const Mlp back = mlp_from_json(mlp_to_json(net));
  Rng noise(RngSeed{32});
  Eigen::MatrixXd z(3, 4);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) z(r, c) = noise.gaussian();
  }
  EXPECT_EQ(net.forward(z), back.forward(z));
}

TEST(GanTrainingLog, CsvShape) {
  const std::vector<GanEpochLog> log = {{0, 1.5, -0.7}, {1, 1.2, -0.9}};
  const std::string csv = training_log_to_csv(log);
  EXPECT_EQ(csv.substr(0, 21), "epoch,d_loss,g_loss\n0");
  EXPECT_NE(csv.find("1,1.2,-0.9"), std::string::npos);
}

TEST(BalanceWithGan, BalancesSmallSyntheticDataset) {
  SynthSpec spec;
  spec.counts = {90, 0, 0, 64, 0, 0};
  spec.noise_sigma = 0.1;
  spec.seed = RngSeed{41};
  const Dataset train = generate(spec);

  GanConfig config;
  config.noise_dim = 8;
  config.generator_hidden = {16, 32};
  config.discriminator_hidden = {32, 16};
  config.epochs = 60;
  config.batch_size = 16;
  config.seed = RngSeed{42};
  const Dataset balanced = balance_with_gan(train, config, EllipseConfig{});
  const ClassCounts c = class_counts(balanced);
  EXPECT_EQ(c.cancer, 90);
  EXPECT_EQ(c.non_cancer, 90);
  EXPECT_EQ(c.synthetic, 26);
  balanced.validate();
  for (std::size_t i = 0; i < train.size(); ++i) {
    EXPECT_EQ(balanced.records[i].id, train.records[i].id);
  }
}

TEST(BalanceWithGan, RejectingFilterIsConvergenceFailure) {
  SynthSpec spec;
  spec.counts = {80, 0, 0, 48, 0, 0};
  spec.noise_sigma = 0.1;
  spec.seed = RngSeed{51};
  const Dataset train = generate(spec);

  GanConfig config;
  config.noise_dim = 4;
  config.generator_hidden = {8};
  config.discriminator_hidden = {8};
  config.epochs = 1;
  config.batch_size = 16;
  config.seed = RngSeed{52};
  EllipseConfig filter;
  filter.confidence = 1e-12;  // threshold ~ 0: rejects everything
  EXPECT_THROW(balance_with_gan(train, config, filter, 3), ConvergenceFailureError);
}

TEST(BalanceWithGan, AlreadyBalancedReturnsUnchanged) {
  SynthSpec spec;
  spec.counts = {50, 0, 0, 50, 0, 0};
  spec.seed = RngSeed{61};
  const Dataset train = generate(spec);
  GanConfig config;
  config.epochs = 1;
  config.batch_size = 8;
  const Dataset out = balance_with_gan(train, config, EllipseConfig{});
  EXPECT_EQ(out.size(), train.size());
}
