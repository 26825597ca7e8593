#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nirspec/ellipse.hpp"
#include "nirspec/mlp.hpp"
#include "nirspec/types.hpp"

namespace nirspec {

struct GanConfig {
  int noise_dim = 32;
  std::vector<int> generator_hidden = {64, 128};
  std::vector<int> discriminator_hidden = {128, 64};
  double learning_rate = 1e-3;
  double momentum = 0.9;
  int epochs = 2000;
  int batch_size = 32;
  RngSeed seed;
};

/// Generator maps standard-normal noise to spectra (linear output);
/// discriminator scores spectra with a logit head. discriminate() returns
/// sigmoid probabilities, strictly inside (0, 1).
struct GanModel {
  int noise_dim = 0;
  Mlp generator;
  Mlp discriminator;

  Eigen::MatrixXd generate(int n, Rng& rng) const;
  Eigen::MatrixXd generate(int n, RngSeed seed) const;
  Eigen::VectorXd discriminate(const Eigen::MatrixXd& x) const;
};

/// Per-epoch losses. d_loss is the objective the discriminator step
/// minimizes, -(E[log D(x)] + E[log(1 - D(G(Z)))]); g_loss is the
/// E[log(1 - D(G(Z)))] term of the minimax objective. The generator is
/// trained on the non-saturating surrogate -E[log D(G(Z))].
struct GanEpochLog {
  int epoch = 0;
  double d_loss = 0.0;
  double g_loss = 0.0;
};

struct GanTrainResult {
  GanModel model;
  std::vector<GanEpochLog> log;
};

/// Adversarial training on the rows of `real` (raw spectra). Deterministic
/// under config.seed. Requires at least 2 * batch_size rows.
GanTrainResult train_gan(const Eigen::MatrixXd& real, const GanConfig& config);

/// Oversamples the minority class to the majority count: trains the GAN on
/// the raw minority spectra, fits the confidence ellipse on their
/// SNV-normalized scores, then generates, SNV-normalizes and filters batches
/// until balanced. Raises ConvergenceFailure after max_rounds rounds.
Dataset balance_with_gan(const Dataset& train, const GanConfig& gan_config,
                         const EllipseConfig& filter_config, int max_rounds = 20);

std::string mlp_to_json(const Mlp& net);
Mlp mlp_from_json(const std::string& text);
void write_generator(const Mlp& generator, const std::string& path);
Mlp read_generator(const std::string& path);

std::string training_log_to_csv(const std::vector<GanEpochLog>& log);
void write_training_log(const std::vector<GanEpochLog>& log, const std::string& path);

}  // namespace nirspec
