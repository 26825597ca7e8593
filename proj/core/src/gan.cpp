#include "nirspec/gan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "nirspec/dataset_io.hpp"
#include "nirspec/snv.hpp"

namespace nirspec {

namespace {

Eigen::MatrixXd gaussian_matrix(int rows, int cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng.gaussian();
  }
  return m;
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline double safe_log(double p) { return std::log(std::clamp(p, 1e-12, 1.0 - 1e-12)); }

void validate(const GanConfig& c) {
  if (c.noise_dim < 1) throw InvalidConfigError("noise_dim must be >= 1");
  for (int h : c.generator_hidden) {
    if (h < 1) throw InvalidConfigError("generator hidden sizes must be >= 1");
  }
  for (int h : c.discriminator_hidden) {
    if (h < 1) throw InvalidConfigError("discriminator hidden sizes must be >= 1");
  }
  if (!(c.learning_rate > 0.0)) throw InvalidConfigError("learning_rate must be positive");
  if (!(c.momentum >= 0.0 && c.momentum < 1.0)) {
    throw InvalidConfigError("momentum must lie in [0, 1)");
  }
  if (c.epochs < 0) throw InvalidConfigError("epochs must be >= 0");
  if (c.batch_size < 1) throw InvalidConfigError("batch_size must be >= 1");
}

}  // namespace

Eigen::MatrixXd GanModel::generate(int n, Rng& rng) const {
  return generator.forward(gaussian_matrix(n, noise_dim, rng));
}

Eigen::MatrixXd GanModel::generate(int n, RngSeed seed) const {
  Rng rng(seed);
  return generate(n, rng);
}

Eigen::VectorXd GanModel::discriminate(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd logits = discriminator.forward(x);
  return logits.col(0).unaryExpr([](double z) { return sigmoid(z); });
}

GanTrainResult train_gan(const Eigen::MatrixXd& real, const GanConfig& config) {
  validate(config);
  const int n = static_cast<int>(real.rows());
  const int width = static_cast<int>(real.cols());
  if (n < 2 * config.batch_size) {
    throw InvalidConfigError("GAN training needs at least 2*batch_size (" +
                             std::to_string(2 * config.batch_size) + ") samples, got " +
                             std::to_string(n));
  }

  Rng rng(config.seed);
  GanTrainResult result;
  result.model.noise_dim = config.noise_dim;
  result.model.generator = Mlp(config.noise_dim, config.generator_hidden, width,
                               Activation::Relu, Activation::Linear, rng);
  result.model.discriminator = Mlp(width, config.discriminator_hidden, 1,
                                   Activation::Relu, Activation::Linear, rng);
  Mlp& g = result.model.generator;
  Mlp& d = result.model.discriminator;

  SgdMomentum opt_g(g, config.learning_rate, config.momentum);
  SgdMomentum opt_d(d, config.learning_rate, config.momentum);
  Mlp::Gradients grads_g = g.make_gradients();
  Mlp::Gradients grads_d = d.make_gradients();
  Mlp::Gradients scratch_d = d.make_gradients();

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;

  const int batches = n / config.batch_size;
  const int b = config.batch_size;

  result.log.reserve(config.epochs);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double sum_log_real = 0.0;
    double sum_log_one_minus_fake = 0.0;
    for (int batch = 0; batch < batches; ++batch) {
      Eigen::MatrixXd x_real(b, width);
      for (int i = 0; i < b; ++i) x_real.row(i) = real.row(order[batch * b + i]);

      // Discriminator step: minimize -(E log D(x) + E log(1 - D(G(Z)))).
      const Eigen::MatrixXd fake = g.forward(gaussian_matrix(b, config.noise_dim, rng));
      Mlp::ForwardCache cache_real, cache_fake;
      const Eigen::MatrixXd logit_real = d.forward_cached(x_real, cache_real);
      const Eigen::MatrixXd logit_fake = d.forward_cached(fake, cache_fake);

      Eigen::MatrixXd dz_real(b, 1), dz_fake(b, 1);
      for (int i = 0; i < b; ++i) {
        const double p_real = sigmoid(logit_real(i, 0));
        const double p_fake = sigmoid(logit_fake(i, 0));
        dz_real(i, 0) = (p_real - 1.0) / (2.0 * b);
        dz_fake(i, 0) = p_fake / (2.0 * b);
        sum_log_real += safe_log(p_real);
        sum_log_one_minus_fake += safe_log(1.0 - p_fake);
      }
      grads_d.setZero();
      d.backward(cache_real, dz_real, grads_d);
      d.backward(cache_fake, dz_fake, grads_d);
      opt_d.step(d, grads_d);

      // Generator step on a fresh noise batch: minimize -E log D(G(Z)).
      Mlp::ForwardCache cache_g, cache_dg;
      const Eigen::MatrixXd fake2 =
          g.forward_cached(gaussian_matrix(b, config.noise_dim, rng), cache_g);
      const Eigen::MatrixXd logit_fake2 = d.forward_cached(fake2, cache_dg);
      Eigen::MatrixXd dz_g(b, 1);
      for (int i = 0; i < b; ++i) {
        dz_g(i, 0) = (sigmoid(logit_fake2(i, 0)) - 1.0) / b;
      }
      scratch_d.setZero();
      const Eigen::MatrixXd d_input_grad = d.backward(cache_dg, dz_g, scratch_d);
      grads_g.setZero();
      g.backward(cache_g, d_input_grad, grads_g);
      opt_g.step(g, grads_g);
    }
    const double mean_log_real = sum_log_real / (batches * b);
    const double mean_log_omf = sum_log_one_minus_fake / (batches * b);
    result.log.push_back({epoch, -(mean_log_real + mean_log_omf), mean_log_omf});
  }
  return result;
}

Dataset balance_with_gan(const Dataset& train, const GanConfig& gan_config,
                         const EllipseConfig& filter_config, int max_rounds) {
  if (train.empty()) throw EmptyDatasetError("balance_with_gan over an empty dataset");
  if (max_rounds < 1) throw InvalidConfigError("max_rounds must be >= 1");

  std::vector<int> positives, negatives;
  for (int i = 0; i < static_cast<int>(train.size()); ++i) {
    (train.records[i].label == kCancerLabel ? positives : negatives).push_back(i);
  }
  if (positives.empty() || negatives.empty()) {
    throw DegenerateClassError("balance_with_gan needs both classes present");
  }
  const bool cancer_is_minority = positives.size() <= negatives.size();
  const std::vector<int>& minority_rows = cancer_is_minority ? positives : negatives;
  const int minority_label = cancer_is_minority ? kCancerLabel : kNonCancerLabel;
  int deficit = static_cast<int>(
      (cancer_is_minority ? negatives.size() : positives.size()) - minority_rows.size());
  if (deficit == 0) return train;

  const int d = train.grid.count;
  Eigen::MatrixXd raw(static_cast<Eigen::Index>(minority_rows.size()), d);
  for (std::size_t r = 0; r < minority_rows.size(); ++r) {
    const auto& values = train.records[minority_rows[r]].spectrum.values;
    for (int c = 0; c < d; ++c) raw(static_cast<Eigen::Index>(r), c) = values[c];
  }

  // The GAN sees raw spectra; the variability analysis runs on SNV scores.
  const GanTrainResult trained = train_gan(raw, gan_config);

  Eigen::MatrixXd snv_real(raw.rows(), d);
  for (Eigen::Index r = 0; r < raw.rows(); ++r) {
    Spectrum s;
    s.values.assign(raw.row(r).begin(), raw.row(r).end());
    const Spectrum normalized = snv(s);
    for (int c = 0; c < d; ++c) snv_real(r, c) = normalized.values[c];
  }
  const EllipseFilter filter = fit_ellipse(snv_real, filter_config);

  std::unordered_set<std::string> taken;
  taken.reserve(train.size());
  for (const LesionRecord& r : train.records) taken.insert(r.id);

  Dataset out = train;
  out.records.reserve(train.size() + deficit);
  Rng gen_rng(derive_seed(gan_config.seed, 0x67616eULL));
  int counter = 0;
  for (int round = 0; round < max_rounds && deficit > 0; ++round) {
    const Eigen::MatrixXd candidates = trained.model.generate(deficit, gen_rng);
    for (Eigen::Index i = 0; i < candidates.rows() && deficit > 0; ++i) {
      Spectrum s;
      s.values.assign(candidates.row(i).begin(), candidates.row(i).end());
      Spectrum normalized;
      try {
        normalized = snv(s);
      } catch (const ZeroVarianceError&) {
        continue;  // degenerate generator output; reject
      }
      Eigen::RowVectorXd score_row(d);
      for (int c = 0; c < d; ++c) score_row[c] = normalized.values[c];
      if (!filter.contains(score_row)) continue;
      for (;;) {
        char id[24];
        std::snprintf(id, sizeof(id), "gan_%04d", ++counter);
        if (taken.insert(id).second) {
          out.records.push_back(make_synthetic_record(id, minority_label, std::move(s)));
          break;
        }
      }
      --deficit;
    }
  }
  if (deficit > 0) {
    throw ConvergenceFailureError("GAN balancing still " + std::to_string(deficit) +
                                  " short after " + std::to_string(max_rounds) + " rounds");
  }
  return out;
}

std::string mlp_to_json(const Mlp& net) {
  nlohmann::json j;
  j["layers"] = nlohmann::json::array();
  for (const DenseLayer& layer : net.layers()) {
    nlohmann::json lj;
    lj["in"] = layer.weight.rows();
    lj["out"] = layer.weight.cols();
    switch (layer.activation) {
      case Activation::Linear: lj["activation"] = "linear"; break;
      case Activation::Relu: lj["activation"] = "relu"; break;
      case Activation::Sigmoid: lj["activation"] = "sigmoid"; break;
    }
    auto weights = nlohmann::json::array();
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
        weights.push_back(layer.weight(r, c));
      }
    }
    lj["weight"] = std::move(weights);
    auto bias = nlohmann::json::array();
    for (Eigen::Index c = 0; c < layer.bias.cols(); ++c) bias.push_back(layer.bias[c]);
    lj["bias"] = std::move(bias);
    j["layers"].push_back(std::move(lj));
  }
  return j.dump() + "\n";
}

Mlp mlp_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfigError(std::string("network JSON: ") + e.what());
  }
  Mlp net;
  try {
    for (const auto& lj : j.at("layers")) {
      DenseLayer layer;
      const int in = lj.at("in").get<int>();
      const int out = lj.at("out").get<int>();
      const std::string act = lj.at("activation").get<std::string>();
      if (act == "linear") layer.activation = Activation::Linear;
      else if (act == "relu") layer.activation = Activation::Relu;
      else if (act == "sigmoid") layer.activation = Activation::Sigmoid;
      else throw InvalidConfigError("network JSON: unknown activation '" + act + "'");
      const auto& w = lj.at("weight");
      const auto& b = lj.at("bias");
      if (static_cast<int>(w.size()) != in * out || static_cast<int>(b.size()) != out) {
        throw InvalidConfigError("network JSON: inconsistent layer sizes");
      }
      layer.weight.resize(in, out);
      int pos = 0;
      for (int r = 0; r < in; ++r) {
        for (int c = 0; c < out; ++c) layer.weight(r, c) = w[pos++].get<double>();
      }
      layer.bias.resize(out);
      for (int c = 0; c < out; ++c) layer.bias[c] = b[c].get<double>();
      net.layers().push_back(std::move(layer));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfigError(std::string("network JSON: ") + e.what());
  }
  return net;
}

void write_generator(const Mlp& generator, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << mlp_to_json(generator);
  if (!out) throw IoError("write to '" + path + "' failed");
}

Mlp read_generator(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return mlp_from_json(buf.str());
}

std::string training_log_to_csv(const std::vector<GanEpochLog>& log) {
  std::ostringstream out;
  out << "epoch,d_loss,g_loss\n";
  for (const GanEpochLog& e : log) {
    out << e.epoch << ',' << format_double(e.d_loss) << ',' << format_double(e.g_loss) << '\n';
  }
  return out.str();
}

void write_training_log(const std::vector<GanEpochLog>& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << training_log_to_csv(log);
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace nirspec
