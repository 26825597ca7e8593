#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nirspec/rng.hpp"

namespace nirspec {

enum class Activation { Linear, Relu, Sigmoid };

/// Fully connected layer over row-major batches: z = x * weight + bias.
struct DenseLayer {
  Eigen::MatrixXd weight;   // in x out
  Eigen::RowVectorXd bias;  // 1 x out
  Activation activation = Activation::Linear;
};

/// Minimal multilayer perceptron with hand-rolled backpropagation. Layer
/// shapes and activations are fixed at construction; training state (SGD
/// momentum velocities) lives in SgdMomentum.
class Mlp {
public:
  Mlp() = default;

  /// He-style init for ReLU layers, 1/sqrt(fan_in) otherwise, deterministic
  /// under the given rng.
  Mlp(int input_dim, const std::vector<int>& hidden_sizes, int output_dim,
      Activation hidden_activation, Activation output_activation, Rng& rng);

  int input_dim() const;
  int output_dim() const;
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }

  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;

  struct ForwardCache {
    std::vector<Eigen::MatrixXd> inputs;       // input to each layer
    std::vector<Eigen::MatrixXd> activations;  // output of each layer
  };
  Eigen::MatrixXd forward_cached(const Eigen::MatrixXd& x, ForwardCache& cache) const;

  struct Gradients {
    std::vector<Eigen::MatrixXd> weight;
    std::vector<Eigen::RowVectorXd> bias;
    void setZero();
  };
  Gradients make_gradients() const;

  /// Backpropagates d(loss)/d(output); accumulates parameter gradients and
  /// returns d(loss)/d(input).
  Eigen::MatrixXd backward(const ForwardCache& cache, const Eigen::MatrixXd& grad_output,
                           Gradients& grads) const;

  /// Flat parameter access, used by finite-difference gradient checks.
  int parameter_count() const;
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& flat);
  static Eigen::VectorXd flatten(const Gradients& grads);

private:
  std::vector<DenseLayer> layers_;
};

/// Plain stochastic gradient descent with momentum: v = m*v - lr*g; w += v.
class SgdMomentum {
public:
  SgdMomentum(const Mlp& model, double learning_rate, double momentum = 0.9);
  void step(Mlp& model, const Mlp::Gradients& grads);

private:
  double learning_rate_;
  double momentum_;
  Mlp::Gradients velocity_;
};

}  // namespace nirspec
