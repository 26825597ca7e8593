#include "nirspec/mlp.hpp"

#include <cmath>

#include "nirspec/errors.hpp"

namespace nirspec {

namespace {

Eigen::MatrixXd apply_activation(Activation act, const Eigen::MatrixXd& z) {
  switch (act) {
    case Activation::Linear:
      return z;
    case Activation::Relu:
      return z.cwiseMax(0.0);
    case Activation::Sigmoid:
      return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
  }
  throw InvalidConfigError("unknown activation");
}

/// Derivative expressed through the activation output a = act(z).
Eigen::MatrixXd activation_derivative(Activation act, const Eigen::MatrixXd& a) {
  switch (act) {
    case Activation::Linear:
      return Eigen::MatrixXd::Ones(a.rows(), a.cols());
    case Activation::Relu:
      return a.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
    case Activation::Sigmoid:
      return a.array() * (1.0 - a.array());
  }
  throw InvalidConfigError("unknown activation");
}

}  // namespace

Mlp::Mlp(int input_dim, const std::vector<int>& hidden_sizes, int output_dim,
         Activation hidden_activation, Activation output_activation, Rng& rng) {
  if (input_dim < 1 || output_dim < 1) throw InvalidConfigError("layer sizes must be >= 1");
  for (int h : hidden_sizes) {
    if (h < 1) throw InvalidConfigError("layer sizes must be >= 1");
  }
  std::vector<int> dims;
  dims.push_back(input_dim);
  dims.insert(dims.end(), hidden_sizes.begin(), hidden_sizes.end());
  dims.push_back(output_dim);

  layers_.resize(dims.size() - 1);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const int fan_in = dims[l];
    const int fan_out = dims[l + 1];
    const bool last = l + 1 == layers_.size();
    layers_[l].activation = last ? output_activation : hidden_activation;
    const double scale = (layers_[l].activation == Activation::Relu)
                             ? std::sqrt(2.0 / fan_in)
                             : std::sqrt(1.0 / fan_in);
    layers_[l].weight.resize(fan_in, fan_out);
    for (int i = 0; i < fan_in; ++i) {
      for (int j = 0; j < fan_out; ++j) layers_[l].weight(i, j) = scale * rng.gaussian();
    }
    layers_[l].bias = Eigen::RowVectorXd::Zero(fan_out);
  }
}

int Mlp::input_dim() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.front().weight.rows());
}

int Mlp::output_dim() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.back().weight.cols());
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd a = x;
  for (const DenseLayer& layer : layers_) {
    Eigen::MatrixXd z = a * layer.weight;
    z.rowwise() += layer.bias;
    a = apply_activation(layer.activation, z);
  }
  return a;
}

Eigen::MatrixXd Mlp::forward_cached(const Eigen::MatrixXd& x, ForwardCache& cache) const {
  cache.inputs.clear();
  cache.activations.clear();
  Eigen::MatrixXd a = x;
  for (const DenseLayer& layer : layers_) {
    cache.inputs.push_back(a);
    Eigen::MatrixXd z = a * layer.weight;
    z.rowwise() += layer.bias;
    a = apply_activation(layer.activation, z);
    cache.activations.push_back(a);
  }
  return a;
}

void Mlp::Gradients::setZero() {
  for (auto& w : weight) w.setZero();
  for (auto& b : bias) b.setZero();
}

Mlp::Gradients Mlp::make_gradients() const {
  Gradients g;
  g.weight.reserve(layers_.size());
  g.bias.reserve(layers_.size());
  for (const DenseLayer& layer : layers_) {
    g.weight.push_back(Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols()));
    g.bias.push_back(Eigen::RowVectorXd::Zero(layer.bias.cols()));
  }
  return g;
}

Eigen::MatrixXd Mlp::backward(const ForwardCache& cache, const Eigen::MatrixXd& grad_output,
                              Gradients& grads) const {
  Eigen::MatrixXd grad = grad_output;
  for (int l = static_cast<int>(layers_.size()) - 1; l >= 0; --l) {
    const DenseLayer& layer = layers_[l];
    const Eigen::MatrixXd dz =
        grad.cwiseProduct(activation_derivative(layer.activation, cache.activations[l]));
    grads.weight[l] += cache.inputs[l].transpose() * dz;
    grads.bias[l] += dz.colwise().sum();
    grad = dz * layer.weight.transpose();
  }
  return grad;
}

int Mlp::parameter_count() const {
  int n = 0;
  for (const DenseLayer& layer : layers_) {
    n += static_cast<int>(layer.weight.size() + layer.bias.size());
  }
  return n;
}

Eigen::VectorXd Mlp::parameters() const {
  Eigen::VectorXd flat(parameter_count());
  int pos = 0;
  for (const DenseLayer& layer : layers_) {
    for (Eigen::Index i = 0; i < layer.weight.size(); ++i) flat[pos++] = layer.weight.data()[i];
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) flat[pos++] = layer.bias[i];
  }
  return flat;
}

void Mlp::set_parameters(const Eigen::VectorXd& flat) {
  if (flat.size() != parameter_count()) throw InvalidConfigError("parameter vector size mismatch");
  int pos = 0;
  for (DenseLayer& layer : layers_) {
    for (Eigen::Index i = 0; i < layer.weight.size(); ++i) layer.weight.data()[i] = flat[pos++];
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias[i] = flat[pos++];
  }
}

Eigen::VectorXd Mlp::flatten(const Gradients& grads) {
  int n = 0;
  for (std::size_t l = 0; l < grads.weight.size(); ++l) {
    n += static_cast<int>(grads.weight[l].size() + grads.bias[l].size());
  }
  Eigen::VectorXd flat(n);
  int pos = 0;
  for (std::size_t l = 0; l < grads.weight.size(); ++l) {
    for (Eigen::Index i = 0; i < grads.weight[l].size(); ++i) {
      flat[pos++] = grads.weight[l].data()[i];
    }
    for (Eigen::Index i = 0; i < grads.bias[l].size(); ++i) flat[pos++] = grads.bias[l][i];
  }
  return flat;
}

SgdMomentum::SgdMomentum(const Mlp& model, double learning_rate, double momentum)
    : learning_rate_(learning_rate), momentum_(momentum), velocity_(model.make_gradients()) {}

void SgdMomentum::step(Mlp& model, const Mlp::Gradients& grads) {
  auto& layers = model.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    velocity_.weight[l] = momentum_ * velocity_.weight[l] - learning_rate_ * grads.weight[l];
    velocity_.bias[l] = momentum_ * velocity_.bias[l] - learning_rate_ * grads.bias[l];
    layers[l].weight += velocity_.weight[l];
    layers[l].bias += velocity_.bias[l];
  }
}

}  // namespace nirspec
