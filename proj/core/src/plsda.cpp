#include "nirspec/plsda.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace nirspec {

PlsdaModel plsda_fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                     const PlsdaConfig& config) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (n < 2) throw InvalidConfigError("plsda_fit needs at least 2 samples");
  if (static_cast<Eigen::Index>(y.size()) != n) {
    throw InvalidConfigError("label vector size mismatch");
  }
  if (config.n_components < 0) throw InvalidConfigError("n_components must be >= 0");
  const Eigen::Index max_rank = std::min<Eigen::Index>(n - 1, d);
  if (config.n_components > max_rank) {
    throw InvalidConfigError("n_components " + std::to_string(config.n_components) +
                             " exceeds min(samples-1, features) = " + std::to_string(max_rank));
  }
  if (config.max_iterations < 1) throw InvalidConfigError("max_iterations must be >= 1");
  if (!(config.tolerance > 0.0)) throw InvalidConfigError("tolerance must be positive");

  PlsdaModel model;
  model.threshold = config.decision_threshold;
  model.x_mean = x.colwise().mean().transpose();
  double y_sum = 0.0;
  for (int label : y) {
    if (label != 0 && label != 1) throw InvalidConfigError("labels must be 0 or 1");
    y_sum += label;
  }
  model.y_mean = y_sum / static_cast<double>(n);

  Eigen::MatrixXd xc = x.rowwise() - model.x_mean.transpose();
  Eigen::VectorXd yc(n);
  for (Eigen::Index i = 0; i < n; ++i) yc[i] = y[i] - model.y_mean;

  const double x_scale = std::max(xc.norm(), 1e-300);
  const double y_scale = std::max(yc.norm(), 1e-300);

  model.weights.resize(d, config.n_components);
  model.loadings.resize(d, config.n_components);
  model.y_loadings.resize(config.n_components);
  model.train_scores.resize(n, config.n_components);

  int k = 0;
  for (; k < config.n_components; ++k) {
    if (yc.norm() < config.tolerance * y_scale || xc.norm() < config.tolerance * x_scale) {
      break;  // response or predictors exhausted
    }
    // NIPALS inner loop. With a single response column the weight direction
    // X^T y is stationary after the first pass; the loop still guards with
    // max_iterations.
    Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd t(n);
    bool converged = false;
    for (int iter = 0; iter < config.max_iterations; ++iter) {
      Eigen::VectorXd w_new = xc.transpose() * yc;
      const double w_norm = w_new.norm();
      if (w_norm < config.tolerance * x_scale * y_scale) {
        w.setZero();
        converged = true;
        break;
      }
      w_new /= w_norm;
      t = xc * w_new;
      if ((w_new - w).norm() < config.tolerance) {
        w = w_new;
        converged = true;
        break;
      }
      w = w_new;
    }
    if (!converged) {
      throw ConvergenceFailureError("PLS component " + std::to_string(k + 1) +
                                    " did not converge in " +
                                    std::to_string(config.max_iterations) + " iterations");
    }
    if (w.isZero(0.0)) break;  // no covariance left to model

    t = xc * w;
    const double tt = t.squaredNorm();
    if (tt < config.tolerance * x_scale * x_scale) break;
    const Eigen::VectorXd p = xc.transpose() * t / tt;
    const double q = yc.dot(t) / tt;

    model.weights.col(k) = w;
    model.loadings.col(k) = p;
    model.y_loadings[k] = q;
    model.train_scores.col(k) = t;

    xc -= t * p.transpose();
    yc -= q * t;
  }

  model.n_components = k;
  model.weights.conservativeResize(d, k);
  model.loadings.conservativeResize(d, k);
  model.y_loadings.conservativeResize(k);
  model.train_scores.conservativeResize(n, k);

  if (k == 0) {
    model.coefficients = Eigen::VectorXd::Zero(d);
    model.intercept = model.y_mean;
  } else {
    // b = W (P^T W)^{-1} q; P^T W is upper triangular with unit diagonal.
    const Eigen::MatrixXd pw = model.loadings.transpose() * model.weights;
    const Eigen::VectorXd beta = pw.colPivHouseholderQr().solve(model.y_loadings);
    model.coefficients = model.weights * beta;
    model.intercept = model.y_mean - model.x_mean.dot(model.coefficients);
  }
  return model;
}

PlsdaPrediction plsda_predict(const PlsdaModel& model, const Eigen::MatrixXd& x) {
  if (x.cols() != model.coefficients.size()) {
    throw GridMismatchError("feature width " + std::to_string(x.cols()) +
                            " does not match training width " +
                            std::to_string(model.coefficients.size()));
  }
  PlsdaPrediction pred;
  pred.scores = (x * model.coefficients).array() + model.intercept;
  pred.labels.resize(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    pred.labels[i] = pred.scores[i] >= model.threshold ? 1 : 0;
  }
  return pred;
}

namespace {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  auto arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& arr) {
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v[i] = arr[i].get<double>();
  return v;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows) {
  const Eigen::Index r = rows.size();
  const Eigen::Index c = r > 0 ? rows[0].size() : 0;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
  }
  return m;
}

}  // namespace

std::string plsda_to_json(const PlsdaModel& model) {
  nlohmann::json j;
  j["x_mean"] = vector_to_json(model.x_mean);
  j["y_mean"] = model.y_mean;
  j["weights"] = matrix_to_json(model.weights);
  j["loadings"] = matrix_to_json(model.loadings);
  j["y_loadings"] = vector_to_json(model.y_loadings);
  j["coefficients"] = vector_to_json(model.coefficients);
  j["intercept"] = model.intercept;
  j["threshold"] = model.threshold;
  j["n_components"] = model.n_components;
  return j.dump() + "\n";
}

PlsdaModel plsda_from_json(const std::string& text) {
  PlsdaModel model;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    model.x_mean = vector_from_json(j.at("x_mean"));
    model.y_mean = j.at("y_mean").get<double>();
    model.weights = matrix_from_json(j.at("weights"));
    model.loadings = matrix_from_json(j.at("loadings"));
    model.y_loadings = vector_from_json(j.at("y_loadings"));
    model.coefficients = vector_from_json(j.at("coefficients"));
    model.intercept = j.at("intercept").get<double>();
    model.threshold = j.at("threshold").get<double>();
    model.n_components = j.at("n_components").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfigError(std::string("plsda JSON: ") + e.what());
  }
  return model;
}

}  // namespace nirspec
