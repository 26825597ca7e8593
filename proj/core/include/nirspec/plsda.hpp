#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nirspec/errors.hpp"

namespace nirspec {

/// PLS-DA: partial least squares regression onto the {0,1} class code,
/// thresholded at 0.5. Components are extracted NIPALS-style with X
/// deflation, so the training scores are mutually orthogonal.
struct PlsdaConfig {
  int n_components = 2;  // tuned in [1, 20]; 0 gives the majority predictor
  int max_iterations = 500;
  double tolerance = 1e-9;
  double decision_threshold = 0.5;
};

struct PlsdaModel {
  Eigen::VectorXd x_mean;
  double y_mean = 0.0;
  Eigen::MatrixXd weights;    // d x k
  Eigen::MatrixXd loadings;   // d x k
  Eigen::VectorXd y_loadings; // k
  Eigen::VectorXd coefficients;  // regression vector in original space
  double intercept = 0.0;
  double threshold = 0.5;
  int n_components = 0;          // components actually extracted
  Eigen::MatrixXd train_scores;  // n x k, orthogonal columns

  int n_features() const { return static_cast<int>(coefficients.size()); }
};

PlsdaModel plsda_fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                     const PlsdaConfig& config);

struct PlsdaPrediction {
  Eigen::VectorXd scores;   // x * b + intercept
  std::vector<int> labels;  // score >= threshold
};

PlsdaPrediction plsda_predict(const PlsdaModel& model, const Eigen::MatrixXd& x);

std::string plsda_to_json(const PlsdaModel& model);
PlsdaModel plsda_from_json(const std::string& text);

}  // namespace nirspec
