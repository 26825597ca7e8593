#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nirspec/types.hpp"

namespace nirspec {

/// Gradient-based one-side sampling: keep the top_fraction of rows by
/// absolute gradient, plus a random_fraction drawn uniformly from the rest
/// whose gradient statistics are amplified by (1 - a) / b.
struct GossConfig {
  double top_fraction = 0.2;
  double random_fraction = 0.1;
};

/// Newton-boosted binary classifier on weighted logistic loss. Trees grow
/// best-first (leaf-wise), bounded by max_depth and max_leaves; split gain
/// is the second-order formula with l2_lambda, and leaf weights apply L1
/// soft-thresholding to the gradient sum. The stated ranges are the tuning
/// search space; direct calls may use any sane value.
struct GbdtConfig {
  int n_trees = 100;                // [10, 100] when tuned
  double learning_rate = 0.1;       // [0.01, 1]
  int max_depth = 6;                // [1, 15]
  int max_leaves = 31;              // [20, 5000]
  double class_weight = 1.0;        // [1, 25]; multiplies positive-class g and h
  double subsample = 1.0;           // (0, 1]; ignored when GOSS is on
  double colsample_by_tree = 1.0;   // [0.5, 1]
  double l1_alpha = 0.0;            // [0, 20]
  double l2_lambda = 1.0;           // [0, 20]
  std::optional<GossConfig> goss;
  int min_samples_leaf = 1;
  RngSeed seed;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf weight

  bool is_leaf() const { return feature < 0; }
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(const Eigen::RowVectorXd& row) const;
  double predict_row(const Eigen::MatrixXd& x, Eigen::Index row) const;
  int leaf_count() const;
};

struct BoostedEnsemble {
  double base_score = 0.0;  // prior log-odds of the weighted class ratio
  double learning_rate = 0.1;
  int n_features = 0;
  std::vector<RegressionTree> trees;
};

/// Regularized leaf weight -soft_threshold(G, alpha) / (H + lambda).
double gbdt_leaf_weight(double g_sum, double h_sum, double l1_alpha, double l2_lambda);

/// Split gain 0.5 * [GL^2/(HL+l) + GR^2/(HR+l) - (GL+GR)^2/(HL+HR+l)].
double gbdt_split_gain(double gl, double hl, double gr, double hr, double l2_lambda);

BoostedEnsemble gbdt_fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                         const GbdtConfig& config);

/// Margin (log-odds) using the first `first_trees` trees (-1 = all).
Eigen::VectorXd gbdt_predict_margin(const BoostedEnsemble& ensemble, const Eigen::MatrixXd& x,
                                    int first_trees = -1);

/// sigmoid(margin), strictly inside (0, 1).
Eigen::VectorXd gbdt_predict_proba(const BoostedEnsemble& ensemble, const Eigen::MatrixXd& x,
                                   int first_trees = -1);

struct GossSample {
  std::vector<int> indices;          // ascending
  std::vector<double> multipliers;   // aligned with indices
};

GossSample goss_sample(const std::vector<double>& gradients, double top_fraction,
                       double random_fraction, RngSeed seed);

/// Weighted logistic loss (mean over samples) of the first `first_trees`
/// trees; positive-class samples weigh class_weight.
double gbdt_training_loss(const BoostedEnsemble& ensemble, const Eigen::MatrixXd& x,
                          const std::vector<int>& y, double class_weight, int first_trees = -1);

std::string ensemble_to_json(const BoostedEnsemble& ensemble);
BoostedEnsemble ensemble_from_json(const std::string& text);

}  // namespace nirspec
