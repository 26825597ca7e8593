#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nirspec/rng.hpp"

namespace nirspec {

/// Scalar model output for one feature row.
using Predictor = std::function<double(const Eigen::RowVectorXd&)>;

/// n_permutations = 0 enumerates every permutation against every background
/// row (exact Shapley values; feature count is capped at 8).
struct ShapleyConfig {
  int n_permutations = 128;
  RngSeed seed;
};

struct ShapleyEstimate {
  Eigen::MatrixXd attributions;  // samples x features
  double baseline = 0.0;         // mean model output over the background set
  int n_permutations = 0;        // 0 marks exhaustive enumeration
  std::uint64_t seed = 0;
};

/// Permutation-sampling Shapley attributions: for each sample and sampled
/// (permutation, background row) pair, features switch from the background
/// value to the sample's value in permutation order and the output deltas
/// are averaged per feature.
ShapleyEstimate shapley_attributions(const Predictor& predict,
                                     const Eigen::MatrixXd& background,
                                     const Eigen::MatrixXd& samples,
                                     const ShapleyConfig& config = {});

struct FeatureImportance {
  int feature = 0;
  std::string name;
  double importance = 0.0;  // mean |attribution| over samples
};

/// Descending by importance; ties keep the lower feature index.
std::vector<FeatureImportance> importance_ranking(const ShapleyEstimate& estimate,
                                                  const std::vector<std::string>& names);

std::string attributions_to_csv(const ShapleyEstimate& estimate,
                                const std::vector<std::string>& names,
                                const std::vector<std::string>& row_ids);
std::string ranking_to_csv(const std::vector<FeatureImportance>& ranking);

}  // namespace nirspec
