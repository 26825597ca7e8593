#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nirspec/errors.hpp"

namespace nirspec {

struct EllipseConfig {
  int n_components = 2;  // only 2 is supported
  double confidence = 0.95;
};

/// Chi-squared quantile for 2 degrees of freedom, from the closed-form CDF
/// 1 - exp(-x/2): quantile(c) = -2 ln(1 - c).
double chi2_quantile_2dof(double confidence);

/// Confidence ellipse in the 2-component PCA score space of the fitted data.
/// A point is inside when the squared Mahalanobis distance of its score from
/// the fitted center is at most the chi-squared quantile.
struct EllipseFilter {
  Eigen::VectorXd mean;           // original-space mean
  Eigen::MatrixXd components;     // d x 2 principal directions
  Eigen::Vector2d center;         // score-space center
  Eigen::Matrix2d covariance;     // score-space covariance
  Eigen::Matrix2d covariance_inv;
  double confidence = 0.95;
  double threshold = 0.0;

  Eigen::Vector2d project(const Eigen::RowVectorXd& row) const;
  double mahalanobis_sq(const Eigen::RowVectorXd& row) const;
  bool contains(const Eigen::RowVectorXd& row) const;
};

/// PCA via eigendecomposition of the sample covariance (n-1 denominator).
/// Expects the caller to have normalized rows beforehand (the augmentation
/// pipeline uses SNV). Requires >= 3 rows and >= 2 columns.
EllipseFilter fit_ellipse(const Eigen::MatrixXd& data, const EllipseConfig& config = {});

std::vector<bool> inside_mask(const Eigen::MatrixXd& rows, const EllipseFilter& filter);

/// Retains exactly the rows whose scores fall inside the ellipse.
Eigen::MatrixXd filter_generated(const Eigen::MatrixXd& generated, const EllipseFilter& filter);

}  // namespace nirspec
