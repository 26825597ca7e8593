#include "nirspec/ellipse.hpp"

#include <cmath>
#include <string>

namespace nirspec {

double chi2_quantile_2dof(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw InvalidConfigError("confidence must lie in (0, 1)");
  }
  return -2.0 * std::log(1.0 - confidence);
}

Eigen::Vector2d EllipseFilter::project(const Eigen::RowVectorXd& row) const {
  return ((row - mean.transpose()) * components).transpose();
}

double EllipseFilter::mahalanobis_sq(const Eigen::RowVectorXd& row) const {
  const Eigen::Vector2d u = project(row) - center;
  return u.dot(covariance_inv * u);
}

bool EllipseFilter::contains(const Eigen::RowVectorXd& row) const {
  return mahalanobis_sq(row) <= threshold;
}

EllipseFilter fit_ellipse(const Eigen::MatrixXd& data, const EllipseConfig& config) {
  if (config.n_components != 2) {
    throw InvalidConfigError("ellipse filter supports exactly 2 components");
  }
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  if (n < 3) throw InvalidConfigError("ellipse fit needs at least 3 samples");
  if (d < 2) throw InvalidConfigError("ellipse fit needs at least 2 dimensions");

  EllipseFilter f;
  f.confidence = config.confidence;
  f.threshold = chi2_quantile_2dof(config.confidence);
  f.mean = data.colwise().mean().transpose();

  const Eigen::MatrixXd centered = data.rowwise() - f.mean.transpose();
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw ZeroVarianceError("PCA eigendecomposition failed");
  }
  // Eigen orders eigenvalues ascending; take the two largest, sign-fixed so
  // the largest-magnitude loading is positive.
  f.components.resize(d, 2);
  for (int c = 0; c < 2; ++c) {
    Eigen::VectorXd v = solver.eigenvectors().col(d - 1 - c);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0.0) v = -v;
    f.components.col(c) = v;
  }

  const Eigen::MatrixXd scores = centered * f.components;
  f.center = scores.colwise().mean().transpose();
  const Eigen::MatrixXd score_centered = scores.rowwise() - f.center.transpose();
  f.covariance =
      (score_centered.transpose() * score_centered) / static_cast<double>(n - 1);

  const double det = f.covariance.determinant();
  const double scale = f.covariance.diagonal().maxCoeff();
  if (!(det > 1e-12 * std::max(scale * scale, 1e-300))) {
    throw ZeroVarianceError("score covariance is singular (determinant " +
                            std::to_string(det) + ")");
  }
  f.covariance_inv = f.covariance.inverse();
  return f;
}

std::vector<bool> inside_mask(const Eigen::MatrixXd& rows, const EllipseFilter& filter) {
  std::vector<bool> mask(rows.rows());
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    mask[i] = filter.contains(rows.row(i));
  }
  return mask;
}

Eigen::MatrixXd filter_generated(const Eigen::MatrixXd& generated, const EllipseFilter& filter) {
  const std::vector<bool> mask = inside_mask(generated, filter);
  Eigen::Index kept = 0;
  for (bool m : mask) kept += m ? 1 : 0;
  Eigen::MatrixXd out(kept, generated.cols());
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < generated.rows(); ++i) {
    if (mask[i]) out.row(row++) = generated.row(i);
  }
  return out;
}

}  // namespace nirspec
