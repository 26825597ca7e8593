#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nirspec/types.hpp"

namespace nirspec {

struct SmoteConfig {
  int k_neighbors = 5;
  RngSeed seed;
};

/// Provenance of one synthetic row: synthetic = base + gap * (neighbor - base).
struct SmoteProvenance {
  int base = 0;
  int neighbor = 0;
  double gap = 0.0;
};

struct SmoteResult {
  Eigen::MatrixXd synthetic;
  std::vector<SmoteProvenance> provenance;
};

/// Generates n_to_generate synthetic rows from the minority matrix. Each row
/// interpolates a uniformly chosen base row toward one of its k nearest
/// neighbors (Euclidean, ties broken by row index) with a uniform gap in
/// [0, 1]. Requires k_neighbors < number of minority rows.
SmoteResult smote(const Eigen::MatrixXd& minority, int n_to_generate, const SmoteConfig& config);

/// Space in which nearest neighbors are measured. Interpolation always runs
/// on the spectra as stored, so synthetic records stay valid dataset rows;
/// Snv measures distances on SNV-normalized copies instead (used by the
/// pipeline arms whose classifier consumes SNV-derived inputs).
enum class SmoteMetricSpace { Stored, Snv };

/// Oversamples the minority class until both classes have equal counts.
/// Originals are untouched; synthetic records are appended with ids
/// "smote_0001"... and the synthetic flag set. An already balanced dataset
/// is returned unchanged.
Dataset balance_with_smote(const Dataset& train, SmoteMetricSpace space, const SmoteConfig& config);

}  // namespace nirspec
