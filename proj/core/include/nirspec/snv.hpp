#pragma once

#include "nirspec/types.hpp"

namespace nirspec {

/// Standard Normal Variate: per-sample centering and scaling,
/// (y_i - mean) / sqrt(sum (y_i - mean)^2 / (n - 1)).
/// The denominator uses n-1. Output has mean 0 and sample std 1; applying
/// snv twice is a fixed point. Length-agnostic: any spectrum with >= 2
/// points is accepted.
struct SnvConfig {
  /// Sample variance at or below this is treated as zero-variance.
  double variance_epsilon = 1e-12;
};

Spectrum snv(const Spectrum& spectrum, const SnvConfig& config = {});

/// Applies snv to every record independently; ids, labels and order are
/// preserved. A zero-variance record aborts with its id in the message.
Dataset snv_dataset(const Dataset& dataset, const SnvConfig& config = {});

}  // namespace nirspec
