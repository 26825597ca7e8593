#pragma once

#include <span>
#include <vector>

#include "nirspec/errors.hpp"

namespace nirspec {

/// Binary confusion counts; the positive class is cancer (label 1).
struct ConfusionCounts {
  long tp = 0;
  long tn = 0;
  long fp = 0;
  long fn = 0;

  long total() const { return tp + tn + fp + fn; }
};

ConfusionCounts confusion(std::span<const int> y_true, std::span<const int> y_pred);

/// The five reported metrics plus specificity. Precision is TP/(TP+FP);
/// specificity TN/(TN+FP) is exposed separately. Ratios with a zero
/// denominator resolve to 0 and set degenerate_ratio.
struct MetricSet {
  double acc = 0.0;
  double bacc = 0.0;
  double recall = 0.0;
  double precision = 0.0;
  double f_score = 0.0;
  double specificity = 0.0;
  bool degenerate_ratio = false;
};

MetricSet metrics(const ConfusionCounts& counts);

}  // namespace nirspec
