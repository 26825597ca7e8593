#include "nirspec/metrics.hpp"

#include <string>

namespace nirspec {

ConfusionCounts confusion(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw InvalidConfigError("confusion: length mismatch (" + std::to_string(y_true.size()) +
                             " vs " + std::to_string(y_pred.size()) + ")");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i];
    const int p = y_pred[i];
    if ((t != 0 && t != 1) || (p != 0 && p != 1)) {
      throw InvalidConfigError("confusion: labels must be 0 or 1");
    }
    if (t == 1) {
      (p == 1 ? c.tp : c.fn) += 1;
    } else {
      (p == 0 ? c.tn : c.fp) += 1;
    }
  }
  return c;
}

namespace {

double ratio(long num, long den, bool& degenerate) {
  if (den == 0) {
    degenerate = true;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MetricSet metrics(const ConfusionCounts& c) {
  if (c.total() <= 0) throw InvalidConfigError("metrics over zero samples");
  MetricSet m;
  m.acc = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  m.recall = ratio(c.tp, c.tp + c.fn, m.degenerate_ratio);
  m.specificity = ratio(c.tn, c.tn + c.fp, m.degenerate_ratio);
  m.bacc = 0.5 * (m.recall + m.specificity);
  m.precision = ratio(c.tp, c.tp + c.fp, m.degenerate_ratio);
  const double rp = m.recall + m.precision;
  m.f_score = rp > 0.0 ? 2.0 * m.recall * m.precision / rp : 0.0;
  if (rp == 0.0) m.degenerate_ratio = true;
  return m;
}

}  // namespace nirspec
