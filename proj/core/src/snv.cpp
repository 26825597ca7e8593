#include "nirspec/snv.hpp"

#include <cmath>

namespace nirspec {

Spectrum snv(const Spectrum& spectrum, const SnvConfig& config) {
  const std::size_t n = spectrum.size();
  if (n < 2) throw InvalidConfigError("snv needs at least 2 points");
  if (!(config.variance_epsilon > 0.0)) {
    throw InvalidConfigError("variance_epsilon must be positive");
  }

  double mean = 0.0;
  for (double v : spectrum.values) mean += v;
  mean /= static_cast<double>(n);

  double ss = 0.0;
  for (double v : spectrum.values) {
    const double d = v - mean;
    ss += d * d;
  }
  const double variance = ss / static_cast<double>(n - 1);
  if (variance <= config.variance_epsilon) {
    throw ZeroVarianceError("spectrum has (near-)zero variance");
  }

  const double inv_std = 1.0 / std::sqrt(variance);
  Spectrum out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = (spectrum.values[i] - mean) * inv_std;
  }
  return out;
}

Dataset snv_dataset(const Dataset& dataset, const SnvConfig& config) {
  Dataset out;
  out.grid = dataset.grid;
  out.records.reserve(dataset.size());
  for (const LesionRecord& r : dataset.records) {
    LesionRecord nr = r;
    try {
      nr.spectrum = snv(r.spectrum, config);
    } catch (const ZeroVarianceError&) {
      throw ZeroVarianceError("record '" + r.id + "' has (near-)zero variance");
    }
    out.records.push_back(std::move(nr));
  }
  return out;
}

}  // namespace nirspec
