#include "nirspec/smote.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <unordered_set>

#include "nirspec/rng.hpp"
#include "nirspec/snv.hpp"

namespace nirspec {

namespace {

/// k nearest neighbor indices per row (self excluded), distance ties broken
/// by lower row index.
std::vector<std::vector<int>> nearest_neighbors(const Eigen::MatrixXd& x, int k) {
  const int n = static_cast<int>(x.rows());
  std::vector<std::vector<int>> nn(n);
  std::vector<std::pair<double, int>> dist(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      dist[j] = {(x.row(i) - x.row(j)).squaredNorm(), j};
    }
    dist[i].first = std::numeric_limits<double>::infinity();  // exclude self
    std::sort(dist.begin(), dist.end());
    nn[i].reserve(k);
    for (int j = 0; j < k; ++j) nn[i].push_back(dist[j].second);
  }
  return nn;
}

std::string fresh_synthetic_id(const std::unordered_set<std::string>& taken, int& counter) {
  for (;;) {
    char id[24];
    std::snprintf(id, sizeof(id), "smote_%04d", ++counter);
    if (!taken.count(id)) return id;
  }
}

}  // namespace

SmoteResult smote(const Eigen::MatrixXd& minority, int n_to_generate, const SmoteConfig& config) {
  const int n = static_cast<int>(minority.rows());
  if (config.k_neighbors < 1) throw InvalidConfigError("k_neighbors must be >= 1");
  if (config.k_neighbors >= n) {
    throw InvalidConfigError("k_neighbors (" + std::to_string(config.k_neighbors) +
                             ") must be below the minority class size (" + std::to_string(n) + ")");
  }
  if (n_to_generate < 0) throw InvalidConfigError("n_to_generate must be >= 0");

  const auto nn = nearest_neighbors(minority, config.k_neighbors);

  SmoteResult result;
  result.synthetic.resize(n_to_generate, minority.cols());
  result.provenance.resize(n_to_generate);
  Rng rng(config.seed);
  for (int s = 0; s < n_to_generate; ++s) {
    const int base = static_cast<int>(rng.below(n));
    const int neighbor = nn[base][rng.below(config.k_neighbors)];
    const double gap = rng.uniform();
    result.synthetic.row(s) =
        minority.row(base) + gap * (minority.row(neighbor) - minority.row(base));
    result.provenance[s] = {base, neighbor, gap};
  }
  return result;
}

Dataset balance_with_smote(const Dataset& train, SmoteMetricSpace space, const SmoteConfig& config) {
  if (train.empty()) throw EmptyDatasetError("balance_with_smote over an empty dataset");

  std::vector<int> positives, negatives;
  for (int i = 0; i < static_cast<int>(train.size()); ++i) {
    (train.records[i].label == kCancerLabel ? positives : negatives).push_back(i);
  }
  if (positives.empty() || negatives.empty()) {
    throw DegenerateClassError("balance_with_smote needs both classes present");
  }
  const bool cancer_is_minority = positives.size() <= negatives.size();
  const std::vector<int>& minority_rows = cancer_is_minority ? positives : negatives;
  const int minority_label = cancer_is_minority ? kCancerLabel : kNonCancerLabel;
  const int deficit = static_cast<int>(
      (cancer_is_minority ? negatives.size() : positives.size()) - minority_rows.size());
  if (deficit == 0) return train;

  const int d = train.grid.count;
  Eigen::MatrixXd stored(static_cast<Eigen::Index>(minority_rows.size()), d);
  for (std::size_t r = 0; r < minority_rows.size(); ++r) {
    const auto& values = train.records[minority_rows[r]].spectrum.values;
    for (int c = 0; c < d; ++c) stored(static_cast<Eigen::Index>(r), c) = values[c];
  }

  // Neighbor search may run in SNV space; interpolation always uses the
  // stored spectra with the same (base, neighbor, gap) triple.
  SmoteResult result;
  if (space == SmoteMetricSpace::Snv) {
    Eigen::MatrixXd metric(stored.rows(), d);
    for (Eigen::Index r = 0; r < stored.rows(); ++r) {
      Spectrum s;
      s.values.assign(stored.row(r).begin(), stored.row(r).end());
      const Spectrum normalized = snv(s);
      for (int c = 0; c < d; ++c) metric(r, c) = normalized.values[c];
    }
    result.provenance = smote(metric, deficit, config).provenance;
    result.synthetic.resize(deficit, d);
    for (int s = 0; s < deficit; ++s) {
      const auto& p = result.provenance[s];
      result.synthetic.row(s) =
          stored.row(p.base) + p.gap * (stored.row(p.neighbor) - stored.row(p.base));
    }
  } else {
    result = smote(stored, deficit, config);
  }

  std::unordered_set<std::string> taken;
  taken.reserve(train.size());
  for (const LesionRecord& r : train.records) taken.insert(r.id);

  Dataset out = train;
  out.records.reserve(train.size() + deficit);
  int counter = 0;
  for (int s = 0; s < deficit; ++s) {
    Spectrum spectrum;
    spectrum.values.assign(result.synthetic.row(s).begin(), result.synthetic.row(s).end());
    out.records.push_back(make_synthetic_record(fresh_synthetic_id(taken, counter),
                                                minority_label, std::move(spectrum)));
  }
  return out;
}

}  // namespace nirspec
