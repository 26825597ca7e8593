#include "nirspec/shapley.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "nirspec/dataset_io.hpp"
#include "nirspec/errors.hpp"

namespace nirspec {

namespace {

void walk_permutation(const Predictor& predict, const Eigen::RowVectorXd& sample,
                      const Eigen::RowVectorXd& background_row, const std::vector<int>& order,
                      Eigen::RowVectorXd& accumulator) {
  Eigen::RowVectorXd current = background_row;
  double previous = predict(current);
  for (int feature : order) {
    current[feature] = sample[feature];
    const double value = predict(current);
    accumulator[feature] += value - previous;
    previous = value;
  }
}

}  // namespace

ShapleyEstimate shapley_attributions(const Predictor& predict,
                                     const Eigen::MatrixXd& background,
                                     const Eigen::MatrixXd& samples,
                                     const ShapleyConfig& config) {
  if (background.rows() == 0) throw InvalidConfigError("background set is empty");
  if (samples.rows() == 0) throw InvalidConfigError("no samples to explain");
  if (background.cols() != samples.cols()) {
    throw InvalidConfigError("background/sample feature width mismatch");
  }
  if (config.n_permutations < 0) throw InvalidConfigError("n_permutations must be >= 0");
  const int d = static_cast<int>(samples.cols());
  const bool exhaustive = config.n_permutations == 0;
  if (exhaustive && d > 8) {
    throw InvalidConfigError("exhaustive enumeration is capped at 8 features, got " +
                             std::to_string(d));
  }

  ShapleyEstimate estimate;
  estimate.n_permutations = config.n_permutations;
  estimate.seed = config.seed.value;
  estimate.attributions.setZero(samples.rows(), d);

  double baseline = 0.0;
  for (Eigen::Index b = 0; b < background.rows(); ++b) {
    baseline += predict(background.row(b));
  }
  estimate.baseline = baseline / static_cast<double>(background.rows());

  for (Eigen::Index s = 0; s < samples.rows(); ++s) {
    const Eigen::RowVectorXd sample = samples.row(s);
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(d);
    long walks = 0;
    if (exhaustive) {
      std::vector<int> order(d);
      std::iota(order.begin(), order.end(), 0);
      do {
        for (Eigen::Index b = 0; b < background.rows(); ++b) {
          walk_permutation(predict, sample, background.row(b), order, acc);
          ++walks;
        }
      } while (std::next_permutation(order.begin(), order.end()));
    } else {
      Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(s)));
      std::vector<int> order(d);
      std::iota(order.begin(), order.end(), 0);
      for (int p = 0; p < config.n_permutations; ++p) {
        rng.shuffle(order);
        const Eigen::Index b = static_cast<Eigen::Index>(rng.below(background.rows()));
        walk_permutation(predict, sample, background.row(b), order, acc);
        ++walks;
      }
    }
    estimate.attributions.row(s) = acc / static_cast<double>(walks);
  }
  return estimate;
}

std::vector<FeatureImportance> importance_ranking(const ShapleyEstimate& estimate,
                                                  const std::vector<std::string>& names) {
  const int d = static_cast<int>(estimate.attributions.cols());
  if (d == 0) throw InvalidConfigError("empty attribution matrix");
  if (!names.empty() && static_cast<int>(names.size()) != d) {
    throw InvalidConfigError("feature name count mismatch");
  }
  std::vector<FeatureImportance> ranking(d);
  for (int f = 0; f < d; ++f) {
    ranking[f].feature = f;
    ranking[f].name = names.empty() ? "f" + std::to_string(f) : names[f];
    ranking[f].importance = estimate.attributions.col(f).cwiseAbs().mean();
  }
  std::stable_sort(ranking.begin(), ranking.end(),
                   [](const FeatureImportance& a, const FeatureImportance& b) {
                     return a.importance > b.importance;
                   });
  return ranking;
}

std::string attributions_to_csv(const ShapleyEstimate& estimate,
                                const std::vector<std::string>& names,
                                const std::vector<std::string>& row_ids) {
  const int d = static_cast<int>(estimate.attributions.cols());
  std::ostringstream out;
  out << "id";
  for (int f = 0; f < d; ++f) {
    out << ',' << (names.empty() ? "f" + std::to_string(f) : names[f]);
  }
  out << '\n';
  for (Eigen::Index r = 0; r < estimate.attributions.rows(); ++r) {
    out << (row_ids.empty() ? "row" + std::to_string(r) : row_ids[r]);
    for (int f = 0; f < d; ++f) out << ',' << format_double(estimate.attributions(r, f));
    out << '\n';
  }
  return out.str();
}

std::string ranking_to_csv(const std::vector<FeatureImportance>& ranking) {
  std::ostringstream out;
  out << "rank,feature_index,feature,mean_abs_attribution\n";
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    out << i + 1 << ',' << ranking[i].feature << ',' << ranking[i].name << ','
        << format_double(ranking[i].importance) << '\n';
  }
  return out.str();
}

}  // namespace nirspec
