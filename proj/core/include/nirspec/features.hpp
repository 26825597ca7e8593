#pragma once

#include <bitset>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nirspec/types.hpp"

namespace nirspec {

/// The twelve per-window statistics, in the fixed column order used
/// throughout the project.
enum class FeatureKind {
  Mean,
  Median,
  StdDev,
  Kurtosis,
  Skewness,
  Maximum,
  Minimum,
  Peak,
  PeakToPeak,
  Rms,
  Variance,
  CrestFactor,
};

inline constexpr int kFeatureKindCount = 12;

std::string_view feature_kind_name(FeatureKind kind);
FeatureKind feature_kind_from_name(std::string_view name);

/// Enabled feature kinds, indexed by FeatureKind order.
struct FeatureMask {
  std::bitset<kFeatureKindCount> enabled;

  static FeatureMask all();
  static FeatureMask none();
  static FeatureMask of(std::initializer_list<FeatureKind> kinds);
  /// Parses "all" or a +-separated kind list, e.g. "mean+std_dev+rms".
  static FeatureMask from_string(std::string_view text);

  bool test(FeatureKind k) const { return enabled.test(static_cast<std::size_t>(k)); }
  int count() const { return static_cast<int>(enabled.count()); }
  std::string to_string() const;
};

/// Windowing plan over a spectrum. window_count subsequences of equal base
/// length floor(L / (1 + (count-1)*(1-overlap))), stride
/// max(1, floor(length*(1-overlap))); the last window absorbs the remainder
/// so no point is dropped. Tuned runs constrain window_count to [5, 50];
/// direct calls may use any count >= 1 as long as the derived length is >= 2.
struct WindowSpec {
  int window_count = 5;
  double overlap_fraction = 0.0;  // in [0, 1)
  FeatureMask mask = FeatureMask::all();
};

struct Window {
  int start = 0;
  int length = 0;
  int end() const { return start + length; }  // exclusive
};

std::vector<Window> plan_windows(int signal_length, const WindowSpec& spec);

/// All twelve statistics of one window (length >= 2), in FeatureKind order.
/// Zero-variance windows get skewness = kurtosis = 0; crest factor is 0 when
/// the RMS is 0.
std::array<double, kFeatureKindCount> window_statistics(std::span<const double> window);

/// The enabled statistics only, in FeatureKind order.
std::vector<double> window_features(std::span<const double> window, const FeatureMask& mask);

/// Row-aligned feature matrix with named column provenance.
struct FeatureColumn {
  FeatureKind kind;
  int window_index = 0;
  int start_index = 0;  // inclusive
  int end_index = 0;    // inclusive
  double start_nm = 0.0;
  double end_nm = 0.0;
  std::string name;     // e.g. "mean_w0_0-24_900.0-1053.6"
};

struct FeatureMatrix {
  std::vector<FeatureColumn> columns;
  std::vector<std::string> row_ids;
  std::vector<int> labels;
  Eigen::MatrixXd values;  // rows align with row_ids

  int rows() const { return static_cast<int>(values.rows()); }
  int cols() const { return static_cast<int>(values.cols()); }
  std::vector<std::string> column_names() const;
};

/// Windowed statistics for every record; rows follow dataset order, columns
/// are window-major then feature-kind.
FeatureMatrix extract_features(const Dataset& dataset, const WindowSpec& spec);

/// The identity design matrix: one column per grid point, named by
/// wavelength. Used by the raw / snv pipeline arms.
FeatureMatrix spectra_matrix(const Dataset& dataset);

std::string feature_matrix_to_csv(const FeatureMatrix& fm);
void write_feature_matrix(const FeatureMatrix& fm, const std::string& path);

}  // namespace nirspec
