#include "nirspec/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nirspec/dataset_io.hpp"

namespace nirspec {

namespace {

constexpr std::array<std::string_view, kFeatureKindCount> kKindNames = {
    "mean",     "median",  "std_dev",      "kurtosis", "skewness", "max",
    "min",      "peak",    "peak_to_peak", "rms",      "variance", "crest_factor"};

}  // namespace

std::string_view feature_kind_name(FeatureKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

FeatureKind feature_kind_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<FeatureKind>(i);
  }
  throw InvalidConfigError("unknown feature kind '" + std::string(name) + "'");
}

FeatureMask FeatureMask::all() {
  FeatureMask m;
  m.enabled.set();
  return m;
}

FeatureMask FeatureMask::none() { return {}; }

FeatureMask FeatureMask::of(std::initializer_list<FeatureKind> kinds) {
  FeatureMask m;
  for (FeatureKind k : kinds) m.enabled.set(static_cast<std::size_t>(k));
  return m;
}

FeatureMask FeatureMask::from_string(std::string_view text) {
  if (text == "all") return all();
  FeatureMask m;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = std::min(text.find('+', pos), text.size());
    const std::string_view token = text.substr(pos, next - pos);
    if (!token.empty()) m.enabled.set(static_cast<std::size_t>(feature_kind_from_name(token)));
    if (next == text.size()) break;
    pos = next + 1;
  }
  if (m.count() == 0) throw InvalidConfigError("feature mask is empty");
  return m;
}

std::string FeatureMask::to_string() const {
  if (count() == kFeatureKindCount) return "all";
  std::string out;
  for (int i = 0; i < kFeatureKindCount; ++i) {
    if (!enabled.test(i)) continue;
    if (!out.empty()) out += '+';
    out += kKindNames[i];
  }
  return out;
}

std::vector<Window> plan_windows(int signal_length, const WindowSpec& spec) {
  if (spec.window_count < 1) throw InvalidConfigError("window_count must be >= 1");
  if (!(spec.overlap_fraction >= 0.0 && spec.overlap_fraction < 1.0)) {
    throw InvalidConfigError("overlap_fraction must lie in [0, 1)");
  }
  const double denom = 1.0 + (spec.window_count - 1) * (1.0 - spec.overlap_fraction);
  const int length = static_cast<int>(std::floor(signal_length / denom));
  if (length < 2) {
    throw InvalidConfigError("derived window length " + std::to_string(length) +
                             " is below 2 (signal length " + std::to_string(signal_length) +
                             ", " + std::to_string(spec.window_count) + " windows)");
  }
  const int stride = std::max(1, static_cast<int>(std::floor(length * (1.0 - spec.overlap_fraction))));

  std::vector<Window> windows(spec.window_count);
  for (int w = 0; w < spec.window_count; ++w) {
    windows[w].start = w * stride;
    windows[w].length = std::min(length, signal_length - windows[w].start);
  }
  // The last window absorbs the remainder so the full signal is covered.
  windows.back().length = signal_length - windows.back().start;
  return windows;
}

std::array<double, kFeatureKindCount> window_statistics(std::span<const double> window) {
  const int m = static_cast<int>(window.size());
  if (m < 2) throw InvalidConfigError("window length must be >= 2");

  double sum = 0.0, sum_sq = 0.0;
  double max_v = window[0], min_v = window[0], peak = 0.0;
  for (double v : window) {
    sum += v;
    sum_sq += v * v;
    max_v = std::max(max_v, v);
    min_v = std::min(min_v, v);
    peak = std::max(peak, std::abs(v));
  }
  const double mean = sum / m;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : window) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const double pop_var = m2 / m;
  const double std_dev = std::sqrt(pop_var);
  const double variance = m2 / (m - 1);
  const double rms = std::sqrt(sum_sq / m);

  // Population third/fourth moments over sigma^3 / sigma^4; zero-variance
  // windows fall back to 0.
  double skewness = 0.0, kurtosis = 0.0;
  if (pop_var > 0.0) {
    skewness = (m3 / m) / (pop_var * std_dev);
    kurtosis = (m4 / m) / (pop_var * pop_var);
  }
  const double crest = rms > 0.0 ? peak / rms : 0.0;

  std::vector<double> sorted(window.begin(), window.end());
  std::sort(sorted.begin(), sorted.end());
  const double median = (m % 2 == 1) ? sorted[m / 2]
                                     : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);

  std::array<double, kFeatureKindCount> out{};
  out[static_cast<int>(FeatureKind::Mean)] = mean;
  out[static_cast<int>(FeatureKind::Median)] = median;
  out[static_cast<int>(FeatureKind::StdDev)] = std_dev;
  out[static_cast<int>(FeatureKind::Kurtosis)] = kurtosis;
  out[static_cast<int>(FeatureKind::Skewness)] = skewness;
  out[static_cast<int>(FeatureKind::Maximum)] = max_v;
  out[static_cast<int>(FeatureKind::Minimum)] = min_v;
  out[static_cast<int>(FeatureKind::Peak)] = peak;
  out[static_cast<int>(FeatureKind::PeakToPeak)] = max_v - min_v;
  out[static_cast<int>(FeatureKind::Rms)] = rms;
  out[static_cast<int>(FeatureKind::Variance)] = variance;
  out[static_cast<int>(FeatureKind::CrestFactor)] = crest;
  return out;
}

std::vector<double> window_features(std::span<const double> window, const FeatureMask& mask) {
  const auto stats = window_statistics(window);
  std::vector<double> out;
  out.reserve(mask.count());
  for (int k = 0; k < kFeatureKindCount; ++k) {
    if (mask.enabled.test(k)) out.push_back(stats[k]);
  }
  return out;
}

namespace {

std::string column_name(FeatureKind kind, int w, const Window& win, const WavelengthGrid& grid) {
  std::ostringstream name;
  name << feature_kind_name(kind) << "_w" << w << '_' << win.start << '-' << (win.end() - 1)
       << '_' << format_double(grid.wavelength(win.start)) << '-'
       << format_double(grid.wavelength(win.end() - 1));
  return name.str();
}

}  // namespace

FeatureMatrix extract_features(const Dataset& dataset, const WindowSpec& spec) {
  if (dataset.empty()) throw EmptyDatasetError("extract_features over an empty dataset");
  if (spec.mask.count() == 0) throw InvalidConfigError("feature mask is empty");
  const auto windows = plan_windows(dataset.grid.count, spec);

  FeatureMatrix fm;
  for (int w = 0; w < static_cast<int>(windows.size()); ++w) {
    for (int k = 0; k < kFeatureKindCount; ++k) {
      if (!spec.mask.enabled.test(k)) continue;
      const auto kind = static_cast<FeatureKind>(k);
      FeatureColumn col;
      col.kind = kind;
      col.window_index = w;
      col.start_index = windows[w].start;
      col.end_index = windows[w].end() - 1;
      col.start_nm = dataset.grid.wavelength(col.start_index);
      col.end_nm = dataset.grid.wavelength(col.end_index);
      col.name = column_name(kind, w, windows[w], dataset.grid);
      fm.columns.push_back(std::move(col));
    }
  }

  const int n = static_cast<int>(dataset.size());
  fm.values.resize(n, static_cast<int>(fm.columns.size()));
  fm.row_ids.reserve(n);
  fm.labels.reserve(n);
  for (int r = 0; r < n; ++r) {
    const LesionRecord& rec = dataset.records[r];
    fm.row_ids.push_back(rec.id);
    fm.labels.push_back(rec.label);
    int c = 0;
    for (const Window& win : windows) {
      const std::span<const double> view(rec.spectrum.values.data() + win.start,
                                         static_cast<std::size_t>(win.length));
      const auto stats = window_statistics(view);
      for (int k = 0; k < kFeatureKindCount; ++k) {
        if (spec.mask.enabled.test(k)) fm.values(r, c++) = stats[k];
      }
    }
  }
  return fm;
}

FeatureMatrix spectra_matrix(const Dataset& dataset) {
  if (dataset.empty()) throw EmptyDatasetError("spectra_matrix over an empty dataset");
  FeatureMatrix fm;
  fm.columns.reserve(dataset.grid.count);
  for (int i = 0; i < dataset.grid.count; ++i) {
    FeatureColumn col;
    col.kind = FeatureKind::Mean;  // unused for identity columns
    col.window_index = i;
    col.start_index = i;
    col.end_index = i;
    col.start_nm = col.end_nm = dataset.grid.wavelength(i);
    col.name = spectral_column_name(dataset.grid, i);
    fm.columns.push_back(std::move(col));
  }
  const int n = static_cast<int>(dataset.size());
  fm.values.resize(n, dataset.grid.count);
  fm.row_ids.reserve(n);
  fm.labels.reserve(n);
  for (int r = 0; r < n; ++r) {
    const LesionRecord& rec = dataset.records[r];
    if (static_cast<int>(rec.spectrum.size()) != dataset.grid.count) {
      throw GridMismatchError("record '" + rec.id + "' does not match the grid");
    }
    fm.row_ids.push_back(rec.id);
    fm.labels.push_back(rec.label);
    for (int c = 0; c < dataset.grid.count; ++c) fm.values(r, c) = rec.spectrum.values[c];
  }
  return fm;
}

std::vector<std::string> FeatureMatrix::column_names() const {
  std::vector<std::string> names;
  names.reserve(columns.size());
  for (const FeatureColumn& c : columns) names.push_back(c.name);
  return names;
}

std::string feature_matrix_to_csv(const FeatureMatrix& fm) {
  std::ostringstream out;
  out << "id,label";
  for (const FeatureColumn& c : fm.columns) out << ',' << c.name;
  out << '\n';
  for (int r = 0; r < fm.rows(); ++r) {
    out << fm.row_ids[r] << ',' << fm.labels[r];
    for (int c = 0; c < fm.cols(); ++c) out << ',' << format_double(fm.values(r, c));
    out << '\n';
  }
  return out.str();
}

void write_feature_matrix(const FeatureMatrix& fm, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << feature_matrix_to_csv(fm);
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace nirspec
