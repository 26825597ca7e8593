#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nirspec/errors.hpp"
#include "nirspec/rng.hpp"

namespace nirspec {

/// Uniform wavelength grid. wavelength(i) = start_nm + i * step_nm.
/// The production instrument grid is 900.0 + 6.4*i nm for i in [0, 124]
/// (last point 1693.6 nm). Grid values are metadata labels only; no
/// computation consumes them.
struct WavelengthGrid {
  double start_nm = 900.0;
  double step_nm = 6.4;
  int count = 125;

  double wavelength(int i) const { return start_nm + i * step_nm; }
  bool operator==(const WavelengthGrid&) const = default;
};

/// Absorbance values on the dataset grid (dimensionless).
struct Spectrum {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  bool operator==(const Spectrum&) const = default;
};

/// The six lesion diagnoses. BCC, SCC and MEL form the cancer class.
enum class LesionType { ACK, SEK, NEV, BCC, SCC, MEL };

inline constexpr std::array<LesionType, 6> kAllLesionTypes = {
    LesionType::ACK, LesionType::SEK, LesionType::NEV,
    LesionType::BCC, LesionType::SCC, LesionType::MEL};

inline constexpr int kCancerLabel = 1;
inline constexpr int kNonCancerLabel = 0;

/// 1 for BCC/SCC/MEL, 0 for ACK/SEK/NEV.
int binary_label(LesionType lesion);

std::string_view lesion_name(LesionType lesion);

/// Parses a lesion name; "SYN" (synthetic) maps to nullopt.
std::optional<LesionType> lesion_from_name(std::string_view name);

/// One measured (or generated) sample. Synthetic records carry the label
/// directly and leave the lesion unset; originals derive the label from the
/// lesion diagnosis. Synthetic records never enter validation or test folds.
struct LesionRecord {
  std::string id;
  std::optional<LesionType> lesion;
  int label = 0;
  bool synthetic = false;
  Spectrum spectrum;
};

/// Builds an original record; the binary label is derived from the lesion.
LesionRecord make_record(std::string id, LesionType lesion, Spectrum spectrum);

/// Builds a synthetic record (lesion unset, synthetic flag on).
LesionRecord make_synthetic_record(std::string id, int label, Spectrum spectrum);

struct Dataset {
  WavelengthGrid grid;
  std::vector<LesionRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }

  /// Checks ids unique, labels consistent with lesions, spectra finite and
  /// grid-sized. Throws GridMismatch / InvalidConfig.
  void validate() const;
};

struct ClassCounts {
  std::array<int, 6> per_lesion{};  // indexed by LesionType order
  int synthetic = 0;
  int cancer = 0;
  int non_cancer = 0;

  int total() const { return cancer + non_cancer; }
  int lesion(LesionType t) const { return per_lesion[static_cast<int>(t)]; }
};

/// Counts records per lesion and per binary label. Synthetic records count
/// toward their label and the synthetic tally only.
ClassCounts class_counts(const Dataset& dataset);

}  // namespace nirspec
