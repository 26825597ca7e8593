#include "nirspec/types.hpp"

#include <cmath>
#include <unordered_set>

namespace nirspec {

int binary_label(LesionType lesion) {
  switch (lesion) {
    case LesionType::BCC:
    case LesionType::SCC:
    case LesionType::MEL:
      return kCancerLabel;
    case LesionType::ACK:
    case LesionType::SEK:
    case LesionType::NEV:
      return kNonCancerLabel;
  }
  throw InvalidConfigError("unknown lesion type");
}

std::string_view lesion_name(LesionType lesion) {
  switch (lesion) {
    case LesionType::ACK: return "ACK";
    case LesionType::SEK: return "SEK";
    case LesionType::NEV: return "NEV";
    case LesionType::BCC: return "BCC";
    case LesionType::SCC: return "SCC";
    case LesionType::MEL: return "MEL";
  }
  return "?";
}

std::optional<LesionType> lesion_from_name(std::string_view name) {
  for (LesionType t : kAllLesionTypes) {
    if (name == lesion_name(t)) return t;
  }
  if (name == "SYN") return std::nullopt;
  throw InvalidConfigError("unknown lesion name '" + std::string(name) + "'");
}

LesionRecord make_record(std::string id, LesionType lesion, Spectrum spectrum) {
  LesionRecord r;
  r.id = std::move(id);
  r.lesion = lesion;
  r.label = binary_label(lesion);
  r.synthetic = false;
  r.spectrum = std::move(spectrum);
  return r;
}

LesionRecord make_synthetic_record(std::string id, int label, Spectrum spectrum) {
  LesionRecord r;
  r.id = std::move(id);
  r.lesion = std::nullopt;
  r.label = label;
  r.synthetic = true;
  r.spectrum = std::move(spectrum);
  return r;
}

void Dataset::validate() const {
  std::unordered_set<std::string> ids;
  ids.reserve(records.size());
  for (const LesionRecord& r : records) {
    if (!ids.insert(r.id).second) {
      throw InvalidConfigError("duplicate record id '" + r.id + "'");
    }
    if (static_cast<int>(r.spectrum.size()) != grid.count) {
      throw GridMismatchError("record '" + r.id + "' has " +
                              std::to_string(r.spectrum.size()) +
                              " spectral values, grid expects " +
                              std::to_string(grid.count));
    }
    for (double v : r.spectrum.values) {
      if (!std::isfinite(v)) {
        throw InvalidConfigError("record '" + r.id + "' has a non-finite value");
      }
    }
    if (r.label != 0 && r.label != 1) {
      throw InvalidConfigError("record '" + r.id + "' has label outside {0,1}");
    }
    if (r.lesion && r.label != binary_label(*r.lesion)) {
      throw InvalidConfigError("record '" + r.id + "' label disagrees with lesion type");
    }
    if (!r.lesion && !r.synthetic) {
      throw InvalidConfigError("record '" + r.id + "' lacks a lesion type but is not synthetic");
    }
  }
}

ClassCounts class_counts(const Dataset& dataset) {
  if (dataset.empty()) throw EmptyDatasetError("class_counts over an empty dataset");
  ClassCounts c;
  for (const LesionRecord& r : dataset.records) {
    if (r.lesion) c.per_lesion[static_cast<int>(*r.lesion)] += 1;
    if (r.synthetic) c.synthetic += 1;
    (r.label == kCancerLabel ? c.cancer : c.non_cancer) += 1;
  }
  return c;
}

}  // namespace nirspec
