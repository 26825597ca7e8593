#pragma once

#include <string>
#include <vector>

#include "nirspec/rng.hpp"
#include "nirspec/types.hpp"

namespace nirspec::testsupport {

inline WavelengthGrid tiny_grid(int count) {
  WavelengthGrid g;
  g.count = count;
  return g;
}

inline Spectrum make_spectrum(std::vector<double> values) {
  return Spectrum{std::move(values)};
}

inline Dataset make_dataset(const std::vector<std::pair<LesionType, std::vector<double>>>& rows,
                            int grid_count) {
  Dataset ds;
  ds.grid = tiny_grid(grid_count);
  int i = 0;
  for (const auto& [lesion, values] : rows) {
    ds.records.push_back(
        make_record(std::string(lesion_name(lesion)) + "_" + std::to_string(++i), lesion,
                    Spectrum{values}));
  }
  return ds;
}

/// Random dataset: `count` records of random lesions, random spectra.
inline Dataset random_dataset(int count, int grid_count, RngSeed seed) {
  Rng rng(seed);
  Dataset ds;
  ds.grid = tiny_grid(grid_count);
  for (int i = 0; i < count; ++i) {
    const LesionType lesion = kAllLesionTypes[rng.below(6)];
    Spectrum s;
    s.values.resize(grid_count);
    for (int c = 0; c < grid_count; ++c) s.values[c] = rng.uniform(-2.0, 2.0);
    ds.records.push_back(
        make_record("r" + std::to_string(i), lesion, std::move(s)));
  }
  return ds;
}

}  // namespace nirspec::testsupport
