#pragma once

#include <array>
#include <string>
#include <vector>

#include "nirspec/types.hpp"

namespace nirspec {

/// One Gaussian absorbance band. The shift fields are scaled by the spec's
/// separation_scale when the record's lesion template carries them (the
/// default templates put nonzero shifts on the cancer lesions only), so
/// separation 0 makes all lesion templates coincide.
struct GaussianPeak {
  double center_nm = 0.0;
  double width_nm = 1.0;
  double amplitude = 0.0;
  double center_shift_nm = 0.0;
  double amplitude_shift = 0.0;
};

struct LesionTemplate {
  std::vector<GaussianPeak> peaks;
};

/// Generator spec for the synthetic-spectra oracle. Defaults mirror the
/// reference class distribution (336/188/62/302/72/11) on the standard
/// 125-point grid. Each record is template + linear baseline + i.i.d.
/// Gaussian noise.
struct SynthSpec {
  std::array<int, 6> counts = {336, 188, 62, 302, 72, 11};  // LesionType order
  std::array<LesionTemplate, 6> templates = default_templates();
  double baseline_slope = 0.25;
  double noise_sigma = 0.3;
  double separation_scale = 1.0;
  WavelengthGrid grid;
  RngSeed seed;

  static std::array<LesionTemplate, 6> default_templates();
};

/// Evaluates a lesion template (with separation applied) on the grid,
/// including the baseline but not the noise.
std::vector<double> template_curve(const SynthSpec& spec, LesionType lesion);

Dataset generate(const SynthSpec& spec);

std::string synth_spec_to_json(const SynthSpec& spec);
SynthSpec synth_spec_from_json(const std::string& text);
void write_synth_spec(const SynthSpec& spec, const std::string& path);
SynthSpec read_synth_spec(const std::string& path);

}  // namespace nirspec
