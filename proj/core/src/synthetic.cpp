#include "nirspec/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nirspec/rng.hpp"

namespace nirspec {

std::array<LesionTemplate, 6> SynthSpec::default_templates() {
  // All six lesions share the same base bands; the cancer lesions carry
  // separation-scaled center/amplitude shifts (slightly different per
  // lesion), so separation 0 collapses the classes onto one distribution.
  const std::vector<GaussianPeak> base = {
      {1150.0, 70.0, 1.00, 0.0, 0.0},
      {1380.0, 55.0, 0.75, 0.0, 0.0},
      {1600.0, 80.0, 0.55, 0.0, 0.0},
  };
  auto shifted = [&base](double scale) {
    const double center_shift[3] = {22.0, -18.0, 14.0};
    const double amp_shift[3] = {0.10, -0.08, 0.06};
    LesionTemplate t;
    for (std::size_t i = 0; i < base.size(); ++i) {
      GaussianPeak p = base[i];
      p.center_shift_nm = scale * center_shift[i];
      p.amplitude_shift = scale * amp_shift[i];
      t.peaks.push_back(p);
    }
    return t;
  };
  std::array<LesionTemplate, 6> templates;
  templates[static_cast<int>(LesionType::ACK)] = LesionTemplate{base};
  templates[static_cast<int>(LesionType::SEK)] = LesionTemplate{base};
  templates[static_cast<int>(LesionType::NEV)] = LesionTemplate{base};
  templates[static_cast<int>(LesionType::BCC)] = shifted(1.0);
  templates[static_cast<int>(LesionType::SCC)] = shifted(0.85);
  templates[static_cast<int>(LesionType::MEL)] = shifted(1.2);
  return templates;
}

std::vector<double> template_curve(const SynthSpec& spec, LesionType lesion) {
  const LesionTemplate& tpl = spec.templates[static_cast<int>(lesion)];
  const double span = spec.grid.step_nm * (spec.grid.count - 1);
  std::vector<double> curve(spec.grid.count, 0.0);
  for (int i = 0; i < spec.grid.count; ++i) {
    const double nm = spec.grid.wavelength(i);
    double v = spec.baseline_slope * (nm - spec.grid.start_nm) / span;
    for (const GaussianPeak& p : tpl.peaks) {
      const double center = p.center_nm + spec.separation_scale * p.center_shift_nm;
      const double amp = p.amplitude + spec.separation_scale * p.amplitude_shift;
      const double z = (nm - center) / p.width_nm;
      v += amp * std::exp(-0.5 * z * z);
    }
    curve[i] = v;
  }
  return curve;
}

Dataset generate(const SynthSpec& spec) {
  int total = 0;
  for (int c : spec.counts) {
    if (c < 0) throw InvalidConfigError("lesion counts must be non-negative");
    total += c;
  }
  if (total == 0) throw InvalidConfigError("at least one lesion count must be positive");
  if (spec.noise_sigma < 0.0) throw InvalidConfigError("noise_sigma must be non-negative");
  if (spec.grid.count < 2) throw InvalidConfigError("grid needs at least 2 points");

  Dataset ds;
  ds.grid = spec.grid;
  ds.records.reserve(total);
  Rng rng(spec.seed);
  for (LesionType lesion : kAllLesionTypes) {
    const std::vector<double> curve = template_curve(spec, lesion);
    const int count = spec.counts[static_cast<int>(lesion)];
    for (int c = 0; c < count; ++c) {
      char id[16];
      std::snprintf(id, sizeof(id), "%s_%04d", std::string(lesion_name(lesion)).c_str(), c + 1);
      Spectrum s;
      s.values.resize(spec.grid.count);
      for (int i = 0; i < spec.grid.count; ++i) {
        s.values[i] = curve[i] + rng.gaussian(0.0, spec.noise_sigma);
      }
      ds.records.push_back(make_record(id, lesion, std::move(s)));
    }
  }
  return ds;
}

namespace {

nlohmann::json peak_to_json(const GaussianPeak& p) {
  return {{"center_nm", p.center_nm},
          {"width_nm", p.width_nm},
          {"amplitude", p.amplitude},
          {"center_shift_nm", p.center_shift_nm},
          {"amplitude_shift", p.amplitude_shift}};
}

GaussianPeak peak_from_json(const nlohmann::json& j) {
  GaussianPeak p;
  p.center_nm = j.at("center_nm").get<double>();
  p.width_nm = j.at("width_nm").get<double>();
  p.amplitude = j.at("amplitude").get<double>();
  p.center_shift_nm = j.value("center_shift_nm", 0.0);
  p.amplitude_shift = j.value("amplitude_shift", 0.0);
  return p;
}

}  // namespace

std::string synth_spec_to_json(const SynthSpec& spec) {
  nlohmann::json j;
  for (LesionType t : kAllLesionTypes) {
    const std::string name(lesion_name(t));
    j["counts"][name] = spec.counts[static_cast<int>(t)];
    auto peaks = nlohmann::json::array();
    for (const GaussianPeak& p : spec.templates[static_cast<int>(t)].peaks) {
      peaks.push_back(peak_to_json(p));
    }
    j["templates"][name] = peaks;
  }
  j["baseline_slope"] = spec.baseline_slope;
  j["noise_sigma"] = spec.noise_sigma;
  j["separation_scale"] = spec.separation_scale;
  j["seed"] = spec.seed.value;
  j["grid"] = {{"start_nm", spec.grid.start_nm},
               {"step_nm", spec.grid.step_nm},
               {"count", spec.grid.count}};
  return j.dump(2) + "\n";
}

SynthSpec synth_spec_from_json(const std::string& text) {
  SynthSpec spec;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    for (LesionType t : kAllLesionTypes) {
      const std::string name(lesion_name(t));
      if (j.contains("counts") && j["counts"].contains(name)) {
        spec.counts[static_cast<int>(t)] = j["counts"][name].get<int>();
      }
      if (j.contains("templates") && j["templates"].contains(name)) {
        LesionTemplate tpl;
        for (const auto& pj : j["templates"][name]) tpl.peaks.push_back(peak_from_json(pj));
        spec.templates[static_cast<int>(t)] = std::move(tpl);
      }
    }
    spec.baseline_slope = j.value("baseline_slope", spec.baseline_slope);
    spec.noise_sigma = j.value("noise_sigma", spec.noise_sigma);
    spec.separation_scale = j.value("separation_scale", spec.separation_scale);
    spec.seed.value = j.value("seed", spec.seed.value);
    if (j.contains("grid")) {
      spec.grid.start_nm = j["grid"].value("start_nm", spec.grid.start_nm);
      spec.grid.step_nm = j["grid"].value("step_nm", spec.grid.step_nm);
      spec.grid.count = j["grid"].value("count", spec.grid.count);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfigError(std::string("synth spec JSON: ") + e.what());
  }
  return spec;
}

void write_synth_spec(const SynthSpec& spec, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << synth_spec_to_json(spec);
  if (!out) throw IoError("write to '" + path + "' failed");
}

SynthSpec read_synth_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return synth_spec_from_json(buf.str());
}

}  // namespace nirspec
