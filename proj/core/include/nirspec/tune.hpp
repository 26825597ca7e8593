#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "nirspec/pipeline.hpp"
#include "nirspec/rng.hpp"

namespace nirspec {

using ParamValue = std::variant<std::int64_t, double, std::string>;
using ParamPoint = std::map<std::string, ParamValue>;

std::int64_t param_int(const ParamPoint& point, const std::string& name);
double param_real(const ParamPoint& point, const std::string& name);
const std::string& param_categorical(const ParamPoint& point, const std::string& name);

struct Dimension {
  enum class Kind { Integer, Real, LogReal, Categorical };
  std::string name;
  Kind kind = Kind::Real;
  double lo = 0.0;
  double hi = 1.0;
  std::int64_t ilo = 0;
  std::int64_t ihi = 1;
  std::int64_t step = 1;
  std::vector<std::string> categories;
};

struct SearchSpace {
  std::vector<Dimension> dims;

  SearchSpace& add_integer(std::string name, std::int64_t lo, std::int64_t hi,
                           std::int64_t step = 1);
  SearchSpace& add_real(std::string name, double lo, double hi);
  SearchSpace& add_log_real(std::string name, double lo, double hi);
  SearchSpace& add_categorical(std::string name, std::vector<std::string> options);
};

struct TrialRecord {
  int index = 0;
  ParamPoint point;
  double objective = 0.0;
  std::uint64_t seed = 0;  // per-trial seed handed to the objective
};

enum class SamplerKind { Random, DensityRatio };

/// Search settings. The density-ratio sampler runs pure random for the
/// first max(10, budget/5) trials, then splits the history at the top-gamma
/// objective quantile, draws candidates from the good set's per-dimension
/// kernels, and keeps the candidate with the highest good/bad density ratio.
struct TuneConfig {
  int budget = 200;
  SamplerKind sampler = SamplerKind::DensityRatio;
  RngSeed seed;
  double gamma = 0.25;
  int n_candidates = 24;
  int startup_trials = -1;  // -1: max(10, budget/5)
};

using Objective = std::function<double(const ParamPoint&, std::uint64_t trial_seed)>;

struct TuneResult {
  TrialRecord best;
  std::vector<TrialRecord> history;
};

ParamPoint sample_point(const SearchSpace& space, Rng& rng,
                        const std::vector<TrialRecord>& history, const TuneConfig& config);

/// Runs exactly config.budget trials maximizing the objective; ties keep
/// the earliest trial. Objective errors propagate with the trial index.
TuneResult optimize(const SearchSpace& space, const Objective& objective,
                    const TuneConfig& config);

std::string param_point_to_json(const ParamPoint& point);
ParamPoint param_point_from_json(const std::string& text);
std::string history_to_csv(const std::vector<TrialRecord>& history);
void write_history(const std::vector<TrialRecord>& history, const std::string& path);
void write_best_point(const TrialRecord& best, const std::string& path);
ParamPoint read_param_point(const std::string& path);

/// The boosted-tree search dimensions from the experiment protocol.
SearchSpace gbdt_search_space(bool include_goss = false);
/// Adds the feature-extraction dimensions (window count, overlap, mask).
SearchSpace gbdt_feature_search_space(bool include_goss = false);

/// Applies sampled dimensions onto the pipeline spec (unknown names throw).
void apply_point(PipelineSpec& spec, const ParamPoint& point);

}  // namespace nirspec
