#include "nirspec/tune.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nirspec/dataset_io.hpp"

namespace nirspec {

std::int64_t param_int(const ParamPoint& point, const std::string& name) {
  const auto it = point.find(name);
  if (it == point.end()) throw InvalidConfigError("missing parameter '" + name + "'");
  if (const auto* v = std::get_if<std::int64_t>(&it->second)) return *v;
  throw InvalidConfigError("parameter '" + name + "' is not an integer");
}

double param_real(const ParamPoint& point, const std::string& name) {
  const auto it = point.find(name);
  if (it == point.end()) throw InvalidConfigError("missing parameter '" + name + "'");
  if (const auto* v = std::get_if<double>(&it->second)) return *v;
  if (const auto* v = std::get_if<std::int64_t>(&it->second)) return static_cast<double>(*v);
  throw InvalidConfigError("parameter '" + name + "' is not a real");
}

const std::string& param_categorical(const ParamPoint& point, const std::string& name) {
  const auto it = point.find(name);
  if (it == point.end()) throw InvalidConfigError("missing parameter '" + name + "'");
  if (const auto* v = std::get_if<std::string>(&it->second)) return *v;
  throw InvalidConfigError("parameter '" + name + "' is not categorical");
}

SearchSpace& SearchSpace::add_integer(std::string name, std::int64_t lo, std::int64_t hi,
                                      std::int64_t step) {
  if (lo > hi || step < 1) throw InvalidConfigError("bad integer dimension '" + name + "'");
  Dimension d;
  d.name = std::move(name);
  d.kind = Dimension::Kind::Integer;
  d.ilo = lo;
  d.ihi = hi;
  d.step = step;
  dims.push_back(std::move(d));
  return *this;
}

SearchSpace& SearchSpace::add_real(std::string name, double lo, double hi) {
  if (!(lo < hi)) throw InvalidConfigError("bad real dimension '" + name + "'");
  Dimension d;
  d.name = std::move(name);
  d.kind = Dimension::Kind::Real;
  d.lo = lo;
  d.hi = hi;
  dims.push_back(std::move(d));
  return *this;
}

SearchSpace& SearchSpace::add_log_real(std::string name, double lo, double hi) {
  if (!(lo > 0.0 && lo < hi)) throw InvalidConfigError("bad log-real dimension '" + name + "'");
  Dimension d;
  d.name = std::move(name);
  d.kind = Dimension::Kind::LogReal;
  d.lo = lo;
  d.hi = hi;
  dims.push_back(std::move(d));
  return *this;
}

SearchSpace& SearchSpace::add_categorical(std::string name, std::vector<std::string> options) {
  if (options.empty()) throw InvalidConfigError("empty categorical dimension '" + name + "'");
  Dimension d;
  d.name = std::move(name);
  d.kind = Dimension::Kind::Categorical;
  d.categories = std::move(options);
  dims.push_back(std::move(d));
  return *this;
}

namespace {

std::int64_t snap_integer(const Dimension& d, double x) {
  const double stepped = std::round((x - static_cast<double>(d.ilo)) / static_cast<double>(d.step));
  std::int64_t v = d.ilo + static_cast<std::int64_t>(stepped) * d.step;
  v = std::clamp(v, d.ilo, d.ihi);
  // The top of a stepped range may not be reachable; snap down to the grid.
  v = d.ilo + ((v - d.ilo) / d.step) * d.step;
  return v;
}

ParamValue sample_uniform(const Dimension& d, Rng& rng) {
  switch (d.kind) {
    case Dimension::Kind::Integer: {
      const std::int64_t steps = (d.ihi - d.ilo) / d.step;
      return d.ilo + d.step * rng.uniform_int(0, steps);
    }
    case Dimension::Kind::Real:
      return rng.uniform(d.lo, d.hi);
    case Dimension::Kind::LogReal:
      return std::exp(rng.uniform(std::log(d.lo), std::log(d.hi)));
    case Dimension::Kind::Categorical:
      return d.categories[rng.below(d.categories.size())];
  }
  throw InvalidConfigError("unknown dimension kind");
}

double numeric_value(const Dimension& d, const ParamValue& v) {
  if (d.kind == Dimension::Kind::Integer) return static_cast<double>(std::get<std::int64_t>(v));
  if (d.kind == Dimension::Kind::LogReal) return std::log(std::get<double>(v));
  return std::get<double>(v);
}

struct NumericDomain {
  double lo = 0.0;
  double hi = 1.0;
};

NumericDomain domain(const Dimension& d) {
  switch (d.kind) {
    case Dimension::Kind::Integer:
      return {static_cast<double>(d.ilo), static_cast<double>(d.ihi)};
    case Dimension::Kind::LogReal:
      return {std::log(d.lo), std::log(d.hi)};
    default:
      return {d.lo, d.hi};
  }
}

double kernel_bandwidth(const NumericDomain& dom, std::size_t n) {
  const double range = std::max(dom.hi - dom.lo, 1e-12);
  return std::max(range / (2.0 * std::sqrt(static_cast<double>(n))), range * 0.01);
}

/// Gaussian KDE in the (possibly log-) numeric domain.
double kde_density(double x, const std::vector<double>& samples, double bandwidth) {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (double s : samples) {
    const double z = (x - s) / bandwidth;
    sum += std::exp(-0.5 * z * z);
  }
  return sum / (samples.size() * bandwidth * std::sqrt(2.0 * M_PI));
}

double categorical_density(const std::string& value, const std::vector<const ParamPoint*>& set,
                           const Dimension& d) {
  // Add-one smoothed frequency.
  double count = 1.0;
  for (const ParamPoint* p : set) {
    if (std::get<std::string>(p->at(d.name)) == value) count += 1.0;
  }
  return count / (set.size() + d.categories.size());
}

ParamValue clamp_to_domain(const Dimension& d, double x) {
  const NumericDomain dom = domain(d);
  x = std::clamp(x, dom.lo, dom.hi);
  switch (d.kind) {
    case Dimension::Kind::Integer:
      return snap_integer(d, x);
    case Dimension::Kind::LogReal:
      return std::exp(x);
    default:
      return x;
  }
}

}  // namespace

ParamPoint sample_point(const SearchSpace& space, Rng& rng,
                        const std::vector<TrialRecord>& history, const TuneConfig& config) {
  if (space.dims.empty()) throw InvalidConfigError("empty search space");

  const int startup = config.startup_trials >= 0
                          ? config.startup_trials
                          : std::max(10, config.budget / 5);
  const bool random_phase = config.sampler == SamplerKind::Random ||
                            static_cast<int>(history.size()) < startup;
  if (random_phase) {
    ParamPoint point;
    for (const Dimension& d : space.dims) point[d.name] = sample_uniform(d, rng);
    return point;
  }

  // Split the history at the top-gamma quantile of the objective.
  std::vector<const TrialRecord*> sorted;
  sorted.reserve(history.size());
  for (const TrialRecord& t : history) sorted.push_back(&t);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const TrialRecord* a, const TrialRecord* b) {
                     return a->objective > b->objective;
                   });
  const std::size_t n_good = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(config.gamma * sorted.size())));
  std::vector<const ParamPoint*> good, bad;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    (i < n_good ? good : bad).push_back(&sorted[i]->point);
  }
  if (bad.empty()) {
    ParamPoint point;
    for (const Dimension& d : space.dims) point[d.name] = sample_uniform(d, rng);
    return point;
  }

  // Per-dimension numeric samples of both sets.
  std::vector<std::vector<double>> good_num(space.dims.size()), bad_num(space.dims.size());
  for (std::size_t di = 0; di < space.dims.size(); ++di) {
    const Dimension& d = space.dims[di];
    if (d.kind == Dimension::Kind::Categorical) continue;
    for (const ParamPoint* p : good) good_num[di].push_back(numeric_value(d, p->at(d.name)));
    for (const ParamPoint* p : bad) bad_num[di].push_back(numeric_value(d, p->at(d.name)));
  }

  ParamPoint best_candidate;
  double best_ratio = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < config.n_candidates; ++c) {
    ParamPoint candidate;
    double log_ratio = 0.0;
    for (std::size_t di = 0; di < space.dims.size(); ++di) {
      const Dimension& d = space.dims[di];
      if (d.kind == Dimension::Kind::Categorical) {
        // Draw from the good set's smoothed frequencies.
        std::vector<double> weights(d.categories.size(), 1.0);
        for (const ParamPoint* p : good) {
          const std::string& v = std::get<std::string>(p->at(d.name));
          for (std::size_t k = 0; k < d.categories.size(); ++k) {
            if (d.categories[k] == v) weights[k] += 1.0;
          }
        }
        double total = 0.0;
        for (double w : weights) total += w;
        double draw = rng.uniform() * total;
        std::size_t pick = 0;
        for (; pick + 1 < weights.size(); ++pick) {
          if (draw < weights[pick]) break;
          draw -= weights[pick];
        }
        const std::string& value = d.categories[pick];
        candidate[d.name] = value;
        log_ratio += std::log(categorical_density(value, good, d)) -
                     std::log(categorical_density(value, bad, d));
      } else {
        const NumericDomain dom = domain(d);
        const double bw_good = kernel_bandwidth(dom, good_num[di].size());
        const double bw_bad = kernel_bandwidth(dom, bad_num[di].size());
        const double center = good_num[di][rng.below(good_num[di].size())];
        const double x = std::clamp(center + bw_good * rng.gaussian(), dom.lo, dom.hi);
        candidate[d.name] = clamp_to_domain(d, x);
        const double pg = kde_density(x, good_num[di], bw_good) + 1e-300;
        const double pb = kde_density(x, bad_num[di], bw_bad) + 1e-300;
        log_ratio += std::log(pg) - std::log(pb);
      }
    }
    if (log_ratio > best_ratio) {
      best_ratio = log_ratio;
      best_candidate = std::move(candidate);
    }
  }
  return best_candidate;
}

TuneResult optimize(const SearchSpace& space, const Objective& objective,
                    const TuneConfig& config) {
  if (config.budget < 1) throw InvalidConfigError("budget must be >= 1");
  if (!(config.gamma > 0.0 && config.gamma < 1.0)) {
    throw InvalidConfigError("gamma must lie in (0, 1)");
  }
  if (config.n_candidates < 1) throw InvalidConfigError("n_candidates must be >= 1");

  TuneResult result;
  result.history.reserve(config.budget);
  Rng rng(config.seed);
  for (int trial = 0; trial < config.budget; ++trial) {
    TrialRecord record;
    record.index = trial;
    record.seed = derive_seed(config.seed, static_cast<std::uint64_t>(trial) + 1).value;
    record.point = sample_point(space, rng, result.history, config);
    try {
      record.objective = objective(record.point, record.seed);
    } catch (const Error& e) {
      throw Error(e.kind(), "trial " + std::to_string(trial) + ": " + e.what());
    }
    if (!std::isfinite(record.objective)) {
      throw InvalidConfigError("trial " + std::to_string(trial) +
                               " returned a non-finite objective");
    }
    result.history.push_back(std::move(record));
  }
  result.best = result.history.front();
  for (const TrialRecord& t : result.history) {
    if (t.objective > result.best.objective) result.best = t;
  }
  return result;
}

namespace {

nlohmann::json point_to_json_obj(const ParamPoint& point) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, value] : point) {
    std::visit([&](const auto& v) { j[name] = v; }, value);
  }
  return j;
}

ParamPoint point_from_json_obj(const nlohmann::json& j) {
  ParamPoint point;
  for (const auto& [name, value] : j.items()) {
    if (value.is_number_integer()) {
      point[name] = value.get<std::int64_t>();
    } else if (value.is_number_float()) {
      point[name] = value.get<double>();
    } else if (value.is_string()) {
      point[name] = value.get<std::string>();
    } else {
      throw InvalidConfigError("parameter '" + name + "' has an unsupported JSON type");
    }
  }
  return point;
}

}  // namespace

std::string param_point_to_json(const ParamPoint& point) {
  return point_to_json_obj(point).dump();
}

ParamPoint param_point_from_json(const std::string& text) {
  try {
    return point_from_json_obj(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfigError(std::string("param point JSON: ") + e.what());
  }
}

std::string history_to_csv(const std::vector<TrialRecord>& history) {
  std::ostringstream out;
  out << "trial,objective,seed,params\n";
  for (const TrialRecord& t : history) {
    std::string params = param_point_to_json(t.point);
    // CSV-quote the JSON payload.
    std::string quoted = "\"";
    for (char ch : params) {
      if (ch == '"') quoted += "\"\"";
      else quoted += ch;
    }
    quoted += '"';
    out << t.index << ',' << format_double(t.objective) << ',' << t.seed << ',' << quoted << '\n';
  }
  return out.str();
}

void write_history(const std::vector<TrialRecord>& history, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << history_to_csv(history);
  if (!out) throw IoError("write to '" + path + "' failed");
}

void write_best_point(const TrialRecord& best, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  nlohmann::json j;
  j["trial"] = best.index;
  j["objective"] = best.objective;
  j["seed"] = best.seed;
  j["params"] = point_to_json_obj(best.point);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write to '" + path + "' failed");
}

ParamPoint read_param_point(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    const nlohmann::json j = nlohmann::json::parse(buf.str());
    // Accept both a bare point object and the best-point file shape.
    if (j.contains("params")) return point_from_json_obj(j["params"]);
    return point_from_json_obj(j);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfigError(std::string("param point JSON: ") + e.what());
  }
}

SearchSpace gbdt_search_space(bool include_goss) {
  SearchSpace space;
  space.add_real("class_weight", 1.0, 25.0)
      .add_integer("max_depth", 1, 15)
      .add_integer("n_trees", 10, 100)
      .add_log_real("learning_rate", 0.01, 1.0)
      .add_real("colsample_by_tree", 0.5, 1.0)
      .add_real("subsample", 0.1, 1.0)
      .add_real("l1_alpha", 0.0, 20.0)
      .add_real("l2_lambda", 0.0, 20.0)
      .add_integer("max_leaves", 20, 5000, 20);
  if (include_goss) {
    space.add_categorical("goss", {"off", "on"})
        .add_real("goss_top_fraction", 0.1, 0.5)
        .add_real("goss_random_fraction", 0.05, 0.3);
  }
  return space;
}

SearchSpace gbdt_feature_search_space(bool include_goss) {
  SearchSpace space = gbdt_search_space(include_goss);
  space.add_integer("window_count", 5, 50)
      .add_real("window_overlap", 0.0, 0.5)
      .add_categorical("feature_mask",
                       {"all",
                        "mean+median+std_dev+variance+rms",
                        "max+min+peak+peak_to_peak+crest_factor",
                        "mean+std_dev+skewness+kurtosis"});
  return space;
}

void apply_point(PipelineSpec& spec, const ParamPoint& point) {
  for (const auto& [name, value] : point) {
    if (name == "class_weight") spec.gbdt.class_weight = param_real(point, name);
    else if (name == "max_depth") spec.gbdt.max_depth = static_cast<int>(param_int(point, name));
    else if (name == "n_trees") spec.gbdt.n_trees = static_cast<int>(param_int(point, name));
    else if (name == "learning_rate") spec.gbdt.learning_rate = param_real(point, name);
    else if (name == "colsample_by_tree") spec.gbdt.colsample_by_tree = param_real(point, name);
    else if (name == "subsample") spec.gbdt.subsample = param_real(point, name);
    else if (name == "l1_alpha") spec.gbdt.l1_alpha = param_real(point, name);
    else if (name == "l2_lambda") spec.gbdt.l2_lambda = param_real(point, name);
    else if (name == "max_leaves") spec.gbdt.max_leaves = static_cast<int>(param_int(point, name));
    else if (name == "goss") {
      if (param_categorical(point, name) == "on" && !spec.gbdt.goss) spec.gbdt.goss = GossConfig{};
      if (param_categorical(point, name) == "off") spec.gbdt.goss.reset();
    } else if (name == "goss_top_fraction") {
      if (spec.gbdt.goss) spec.gbdt.goss->top_fraction = param_real(point, name);
    } else if (name == "goss_random_fraction") {
      if (spec.gbdt.goss) spec.gbdt.goss->random_fraction = param_real(point, name);
    } else if (name == "window_count") {
      spec.window.window_count = static_cast<int>(param_int(point, name));
    } else if (name == "window_overlap") {
      spec.window.overlap_fraction = param_real(point, name);
    } else if (name == "feature_mask") {
      spec.window.mask = FeatureMask::from_string(param_categorical(point, name));
    } else if (name == "plsda_components") {
      spec.plsda.n_components = static_cast<int>(param_int(point, name));
    } else {
      throw InvalidConfigError("unknown tuned parameter '" + name + "'");
    }
  }
}

}  // namespace nirspec
