#include "nirspec/split.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nirspec/rng.hpp"

namespace nirspec {

namespace {

// Strata are keyed by lesion enum order; synthetic records get key 6 and are
// pinned to the training side.
constexpr int kSyntheticStratum = 6;

int stratum_key(const LesionRecord& r) {
  return r.lesion ? static_cast<int>(*r.lesion) : kSyntheticStratum;
}

std::vector<std::vector<std::size_t>> group_by_stratum(const Dataset& ds) {
  std::vector<std::vector<std::size_t>> strata(7);
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    strata[stratum_key(ds.records[i])].push_back(i);
  }
  return strata;
}

}  // namespace

std::pair<Dataset, Dataset> stratified_split(const Dataset& dataset, const SplitSpec& spec) {
  if (dataset.empty()) throw EmptyDatasetError("cannot split an empty dataset");
  if (!(spec.test_fraction >= 0.0 && spec.test_fraction < 1.0)) {
    throw InvalidConfigError("test_fraction must lie in [0, 1)");
  }

  auto strata = group_by_stratum(dataset);
  std::size_t n_original = 0;
  for (int s = 0; s < kSyntheticStratum; ++s) n_original += strata[s].size();

  const int total_test =
      static_cast<int>(std::ceil(spec.test_fraction * static_cast<double>(n_original)));

  // Largest-remainder allocation of the test quota across strata.
  std::vector<int> test_count(6, 0);
  int allocated = 0;
  std::vector<std::pair<double, int>> remainders;  // (fraction part, stratum)
  for (int s = 0; s < kSyntheticStratum; ++s) {
    const double quota = spec.test_fraction * static_cast<double>(strata[s].size());
    test_count[s] = static_cast<int>(std::floor(quota));
    allocated += test_count[s];
    remainders.emplace_back(quota - test_count[s], s);
  }
  std::sort(remainders.begin(), remainders.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    if (strata[a.second].size() != strata[b.second].size()) {
      return strata[a.second].size() > strata[b.second].size();
    }
    return a.second < b.second;
  });
  for (const auto& [frac, s] : remainders) {
    if (allocated >= total_test) break;
    if (test_count[s] < static_cast<int>(strata[s].size())) {
      ++test_count[s];
      ++allocated;
    }
  }

  // Membership is decided by a seeded shuffle per stratum; output order
  // preserves the input record order.
  Rng rng(spec.seed);
  std::vector<bool> in_test(dataset.size(), false);
  for (int s = 0; s < kSyntheticStratum; ++s) {
    std::vector<std::size_t> members = strata[s];
    rng.shuffle(members);
    for (int i = 0; i < test_count[s]; ++i) in_test[members[i]] = true;
    if (spec.require_nonempty_strata && !members.empty() &&
        (test_count[s] == 0 || test_count[s] == static_cast<int>(members.size()))) {
      throw DegenerateClassError("stratum " +
                                 std::string(lesion_name(static_cast<LesionType>(s))) +
                                 " would be empty on one side of the split");
    }
  }

  Dataset train{dataset.grid, {}};
  Dataset test{dataset.grid, {}};
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    (in_test[i] ? test : train).records.push_back(dataset.records[i]);
  }
  return {std::move(train), std::move(test)};
}

FoldPlan make_folds(const Dataset& train, int k, RngSeed seed) {
  if (train.empty()) throw EmptyDatasetError("cannot build folds over an empty dataset");
  if (k < 2) throw InvalidConfigError("fold count must be at least 2");
  for (const LesionRecord& r : train.records) {
    if (r.synthetic) {
      throw InvalidConfigError("fold plans cover original records only; augment per fold instead "
                               "(offending id '" + r.id + "')");
    }
  }

  auto strata = group_by_stratum(train);
  for (int s = 0; s < kSyntheticStratum; ++s) {
    if (!strata[s].empty() && static_cast<int>(strata[s].size()) < k) {
      throw DegenerateClassError("stratum " +
                                 std::string(lesion_name(static_cast<LesionType>(s))) +
                                 " has " + std::to_string(strata[s].size()) +
                                 " samples, fewer than k=" + std::to_string(k));
    }
  }

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;

  // Per stratum: base share floor(n/k) per fold; the remainder is handed out
  // to folds in a rotating order that continues across strata, which keeps
  // global fold sizes within one of each other.
  Rng rng(seed);
  int extra_offset = 0;
  for (int s = 0; s < kSyntheticStratum; ++s) {
    std::vector<std::size_t> members = strata[s];
    if (members.empty()) continue;
    rng.shuffle(members);
    const int n = static_cast<int>(members.size());
    const int base = n / k;
    const int extras = n % k;
    std::vector<int> fold_quota(k, base);
    for (int e = 0; e < extras; ++e) fold_quota[(extra_offset + e) % k] += 1;
    extra_offset += extras;
    std::size_t next = 0;
    for (int f = 0; f < k; ++f) {
      for (int c = 0; c < fold_quota[f]; ++c) {
        plan.assignment[train.records[members[next++]].id] = f;
      }
    }
  }
  return plan;
}

std::vector<std::string> FoldPlan::fold_ids(int fold) const {
  std::vector<std::string> out;
  for (const auto& [id, f] : assignment) {
    if (f == fold) out.push_back(id);
  }
  return out;
}

std::string fold_plan_to_json(const FoldPlan& plan) {
  nlohmann::json j;
  j["k"] = plan.k;
  j["seed"] = plan.seed.value;
  j["assignment"] = nlohmann::json::object();
  for (const auto& [id, f] : plan.assignment) j["assignment"][id] = f;
  return j.dump(2) + "\n";
}

FoldPlan fold_plan_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfigError(std::string("fold plan JSON: ") + e.what());
  }
  FoldPlan plan;
  try {
    plan.k = j.at("k").get<int>();
    plan.seed.value = j.at("seed").get<std::uint64_t>();
    for (const auto& [id, f] : j.at("assignment").items()) {
      plan.assignment[id] = f.get<int>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfigError(std::string("fold plan JSON: ") + e.what());
  }
  if (plan.k < 2) throw InvalidConfigError("fold plan JSON: k must be at least 2");
  for (const auto& [id, f] : plan.assignment) {
    if (f < 0 || f >= plan.k) {
      throw InvalidConfigError("fold plan JSON: fold index out of range for id '" + id + "'");
    }
  }
  return plan;
}

void write_fold_plan(const FoldPlan& plan, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << fold_plan_to_json(plan);
  if (!out) throw IoError("write to '" + path + "' failed");
}

FoldPlan read_fold_plan(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return fold_plan_from_json(buf.str());
}

}  // namespace nirspec
