#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nirspec/types.hpp"

namespace nirspec {

/// Stratified train/test split. Stratification key is the six-way lesion
/// type. The total test size is ceil(test_fraction * N) and is allocated to
/// strata by largest remainder (ties: larger stratum first, then lesion
/// order), so every stratum's test count is within 1 of fraction * size.
/// Synthetic records are never placed in the test set.
struct SplitSpec {
  double test_fraction = 0.2;
  RngSeed seed;
  /// When set, a stratum left empty on either side raises DegenerateClass.
  bool require_nonempty_strata = false;
};

std::pair<Dataset, Dataset> stratified_split(const Dataset& dataset, const SplitSpec& spec);

/// Assignment of training records to k cross-validation folds, stratified by
/// lesion type. Fold sizes differ by at most one; each fold holds floor or
/// ceil of stratum_size/k records of every stratum.
struct FoldPlan {
  int k = 5;
  RngSeed seed;
  std::map<std::string, int> assignment;  // record id -> fold index

  std::vector<std::string> fold_ids(int fold) const;
};

FoldPlan make_folds(const Dataset& train, int k, RngSeed seed);

std::string fold_plan_to_json(const FoldPlan& plan);
FoldPlan fold_plan_from_json(const std::string& text);
void write_fold_plan(const FoldPlan& plan, const std::string& path);
FoldPlan read_fold_plan(const std::string& path);

}  // namespace nirspec
