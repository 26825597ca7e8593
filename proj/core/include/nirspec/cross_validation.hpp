#pragma once

#include <vector>

#include "nirspec/metrics.hpp"
#include "nirspec/pipeline.hpp"
#include "nirspec/split.hpp"

namespace nirspec {

struct FoldResult {
  int fold = 0;
  ConfusionCounts counts;
  MetricSet metrics;
};

/// Cross-validation outcome: per-fold metrics and their mean +/- sample
/// standard deviation (n-1 over folds). The numbers are CV-validation
/// statistics. leakage_violations counts validation records that were
/// visible to augmentation or are synthetic; it is always 0 for folds built
/// by prepare_cv_folds.
struct EvalReport {
  PreprocessArm preprocess = PreprocessArm::Raw;
  AugmentArm augment = AugmentArm::None;
  ModelKind model = ModelKind::Gbdt;
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<FoldResult> folds;
  MetricSet mean;
  MetricSet stddev;
  int leakage_violations = 0;
  bool degenerate_ratio_warning = false;
};

/// One fold's data after augmentation: train holds the fold-training
/// portion (plus synthetics), validation is untouched and synthetic-free.
struct PreparedFold {
  Dataset train;
  Dataset validation;
};

/// Splits the training set by the fold plan and applies the augmentation
/// arm to each fold-training portion. The input must be synthetic-free and
/// exactly covered by the plan. Augmentation never sees validation records.
std::vector<PreparedFold> prepare_cv_folds(const Dataset& train, const FoldPlan& plan,
                                           const PipelineSpec& spec);

/// Preprocesses, fits and scores every prepared fold. Folds may run on up
/// to `jobs` threads; results are independent of the thread count.
EvalReport run_prepared_cv(const std::vector<PreparedFold>& folds, const PipelineSpec& spec,
                           int jobs = 1);

EvalReport run_cv(const Dataset& train, const FoldPlan& plan, const PipelineSpec& spec,
                  int jobs = 1);

struct TestEvaluation {
  ConfusionCounts counts;
  MetricSet metrics;
};

/// Trains on the full (augmented) training set and evaluates once on the
/// untouched test set. Train and test ids must be disjoint and the test set
/// synthetic-free.
TestEvaluation evaluate_test(const Dataset& train, const Dataset& test,
                             const PipelineSpec& spec);

}  // namespace nirspec
