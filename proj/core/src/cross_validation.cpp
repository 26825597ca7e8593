#include "nirspec/cross_validation.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>
#include <unordered_set>

namespace nirspec {

namespace {

void accumulate(MetricSet& sum, MetricSet& sum_sq, const MetricSet& m) {
  sum.acc += m.acc;
  sum.bacc += m.bacc;
  sum.recall += m.recall;
  sum.precision += m.precision;
  sum.f_score += m.f_score;
  sum.specificity += m.specificity;
  sum_sq.acc += m.acc * m.acc;
  sum_sq.bacc += m.bacc * m.bacc;
  sum_sq.recall += m.recall * m.recall;
  sum_sq.precision += m.precision * m.precision;
  sum_sq.f_score += m.f_score * m.f_score;
  sum_sq.specificity += m.specificity * m.specificity;
}

double sample_std(double sum, double sum_sq, int n) {
  if (n < 2) return 0.0;
  const double mean = sum / n;
  const double var = (sum_sq - n * mean * mean) / (n - 1);
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

FoldResult evaluate_fold(int fold, const PreparedFold& data, const PipelineSpec& spec) {
  const FeatureMatrix train_x = design_matrix(data.train, spec);
  const FeatureMatrix valid_x = design_matrix(data.validation, spec);
  const TrainedModel model = fit_model(train_x.values, train_x.labels, spec);
  const std::vector<int> predicted = model.predict_labels(valid_x.values);
  FoldResult result;
  result.fold = fold;
  result.counts = confusion(valid_x.labels, predicted);
  result.metrics = metrics(result.counts);
  return result;
}

}  // namespace

std::vector<PreparedFold> prepare_cv_folds(const Dataset& train, const FoldPlan& plan,
                                           const PipelineSpec& spec) {
  if (train.empty()) throw EmptyDatasetError("cross-validation over an empty dataset");
  for (const LesionRecord& r : train.records) {
    if (r.synthetic) {
      throw InvalidConfigError("cross-validation input must be synthetic-free; augmentation "
                               "runs per fold (offending id '" + r.id + "')");
    }
  }
  for (const LesionRecord& r : train.records) {
    const auto it = plan.assignment.find(r.id);
    if (it == plan.assignment.end()) {
      throw InvalidConfigError("fold plan does not cover record '" + r.id + "'");
    }
  }
  if (plan.assignment.size() != train.size()) {
    throw InvalidConfigError("fold plan covers " + std::to_string(plan.assignment.size()) +
                             " ids but the dataset has " + std::to_string(train.size()));
  }

  std::vector<PreparedFold> folds(plan.k);
  for (int f = 0; f < plan.k; ++f) {
    folds[f].train.grid = train.grid;
    folds[f].validation.grid = train.grid;
  }
  for (const LesionRecord& r : train.records) {
    const int f = plan.assignment.at(r.id);
    for (int other = 0; other < plan.k; ++other) {
      (other == f ? folds[other].validation : folds[other].train).records.push_back(r);
    }
  }
  for (int f = 0; f < plan.k; ++f) {
    if (folds[f].validation.empty()) {
      throw DegenerateClassError("fold " + std::to_string(f) + " has no validation records");
    }
    folds[f].train = apply_augmentation(folds[f].train, spec, static_cast<std::uint64_t>(f));
  }
  return folds;
}

EvalReport run_prepared_cv(const std::vector<PreparedFold>& folds, const PipelineSpec& spec,
                           int jobs) {
  if (folds.empty()) throw InvalidConfigError("no folds to evaluate");
  if (jobs < 1) jobs = 1;

  EvalReport report;
  report.preprocess = spec.preprocess;
  report.augment = spec.augment;
  report.model = spec.model;
  report.k = static_cast<int>(folds.size());
  report.seed = spec.seed.value;

  // Leakage guard: validation ids must be absent from the (augmented)
  // fold-training set and synthetic-free.
  for (const PreparedFold& fold : folds) {
    std::unordered_set<std::string> train_ids;
    train_ids.reserve(fold.train.size());
    for (const LesionRecord& r : fold.train.records) train_ids.insert(r.id);
    for (const LesionRecord& r : fold.validation.records) {
      if (train_ids.count(r.id) || r.synthetic) report.leakage_violations += 1;
    }
  }

  report.folds.resize(folds.size());
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const int f = next.fetch_add(1);
      if (f >= static_cast<int>(folds.size()) || failed.load()) return;
      try {
        report.folds[f] = evaluate_fold(f, folds[f], spec);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) {
          try {
            std::rethrow_exception(std::current_exception());
          } catch (const Error& e) {
            error = std::make_exception_ptr(
                Error(e.kind(), "fold " + std::to_string(f) + ": " + e.what()));
          } catch (...) {
            error = std::current_exception();
          }
        }
        failed.store(true);
        return;
      }
    }
  };

  const int n_threads = std::min<int>(jobs, static_cast<int>(folds.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);

  MetricSet sum{}, sum_sq{};
  for (const FoldResult& fr : report.folds) {
    accumulate(sum, sum_sq, fr.metrics);
    report.degenerate_ratio_warning |= fr.metrics.degenerate_ratio;
  }
  const int k = report.k;
  report.mean.acc = sum.acc / k;
  report.mean.bacc = sum.bacc / k;
  report.mean.recall = sum.recall / k;
  report.mean.precision = sum.precision / k;
  report.mean.f_score = sum.f_score / k;
  report.mean.specificity = sum.specificity / k;
  report.stddev.acc = sample_std(sum.acc, sum_sq.acc, k);
  report.stddev.bacc = sample_std(sum.bacc, sum_sq.bacc, k);
  report.stddev.recall = sample_std(sum.recall, sum_sq.recall, k);
  report.stddev.precision = sample_std(sum.precision, sum_sq.precision, k);
  report.stddev.f_score = sample_std(sum.f_score, sum_sq.f_score, k);
  report.stddev.specificity = sample_std(sum.specificity, sum_sq.specificity, k);
  return report;
}

EvalReport run_cv(const Dataset& train, const FoldPlan& plan, const PipelineSpec& spec,
                  int jobs) {
  return run_prepared_cv(prepare_cv_folds(train, plan, spec), spec, jobs);
}

TestEvaluation evaluate_test(const Dataset& train, const Dataset& test,
                             const PipelineSpec& spec) {
  if (train.empty() || test.empty()) {
    throw EmptyDatasetError("evaluate_test needs non-empty train and test sets");
  }
  std::unordered_set<std::string> train_ids;
  train_ids.reserve(train.size());
  for (const LesionRecord& r : train.records) train_ids.insert(r.id);
  for (const LesionRecord& r : test.records) {
    if (train_ids.count(r.id)) {
      throw InvalidConfigError("test record '" + r.id + "' also appears in the training set");
    }
    if (r.synthetic) {
      throw InvalidConfigError("test set must be synthetic-free (offending id '" + r.id + "')");
    }
  }

  const Dataset augmented = apply_augmentation(train, spec, 0xf1a1ULL);
  const FeatureMatrix train_x = design_matrix(augmented, spec);
  const FeatureMatrix test_x = design_matrix(test, spec);
  const TrainedModel model = fit_model(train_x.values, train_x.labels, spec);
  const std::vector<int> predicted = model.predict_labels(test_x.values);

  TestEvaluation eval;
  eval.counts = confusion(test_x.labels, predicted);
  eval.metrics = metrics(eval.counts);
  return eval;
}

}  // namespace nirspec
