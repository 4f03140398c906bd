#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "motorclass/classifiers.hpp"
#include "motorclass/features.hpp"
#include "motorclass/fusion.hpp"

namespace motorclass {

/// Trial ids per side per fold. Folds are stratified by label.
struct FoldPlan {
  int k = 3;
  std::uint64_t seed = 0;
  std::vector<std::vector<int>> right;
  std::vector<std::vector<int>> left;

  /// Fold containing the trial, or -1.
  int fold_of(int trial_id) const;
};

/// Seeded stratified split: one label-agnostic permutation of all trials, then
/// round-robin assignment to k folds within each side.
FoldPlan make_folds(const Dataset& dataset, std::uint64_t seed, int k = 3);

/// Positive = Right.
struct ConfusionMatrix {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  void add(MotorLabel truth, MotorLabel predicted);
  /// Counts under swapped labels: tp<->tn, fp<->fn.
  ConfusionMatrix swapped() const { return {tn, fn, fp, tp}; }
  bool operator==(const ConfusionMatrix&) const = default;
};

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  /// Set when any ratio was 0/0 and defined as 0.
  bool degenerate = false;
};

Metrics compute_metrics(const ConfusionMatrix& cm);

/// Percent, mean and sample standard deviation.
struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& values);

struct SystemReport {
  std::string name;
  std::vector<ConfusionMatrix> per_fold;
  MeanStd accuracy, precision, recall, f_score;
  int degenerate_folds = 0;
};

/// Summary statistics over the given confusion matrices (one per cell).
SystemReport summarize(std::string name, std::vector<ConfusionMatrix> cells);

struct FoldRanking {
  int fold = 0;
  std::vector<std::pair<ModelKind, double>> accuracies;  // all scored models, best first
};

struct EvalReport {
  std::string subject_id;
  std::uint64_t seed = 0;
  std::vector<SystemReport> systems;
  std::vector<FoldRanking> rankings;
  std::vector<std::string> errors;
  nlohmann::json config = nlohmann::json::object();

  const SystemReport* find(std::string_view name) const;
};

enum class SplitLevel { Trial, Epoch };
enum class RankingSource { Holdout, Train };

struct CvConfig {
  std::uint64_t seed = 0;
  int folds = 3;
  SplitLevel split = SplitLevel::Trial;
  RankingSource ranking = RankingSource::Holdout;
  double calibration_fraction = 0.25;
  std::vector<ModelKind> kinds{kAllModelKinds.begin(), kAllModelKinds.end()};
  int threads = 1;
};

/// Receives the provenance of every row set that reaches a fitted object.
/// Calls are serialized even when folds run in parallel.
class CvObserver {
 public:
  virtual ~CvObserver() = default;
  virtual void on_scaler_fit(int /*fold*/, std::span<const RowOrigin> /*rows*/) {}
  virtual void on_train(int /*fold*/, ModelKind /*kind*/, std::span<const RowOrigin> /*rows*/) {}
  virtual void on_rank(int /*fold*/, std::span<const RowOrigin> /*rows*/) {}
  virtual void on_test(int /*fold*/, std::span<const RowOrigin> /*rows*/) {}
};

inline constexpr std::string_view kRuleSystemName = "Rule";

/// Cross-validates the five classifiers and the rule ensemble over precomputed features.
EvalReport run_cv(const FeatureMatrix& features, const TrainConfig& train_cfg, const CvConfig& cv_cfg,
                  CvObserver* observer = nullptr);

/// Builds features with the given filter, then cross-validates.
EvalReport run_cv(const Dataset& dataset, const dsp::FirFilter& filter, const FeatureConfig& feature_cfg,
                  const TrainConfig& train_cfg, const CvConfig& cv_cfg, CvObserver* observer = nullptr);

nlohmann::json to_json(const EvalReport& report);
/// Rebuilds a report from JSON; summaries are recomputed from the per-fold matrices.
EvalReport report_from_json(const nlohmann::json& j);

/// Cells pooled over subjects x folds, plus the spread of per-subject means.
struct BatchReport {
  std::vector<SystemReport> cells;
  std::vector<SystemReport> subject_means;  // per_fold left empty; stats over subject accuracies
};
BatchReport combine_reports(const std::vector<EvalReport>& reports);
nlohmann::json to_json(const BatchReport& batch);

/// classifier,accuracy_mean,accuracy_std,precision_mean,...,f_score_std
void write_report_csv(const std::vector<SystemReport>& systems, std::ostream& out);
/// Human-readable "mean ± std" table.
void print_summary(const std::vector<SystemReport>& systems, std::ostream& out);

}  // namespace motorclass
