#include "motorclass/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <map>
#include <numeric>
#include <random>

namespace motorclass {

using nlohmann::json;

int FoldPlan::fold_of(int trial_id) const {
  for (int f = 0; f < k; ++f) {
    const auto& r = right[static_cast<std::size_t>(f)];
    const auto& l = left[static_cast<std::size_t>(f)];
    if (std::find(r.begin(), r.end(), trial_id) != r.end() || std::find(l.begin(), l.end(), trial_id) != l.end())
      return f;
  }
  return -1;
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
  std::mt19937_64 engine(seq);
  return engine();
}

// Splits units (labelled groups) into k stratified folds. Returns fold index per unit.
std::vector<int> stratified_assignment(const std::vector<MotorLabel>& unit_labels, std::uint64_t seed, int k) {
  std::vector<std::size_t> perm(unit_labels.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 engine(seed);
  std::shuffle(perm.begin(), perm.end(), engine);
  std::vector<int> fold(unit_labels.size(), -1);
  int next_right = 0;
  int next_left = 0;
  for (std::size_t u : perm) {
    int& next = unit_labels[u] == MotorLabel::Right ? next_right : next_left;
    fold[u] = next % k;
    ++next;
  }
  return fold;
}

}  // namespace

FoldPlan make_folds(const Dataset& dataset, std::uint64_t seed, int k) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 folds");
  if (static_cast<int>(dataset.count(MotorLabel::Right)) < k || static_cast<int>(dataset.count(MotorLabel::Left)) < k)
    throw Error(ErrorCode::TooFewRows, "need at least " + std::to_string(k) + " trials per side for " +
                                           std::to_string(k) + "-fold cross-validation");
  std::vector<MotorLabel> labels;
  for (const Trial& t : dataset.trials) labels.push_back(t.label);
  const auto fold = stratified_assignment(labels, seed, k);

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.right.resize(static_cast<std::size_t>(k));
  plan.left.resize(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < dataset.trials.size(); ++i) {
    auto& side = dataset.trials[i].label == MotorLabel::Right ? plan.right : plan.left;
    side[static_cast<std::size_t>(fold[i])].push_back(dataset.trials[i].trial_id);
  }
  return plan;
}

void ConfusionMatrix::add(MotorLabel truth, MotorLabel predicted) {
  const bool actual = truth == kPositiveClass;
  const bool said = predicted == kPositiveClass;
  if (actual && said) ++tp;
  else if (!actual && said) ++fp;
  else if (actual && !said) ++fn;
  else ++tn;
}

Metrics compute_metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorCode::TooFewRows, "confusion matrix is empty");
  Metrics m;
  auto ratio = [&m](double num, double den) {
    if (den == 0.0) {
      m.degenerate = true;
      return 0.0;
    }
    return num / den;
  };
  m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
  m.precision = ratio(static_cast<double>(cm.tp), static_cast<double>(cm.tp + cm.fp));
  m.recall = ratio(static_cast<double>(cm.tp), static_cast<double>(cm.tp + cm.fn));
  m.f_score = ratio(2.0 * m.precision * m.recall, m.precision + m.recall);
  return m;
}

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd out;
  if (values.empty()) return out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

SystemReport summarize(std::string name, std::vector<ConfusionMatrix> cells) {
  SystemReport r;
  r.name = std::move(name);
  std::vector<double> acc, prec, rec, f;
  for (const auto& cm : cells) {
    const Metrics m = compute_metrics(cm);
    acc.push_back(100.0 * m.accuracy);
    prec.push_back(100.0 * m.precision);
    rec.push_back(100.0 * m.recall);
    f.push_back(100.0 * m.f_score);
    r.degenerate_folds += m.degenerate ? 1 : 0;
  }
  r.accuracy = mean_std(acc);
  r.precision = mean_std(prec);
  r.recall = mean_std(rec);
  r.f_score = mean_std(f);
  r.per_fold = std::move(cells);
  return r;
}

const SystemReport* EvalReport::find(std::string_view name) const {
  for (const auto& s : systems)
    if (s.name == name) return &s;
  return nullptr;
}

namespace {

struct FoldOutcome {
  std::vector<ConfusionMatrix> model_cm;
  std::optional<ConfusionMatrix> rule_cm;
  FoldRanking ranking;
  std::optional<std::string> error;
};

std::vector<Eigen::Index> rows_of_units(const std::vector<std::vector<Eigen::Index>>& unit_rows,
                                        const std::vector<std::size_t>& units) {
  std::vector<Eigen::Index> rows;
  for (std::size_t u : units) rows.insert(rows.end(), unit_rows[u].begin(), unit_rows[u].end());
  std::sort(rows.begin(), rows.end());
  return rows;
}

class SerializedObserver {
 public:
  explicit SerializedObserver(CvObserver* inner) : inner_(inner) {}
  void scaler(int fold, const FeatureMatrix& m) {
    if (!inner_) return;
    std::lock_guard lock(mutex_);
    inner_->on_scaler_fit(fold, m.origins);
  }
  void train(int fold, ModelKind kind, const FeatureMatrix& m) {
    if (!inner_) return;
    std::lock_guard lock(mutex_);
    inner_->on_train(fold, kind, m.origins);
  }
  void rank(int fold, const FeatureMatrix& m) {
    if (!inner_) return;
    std::lock_guard lock(mutex_);
    inner_->on_rank(fold, m.origins);
  }
  void test(int fold, const FeatureMatrix& m) {
    if (!inner_) return;
    std::lock_guard lock(mutex_);
    inner_->on_test(fold, m.origins);
  }

 private:
  CvObserver* inner_;
  std::mutex mutex_;
};

struct Fitted {
  Scaler scaler;
  std::vector<TrainedModel> models;
};

Fitted fit_all(int fold, const FeatureMatrix& train_set, const TrainConfig& cfg, const std::vector<ModelKind>& kinds,
               SerializedObserver& obs) {
  Fitted out;
  obs.scaler(fold, train_set);
  out.scaler = fit_scaler(train_set.values);
  const Eigen::MatrixXd scaled = apply_scaler(out.scaler, train_set.values);
  for (ModelKind kind : kinds) {
    obs.train(fold, kind, train_set);
    out.models.push_back(train(kind, scaled, train_set.labels, cfg));
  }
  return out;
}

FoldOutcome run_fold(int fold, const FeatureMatrix& features, const std::vector<std::vector<Eigen::Index>>& unit_rows,
                     const std::vector<MotorLabel>& unit_labels, const std::vector<int>& unit_fold,
                     const TrainConfig& train_cfg, const CvConfig& cv_cfg, SerializedObserver& obs) {
  FoldOutcome outcome;
  outcome.ranking.fold = fold;

  std::vector<std::size_t> train_units, test_units;
  for (std::size_t u = 0; u < unit_rows.size(); ++u) (unit_fold[u] == fold ? test_units : train_units).push_back(u);
  const FeatureMatrix train_set = features.select(rows_of_units(unit_rows, train_units));
  const FeatureMatrix test_set = features.select(rows_of_units(unit_rows, test_units));
  const bool fuse = cv_cfg.kinds.size() >= 3;

  std::vector<double> rank_accuracy;
  if (fuse && cv_cfg.ranking == RankingSource::Holdout) {
    // Stratified inner split of the training units; ranking uses models fitted without it.
    std::vector<MotorLabel> labels;
    for (std::size_t u : train_units) labels.push_back(unit_labels[u]);
    std::size_t n_right = 0;
    for (MotorLabel l : labels) n_right += l == MotorLabel::Right;
    const std::size_t n_left = labels.size() - n_right;
    auto holdout_count = [&](std::size_t n) {
      const auto m = static_cast<std::size_t>(std::lround(cv_cfg.calibration_fraction * static_cast<double>(n)));
      return std::clamp<std::size_t>(m, 1, n > 1 ? n - 1 : 1);
    };
    const std::size_t want_right = holdout_count(n_right);
    const std::size_t want_left = holdout_count(n_left);

    std::vector<std::size_t> perm(train_units.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937_64 engine(mix_seed(cv_cfg.seed, 0x5eed0000ULL + static_cast<std::uint64_t>(fold)));
    std::shuffle(perm.begin(), perm.end(), engine);
    std::vector<std::size_t> calib_units, sub_units;
    std::size_t taken_right = 0, taken_left = 0;
    for (std::size_t i : perm) {
      const bool right = labels[i] == MotorLabel::Right;
      std::size_t& taken = right ? taken_right : taken_left;
      if (taken < (right ? want_right : want_left)) {
        calib_units.push_back(train_units[i]);
        ++taken;
      } else {
        sub_units.push_back(train_units[i]);
      }
    }
    const FeatureMatrix sub_set = features.select(rows_of_units(unit_rows, sub_units));
    const FeatureMatrix calib_set = features.select(rows_of_units(unit_rows, calib_units));
    const Fitted sub = fit_all(fold, sub_set, train_cfg, cv_cfg.kinds, obs);
    obs.rank(fold, calib_set);
    const Eigen::MatrixXd calib_scaled = apply_scaler(sub.scaler, calib_set.values);
    for (const auto& m : sub.models) rank_accuracy.push_back(accuracy(m, calib_scaled, calib_set.labels));
  }

  const Fitted full = fit_all(fold, train_set, train_cfg, cv_cfg.kinds, obs);
  if (fuse && cv_cfg.ranking == RankingSource::Train) {
    obs.rank(fold, train_set);
    const Eigen::MatrixXd scaled = apply_scaler(full.scaler, train_set.values);
    for (const auto& m : full.models) rank_accuracy.push_back(accuracy(m, scaled, train_set.labels));
  }

  obs.test(fold, test_set);
  const Eigen::MatrixXd test_scaled = apply_scaler(full.scaler, test_set.values);
  for (const auto& m : full.models) {
    ConfusionMatrix cm;
    const auto predicted = predict_rows(m, test_scaled);
    for (std::size_t i = 0; i < predicted.size(); ++i) cm.add(test_set.labels[i], predicted[i]);
    outcome.model_cm.push_back(cm);
  }

  if (fuse) {
    const auto order = ranking_order(cv_cfg.kinds, rank_accuracy);
    for (std::size_t i : order) outcome.ranking.accuracies.emplace_back(cv_cfg.kinds[i], rank_accuracy[i]);
    const RuleEnsemble ensemble = rank_by_accuracy(full.models, rank_accuracy);
    ConfusionMatrix cm;
    for (Eigen::Index r = 0; r < test_scaled.rows(); ++r)
      cm.add(test_set.labels[static_cast<std::size_t>(r)], rule_predict(ensemble, test_scaled.row(r).transpose()));
    outcome.rule_cm = cm;
  }
  return outcome;
}

}  // namespace

EvalReport run_cv(const FeatureMatrix& features, const TrainConfig& train_cfg, const CvConfig& cv_cfg,
                  CvObserver* observer) {
  train_cfg.validate();
  if (cv_cfg.kinds.empty()) throw Error(ErrorCode::InvalidArgument, "no classifiers selected");
  if (cv_cfg.folds < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 folds");
  if (!(cv_cfg.calibration_fraction > 0.0 && cv_cfg.calibration_fraction < 1.0))
    throw Error(ErrorCode::InvalidArgument, "calibration_fraction must lie in (0, 1)");
  if (features.count(MotorLabel::Right) == 0 || features.count(MotorLabel::Left) == 0)
    throw Error(ErrorCode::MissingLabel, "cross-validation needs both labels");

  // Units are trials (all epochs travel together) or individual rows.
  std::vector<std::vector<Eigen::Index>> unit_rows;
  std::vector<MotorLabel> unit_labels;
  if (cv_cfg.split == SplitLevel::Trial) {
    std::map<int, std::size_t> unit_of_trial;
    for (Eigen::Index r = 0; r < features.rows(); ++r) {
      const int id = features.origins[static_cast<std::size_t>(r)].trial_id;
      auto [it, inserted] = unit_of_trial.try_emplace(id, unit_rows.size());
      if (inserted) {
        unit_rows.emplace_back();
        unit_labels.push_back(features.labels[static_cast<std::size_t>(r)]);
      }
      unit_rows[it->second].push_back(r);
    }
  } else {
    for (Eigen::Index r = 0; r < features.rows(); ++r) {
      unit_rows.push_back({r});
      unit_labels.push_back(features.labels[static_cast<std::size_t>(r)]);
    }
  }
  const auto right_units = std::count(unit_labels.begin(), unit_labels.end(), MotorLabel::Right);
  const auto left_units = static_cast<std::ptrdiff_t>(unit_labels.size()) - right_units;
  if (right_units < cv_cfg.folds || left_units < cv_cfg.folds)
    throw Error(ErrorCode::TooFewRows, "need at least " + std::to_string(cv_cfg.folds) + " units per side");

  const auto unit_fold = stratified_assignment(unit_labels, cv_cfg.seed, cv_cfg.folds);
  SerializedObserver obs(observer);

  std::vector<FoldOutcome> outcomes(static_cast<std::size_t>(cv_cfg.folds));
  if (cv_cfg.threads > 1) {
    std::vector<std::future<FoldOutcome>> pending;
    for (int f = 0; f < cv_cfg.folds; ++f) {
      pending.push_back(std::async(std::launch::async, [&, f] {
        return run_fold(f, features, unit_rows, unit_labels, unit_fold, train_cfg, cv_cfg, obs);
      }));
      if (static_cast<int>(pending.size()) >= cv_cfg.threads || f + 1 == cv_cfg.folds) {
        const int first = f + 1 - static_cast<int>(pending.size());
        for (std::size_t i = 0; i < pending.size(); ++i) outcomes[static_cast<std::size_t>(first) + i] = pending[i].get();
        pending.clear();
      }
    }
  } else {
    for (int f = 0; f < cv_cfg.folds; ++f)
      outcomes[static_cast<std::size_t>(f)] = run_fold(f, features, unit_rows, unit_labels, unit_fold, train_cfg, cv_cfg, obs);
  }

  EvalReport report;
  report.seed = cv_cfg.seed;
  for (std::size_t m = 0; m < cv_cfg.kinds.size(); ++m) {
    std::vector<ConfusionMatrix> cells;
    for (const auto& o : outcomes) cells.push_back(o.model_cm[m]);
    report.systems.push_back(summarize(std::string(to_string(cv_cfg.kinds[m])), std::move(cells)));
  }
  if (cv_cfg.kinds.size() >= 3) {
    std::vector<ConfusionMatrix> cells;
    for (const auto& o : outcomes) cells.push_back(*o.rule_cm);
    report.systems.push_back(summarize(std::string(kRuleSystemName), std::move(cells)));
    for (auto& o : outcomes) report.rankings.push_back(std::move(o.ranking));
  } else {
    report.errors.push_back("rule fusion needs at least 3 classifiers; got " + std::to_string(cv_cfg.kinds.size()));
  }
  return report;
}

EvalReport run_cv(const Dataset& dataset, const dsp::FirFilter& filter, const FeatureConfig& feature_cfg,
                  const TrainConfig& train_cfg, const CvConfig& cv_cfg, CvObserver* observer) {
  EvalReport report = run_cv(build_feature_matrix(dataset, filter, feature_cfg), train_cfg, cv_cfg, observer);
  report.subject_id = dataset.subject_id;
  return report;
}

namespace {

json system_json(const SystemReport& s, bool with_folds) {
  json j;
  j["kind"] = s.name;
  j["accuracy_mean"] = s.accuracy.mean;
  j["accuracy_std"] = s.accuracy.std;
  j["precision_mean"] = s.precision.mean;
  j["precision_std"] = s.precision.std;
  j["recall_mean"] = s.recall.mean;
  j["recall_std"] = s.recall.std;
  j["f_score_mean"] = s.f_score.mean;
  j["f_score_std"] = s.f_score.std;
  if (with_folds) {
    j["degenerate_folds"] = s.degenerate_folds;
    j["per_fold"] = json::array();
    for (const auto& cm : s.per_fold) j["per_fold"].push_back({{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}});
  }
  return j;
}

}  // namespace

json to_json(const EvalReport& report) {
  json j;
  j["subject_id"] = report.subject_id;
  j["seed"] = report.seed;
  j["config"] = report.config;
  j["classifiers"] = json::array();
  for (const auto& s : report.systems) j["classifiers"].push_back(system_json(s, true));
  j["rankings"] = json::array();
  for (const auto& r : report.rankings) {
    json fold{{"fold", r.fold}, {"ranked", json::array()}};
    for (const auto& [kind, acc] : r.accuracies)
      fold["ranked"].push_back({{"kind", std::string(to_string(kind))}, {"calibration_accuracy", acc}});
    j["rankings"].push_back(std::move(fold));
  }
  j["errors"] = report.errors;
  return j;
}

EvalReport report_from_json(const json& j) {
  try {
    EvalReport report;
    report.subject_id = j.at("subject_id").get<std::string>();
    report.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("config")) report.config = j.at("config");
    for (const json& c : j.at("classifiers")) {
      std::vector<ConfusionMatrix> cells;
      for (const json& f : c.at("per_fold"))
        cells.push_back({f.at("tp").get<std::size_t>(), f.at("fp").get<std::size_t>(), f.at("fn").get<std::size_t>(),
                         f.at("tn").get<std::size_t>()});
      report.systems.push_back(summarize(c.at("kind").get<std::string>(), std::move(cells)));
    }
    if (j.contains("rankings"))
      for (const json& r : j.at("rankings")) {
        FoldRanking fr;
        fr.fold = r.at("fold").get<int>();
        for (const json& e : r.at("ranked")) {
          const auto kind = model_kind_from_string(e.at("kind").get<std::string>());
          if (!kind) throw Error(ErrorCode::ParseError, "unknown kind in ranking");
          fr.accuracies.emplace_back(*kind, e.at("calibration_accuracy").get<double>());
        }
        report.rankings.push_back(std::move(fr));
      }
    if (j.contains("errors")) report.errors = j.at("errors").get<std::vector<std::string>>();
    return report;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("report JSON: ") + e.what());
  }
}

BatchReport combine_reports(const std::vector<EvalReport>& reports) {
  BatchReport batch;
  if (reports.empty()) return batch;
  for (const auto& first : reports.front().systems) {
    std::vector<ConfusionMatrix> cells;
    std::vector<double> acc, prec, rec, f;
    for (const auto& r : reports) {
      const SystemReport* s = r.find(first.name);
      if (!s) throw Error(ErrorCode::InvalidArgument, "report for " + r.subject_id + " lacks " + first.name);
      cells.insert(cells.end(), s->per_fold.begin(), s->per_fold.end());
      acc.push_back(s->accuracy.mean);
      prec.push_back(s->precision.mean);
      rec.push_back(s->recall.mean);
      f.push_back(s->f_score.mean);
    }
    batch.cells.push_back(summarize(first.name, std::move(cells)));
    SystemReport subjects;
    subjects.name = first.name;
    subjects.accuracy = mean_std(acc);
    subjects.precision = mean_std(prec);
    subjects.recall = mean_std(rec);
    subjects.f_score = mean_std(f);
    batch.subject_means.push_back(std::move(subjects));
  }
  return batch;
}

json to_json(const BatchReport& batch) {
  json j;
  j["over_subject_folds"] = json::array();
  for (const auto& s : batch.cells) j["over_subject_folds"].push_back(system_json(s, false));
  j["over_subjects"] = json::array();
  for (const auto& s : batch.subject_means) j["over_subjects"].push_back(system_json(s, false));
  return j;
}

void write_report_csv(const std::vector<SystemReport>& systems, std::ostream& out) {
  out << "classifier,accuracy_mean,accuracy_std,precision_mean,precision_std,recall_mean,recall_std,f_score_mean,"
         "f_score_std\n";
  char buf[256];
  for (const auto& s : systems) {
    std::snprintf(buf, sizeof(buf), "%s,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f\n", s.name.c_str(), s.accuracy.mean,
                  s.accuracy.std, s.precision.mean, s.precision.std, s.recall.mean, s.recall.std, s.f_score.mean,
                  s.f_score.std);
    out << buf;
  }
}

void print_summary(const std::vector<SystemReport>& systems, std::ostream& out) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-14s %-16s %-16s %-16s %-16s\n", "Classifier(%)", "Accuracy", "Precision", "Recall",
                "F-score");
  out << buf;
  auto cell = [](const MeanStd& m) {
    char c[32];
    std::snprintf(c, sizeof(c), "%6.2f +/- %5.2f", m.mean, m.std);
    return std::string(c);
  };
  for (const auto& s : systems) {
    std::snprintf(buf, sizeof(buf), "%-14s %-16s %-16s %-16s %-16s\n", s.name.c_str(), cell(s.accuracy).c_str(),
                  cell(s.precision).c_str(), cell(s.recall).c_str(), cell(s.f_score).c_str());
    out << buf;
  }
}

}  // namespace motorclass
