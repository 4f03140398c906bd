#include "motorclass/fusion.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace motorclass {

using nlohmann::json;

int tie_precedence(ModelKind kind) {
  switch (kind) {
    case ModelKind::SVM: return 0;
    case ModelKind::LDA: return 1;
    case ModelKind::Boosting: return 2;
    case ModelKind::KNN: return 3;
    case ModelKind::NaiveBayes: return 4;
  }
  return 5;
}

std::vector<std::size_t> ranking_order(const std::vector<ModelKind>& kinds, const std::vector<double>& accuracies) {
  if (kinds.size() != accuracies.size())
    throw Error(ErrorCode::InvalidArgument, "one accuracy per model is required");
  std::vector<std::size_t> order(kinds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (accuracies[a] != accuracies[b]) return accuracies[a] > accuracies[b];
    return tie_precedence(kinds[a]) < tie_precedence(kinds[b]);
  });
  return order;
}

RuleEnsemble rank_by_accuracy(std::vector<TrainedModel> models, const std::vector<double>& accuracies) {
  if (models.size() < 3) throw Error(ErrorCode::InvalidArgument, "rule fusion needs at least 3 classifiers");
  std::vector<ModelKind> kinds;
  std::set<ModelKind> distinct;
  for (const auto& m : models) {
    kinds.push_back(m.kind);
    distinct.insert(m.kind);
  }
  if (distinct.size() != models.size()) throw Error(ErrorCode::InvalidArgument, "rule fusion needs distinct model kinds");
  for (double a : accuracies)
    if (!(a >= 0.0 && a <= 1.0)) throw Error(ErrorCode::InvalidArgument, "accuracies must lie in [0, 1]");

  const auto order = ranking_order(kinds, accuracies);
  RuleEnsemble ensemble{{std::move(models[order[0]]), std::move(models[order[1]]), std::move(models[order[2]])},
                        {accuracies[order[0]], accuracies[order[1]], accuracies[order[2]]},
                        kPositiveClass};
  return ensemble;
}

RuleEnsemble rank_models(std::vector<TrainedModel> models, const Eigen::Ref<const Eigen::MatrixXd>& calib_rows,
                         const std::vector<MotorLabel>& calib_labels) {
  if (calib_rows.rows() == 0) throw Error(ErrorCode::TooFewRows, "calibration set is empty");
  std::vector<double> accuracies;
  accuracies.reserve(models.size());
  for (const auto& m : models) accuracies.push_back(accuracy(m, calib_rows, calib_labels));
  return rank_by_accuracy(std::move(models), accuracies);
}

MotorLabel rule_predict(const RuleEnsemble& ensemble, const Eigen::Ref<const Eigen::VectorXd>& row) {
  std::array<bool, 3> positive{};
  for (std::size_t i = 0; i < 3; ++i) positive[i] = predict(ensemble.ranked[i], row) == ensemble.positive_class;
  return rule_decision(positive[0], positive[1], positive[2]) ? ensemble.positive_class
                                                              : opposite(ensemble.positive_class);
}

json to_json(const RuleEnsemble& ensemble) {
  json j;
  j["positive_class"] = static_cast<int>(ensemble.positive_class);
  j["ranked"] = json::array();
  for (std::size_t i = 0; i < 3; ++i)
    j["ranked"].push_back(
        {{"rank", i + 1}, {"calibration_accuracy", ensemble.calibration_accuracy[i]}, {"model", to_json(ensemble.ranked[i])}});
  return j;
}

RuleEnsemble ensemble_from_json(const json& j) {
  try {
    const json& ranked = j.at("ranked");
    if (!ranked.is_array() || ranked.size() != 3) throw Error(ErrorCode::ParseError, "ensemble must rank exactly 3 models");
    RuleEnsemble e;
    const auto label = label_from_int(j.at("positive_class").get<int>());
    if (!label) throw Error(ErrorCode::UnknownLabel, "positive_class must be 1 or 2");
    e.positive_class = *label;
    for (std::size_t i = 0; i < 3; ++i) {
      e.ranked[i] = model_from_json(ranked[i].at("model"));
      e.calibration_accuracy[i] = ranked[i].at("calibration_accuracy").get<double>();
    }
    return e;
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::ParseError, std::string("ensemble JSON: ") + ex.what());
  }
}

}  // namespace motorclass
