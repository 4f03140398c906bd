#pragma once

#include <array>
#include <vector>

#include "motorclass/classifiers.hpp"

namespace motorclass {

/// Top three models by calibration accuracy, combined by the positive-first rule table.
struct RuleEnsemble {
  std::array<TrainedModel, 3> ranked;
  std::array<double, 3> calibration_accuracy{};
  MotorLabel positive_class = kPositiveClass;
};

/// Precedence used when calibration accuracies tie: SVM, LDA, Boosting, KNN, NaiveBayes.
int tie_precedence(ModelKind kind);

/// Truth table: Positive iff the first-ranked model is Positive and at least one of
/// the other two agrees.
constexpr bool rule_decision(bool first, bool second, bool third) { return first && (second || third); }

/// Ranks pre-scored models. Needs at least three models of distinct kinds.
RuleEnsemble rank_by_accuracy(std::vector<TrainedModel> models, const std::vector<double>& accuracies);

/// Scores each model on the calibration rows, then ranks.
RuleEnsemble rank_models(std::vector<TrainedModel> models, const Eigen::Ref<const Eigen::MatrixXd>& calib_rows,
                         const std::vector<MotorLabel>& calib_labels);

/// Order (best first) of model indices by accuracy with the precedence tie policy.
std::vector<std::size_t> ranking_order(const std::vector<ModelKind>& kinds, const std::vector<double>& accuracies);

MotorLabel rule_predict(const RuleEnsemble& ensemble, const Eigen::Ref<const Eigen::VectorXd>& row);

nlohmann::json to_json(const RuleEnsemble& ensemble);
RuleEnsemble ensemble_from_json(const nlohmann::json& j);

}  // namespace motorclass
