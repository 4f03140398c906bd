#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "motorclass/error.hpp"
#include "motorclass/types.hpp"

namespace motorclass {

enum class ModelKind { SVM, KNN, NaiveBayes, Boosting, LDA };

inline constexpr std::array<ModelKind, 5> kAllModelKinds{ModelKind::SVM, ModelKind::KNN, ModelKind::NaiveBayes,
                                                         ModelKind::Boosting, ModelKind::LDA};

std::string_view to_string(ModelKind kind);
std::optional<ModelKind> model_kind_from_string(std::string_view name);

struct SvmConfig {
  double C = 1.0;
  int epochs = 200;
  std::uint64_t seed = 0;
};

struct KnnConfig {
  int k = 5;
};

struct BoostingConfig {
  int rounds = 50;
};

struct LdaConfig {
  double shrinkage = 1e-3;
};

struct NaiveBayesConfig {
  /// Variance floor as a multiple of the mean per-feature variance.
  double variance_floor = 1e-9;
};

struct TrainConfig {
  SvmConfig svm;
  KnnConfig knn;
  BoostingConfig boosting;
  LdaConfig lda;
  NaiveBayesConfig nb;

  void validate() const;
};

struct SvmParams {
  Eigen::VectorXd w;
  double b = 0.0;
};

struct KnnParams {
  Eigen::MatrixXd rows;
  std::vector<MotorLabel> labels;
  int k = 5;
};

struct NaiveBayesParams {
  Eigen::VectorXd mean_right, var_right;
  Eigen::VectorXd mean_left, var_left;
  double log_prior_right = 0.0;
  double log_prior_left = 0.0;
};

/// h(x) = polarity if x[feature] > threshold, else -polarity.
struct Stump {
  int feature = 0;
  double threshold = 0.0;
  int polarity = 1;
  double alpha = 0.0;
};

struct BoostingParams {
  std::vector<Stump> stumps;
};

/// Right iff w.x >= threshold.
struct LdaParams {
  Eigen::VectorXd w;
  double threshold = 0.0;
};

using ModelParams = std::variant<SvmParams, KnnParams, NaiveBayesParams, BoostingParams, LdaParams>;

struct TrainedModel {
  ModelKind kind = ModelKind::SVM;
  ModelParams params;
  MotorLabel positive_class = kPositiveClass;
  Eigen::Index width = 0;
};

TrainedModel train_svm(const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<MotorLabel>& y,
                       const SvmConfig& cfg = {});
TrainedModel train_knn(const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<MotorLabel>& y,
                       const KnnConfig& cfg = {});
TrainedModel train_naive_bayes(const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<MotorLabel>& y,
                               const NaiveBayesConfig& cfg = {});

/// Sample weights before every round, plus the weights after the last one.
struct BoostingTrace {
  std::vector<Eigen::VectorXd> weights;
  std::vector<double> errors;
};
TrainedModel train_adaboost(const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<MotorLabel>& y,
                            const BoostingConfig& cfg = {}, BoostingTrace* trace = nullptr);
TrainedModel train_lda(const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<MotorLabel>& y,
                       const LdaConfig& cfg = {});

TrainedModel train(ModelKind kind, const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<MotorLabel>& y,
                   const TrainConfig& cfg = {});

MotorLabel predict(const TrainedModel& model, const Eigen::Ref<const Eigen::VectorXd>& row);
std::vector<MotorLabel> predict_rows(const TrainedModel& model, const Eigen::Ref<const Eigen::MatrixXd>& rows);

/// Fraction of rows whose prediction matches the label.
double accuracy(const TrainedModel& model, const Eigen::Ref<const Eigen::MatrixXd>& rows,
                const std::vector<MotorLabel>& labels);

nlohmann::json to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& j);

}  // namespace motorclass
