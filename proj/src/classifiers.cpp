#include "motorclass/classifiers.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

namespace motorclass {

using nlohmann::json;

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::SVM: return "SVM";
    case ModelKind::KNN: return "KNN";
    case ModelKind::NaiveBayes: return "NaiveBayes";
    case ModelKind::Boosting: return "Boosting";
    case ModelKind::LDA: return "LDA";
  }
  return "";
}

std::optional<ModelKind> model_kind_from_string(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "svm") return ModelKind::SVM;
  if (lower == "knn") return ModelKind::KNN;
  if (lower == "naivebayes" || lower == "nb") return ModelKind::NaiveBayes;
  if (lower == "boosting" || lower == "adaboost") return ModelKind::Boosting;
  if (lower == "lda") return ModelKind::LDA;
  return std::nullopt;
}

void TrainConfig::validate() const {
  if (!(svm.C > 0.0 && std::isfinite(svm.C))) throw Error(ErrorCode::InvalidArgument, "svm.C must be positive");
  if (svm.epochs < 1) throw Error(ErrorCode::InvalidArgument, "svm.epochs must be positive");
  if (knn.k < 1 || knn.k % 2 == 0) throw Error(ErrorCode::InvalidArgument, "knn.k must be positive and odd");
  if (boosting.rounds < 1) throw Error(ErrorCode::InvalidArgument, "boosting.rounds must be positive");
  if (!(lda.shrinkage > 0.0 && std::isfinite(lda.shrinkage)))
    throw Error(ErrorCode::InvalidArgument, "lda.shrinkage must be positive");
  if (!(nb.variance_floor > 0.0 && std::isfinite(nb.variance_floor)))
    throw Error(ErrorCode::InvalidArgument, "nb.variance_floor must be positive");
}

namespace {

double sign_of(MotorLabel label) { return label == MotorLabel::Right ? 1.0 : -1.0; }
MotorLabel label_of(double score) { return score >= 0.0 ? MotorLabel::Right : MotorLabel::Left; }

struct ClassCounts {
  std::size_t right = 0;
  std::size_t left = 0;
};

ClassCounts check_inputs(const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<MotorLabel>& y) {
  if (static_cast<std::size_t>(X.rows()) != y.size())
    throw Error(ErrorCode::InvalidArgument,
                std::to_string(X.rows()) + " rows but " + std::to_string(y.size()) + " labels");
  if (X.rows() == 0 || X.cols() == 0) throw Error(ErrorCode::TooFewRows, "training set is empty");
  if (!X.allFinite()) throw Error(ErrorCode::NonFinite, "training rows contain non-finite values");
  ClassCounts counts;
  for (MotorLabel l : y) (l == MotorLabel::Right ? counts.right : counts.left)++;
  return counts;
}

void require_both_classes(const ClassCounts& counts, std::size_t minimum, std::string_view who) {
  if (counts.right == 0 || counts.left == 0)
    throw Error(ErrorCode::SingleClass, std::string(who) + " needs rows of both classes");
  if (counts.right < minimum || counts.left < minimum)
    throw Error(ErrorCode::TooFewRows,
                std::string(who) + " needs at least " + std::to_string(minimum) + " rows per class");
}

// Lexicographic order on absolute values, then signed values, then label. Training on
// this order makes every learner independent of the caller's row order, and the order is
// unchanged when all rows are negated or all labels flipped.
std::vector<Eigen::Index> canonical_order(const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<MotorLabel>& y) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(X.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      const double ma = std::fabs(X(a, j)), mb = std::fabs(X(b, j));
      if (ma != mb) return ma < mb;
    }
    for (Eigen::Index j = 0; j < X.cols(); ++j)
      if (X(a, j) != X(b, j)) return X(a, j) < X(b, j);
    return static_cast<int>(y[static_cast<std::size_t>(a)]) < static_cast<int>(y[static_cast<std::size_t>(b)]);
  });
  return order;
}

struct Canonical {
  Eigen::MatrixXd X;
  std::vector<MotorLabel> y;
  std::vector<Eigen::Index> order;  // canonical position -> input row
};

Canonical canonicalize(const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<MotorLabel>& y) {
  Canonical c;
  c.order = canonical_order(X, y);
  c.X.resize(X.rows(), X.cols());
  c.y.reserve(y.size());
  for (std::size_t i = 0; i < c.order.size(); ++i) {
    c.X.row(static_cast<Eigen::Index>(i)) = X.row(c.order[i]);
    c.y.push_back(y[static_cast<std::size_t>(c.order[i])]);
  }
  return c;
}

void check_width(const TrainedModel& model, Eigen::Index width) {
  if (width != model.width)
    throw Error(ErrorCode::WidthMismatch,
                "row width " + std::to_string(width) + " does not match model width " + std::to_string(model.width));
}

double naive_bayes_score(const Eigen::VectorXd& mean, const Eigen::VectorXd& var, double log_prior,
                         const Eigen::Ref<const Eigen::VectorXd>& x) {
  const double log_two_pi = std::log(2.0 * std::numbers::pi);
  return log_prior - 0.5 * ((var.array().log() + log_two_pi) + (x - mean).array().square() / var.array()).sum();
}

}  // namespace

TrainedModel train_svm(const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<MotorLabel>& y,
                       const SvmConfig& cfg) {
  require_both_classes(check_inputs(X, y), 1, "SVM");
  if (!(cfg.C > 0.0) || cfg.epochs < 1) throw Error(ErrorCode::InvalidArgument, "invalid SVM configuration");

  const Canonical data = canonicalize(X, y);
  const Eigen::Index n = data.X.rows();
  const Eigen::Index d = data.X.cols();
  const double lambda = 1.0 / (cfg.C * static_cast<double>(n));

  // Pegasos on the bias-augmented problem: the bias is the last weight and is regularized.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double b = 0.0;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng(cfg.seed);
  std::uint64_t t = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double yi = sign_of(data.y[static_cast<std::size_t>(i)]);
      const double margin = yi * (data.X.row(i).dot(w) + b);
      const double decay = 1.0 - 1.0 / static_cast<double>(t);
      w *= decay;
      b *= decay;
      if (margin < 1.0) {
        w.noalias() += (eta * yi) * data.X.row(i).transpose();
        b += eta * yi;
      }
    }
  }
  if (!w.allFinite() || !std::isfinite(b)) throw Error(ErrorCode::NumericFailure, "SVM weights diverged");
  return {ModelKind::SVM, SvmParams{std::move(w), b}, kPositiveClass, d};
}

TrainedModel train_knn(const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<MotorLabel>& y,
                       const KnnConfig& cfg) {
  check_inputs(X, y);
  if (cfg.k < 1 || cfg.k % 2 == 0) throw Error(ErrorCode::InvalidArgument, "knn.k must be positive and odd");
  if (X.rows() < cfg.k)
    throw Error(ErrorCode::TooFewRows,
                "KNN needs at least k=" + std::to_string(cfg.k) + " rows, got " + std::to_string(X.rows()));
  Canonical data = canonicalize(X, y);
  return {ModelKind::KNN, KnnParams{std::move(data.X), std::move(data.y), cfg.k}, kPositiveClass, X.cols()};
}

TrainedModel train_naive_bayes(const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<MotorLabel>& y,
                               const NaiveBayesConfig& cfg) {
  const ClassCounts counts = check_inputs(X, y);
  require_both_classes(counts, 2, "NaiveBayes");
  const Canonical data = canonicalize(X, y);
  const Eigen::Index d = data.X.cols();

  auto moments = [&](MotorLabel label, Eigen::VectorXd& mean, Eigen::VectorXd& var) {
    mean = Eigen::VectorXd::Zero(d);
    var = Eigen::VectorXd::Zero(d);
    double count = 0.0;
    for (Eigen::Index i = 0; i < data.X.rows(); ++i)
      if (data.y[static_cast<std::size_t>(i)] == label) {
        mean += data.X.row(i).transpose();
        count += 1.0;
      }
    mean /= count;
    for (Eigen::Index i = 0; i < data.X.rows(); ++i)
      if (data.y[static_cast<std::size_t>(i)] == label) var += (data.X.row(i).transpose() - mean).cwiseAbs2();
    var /= (count - 1.0);
  };

  NaiveBayesParams p;
  moments(MotorLabel::Right, p.mean_right, p.var_right);
  moments(MotorLabel::Left, p.mean_left, p.var_left);

  const Eigen::RowVectorXd overall_mean = data.X.colwise().mean();
  const double mean_variance =
      ((data.X.rowwise() - overall_mean).colwise().squaredNorm() / static_cast<double>(data.X.rows() - 1)).mean();
  const double floor = mean_variance > 0.0 ? cfg.variance_floor * mean_variance : cfg.variance_floor;
  p.var_right = p.var_right.cwiseMax(floor);
  p.var_left = p.var_left.cwiseMax(floor);

  const double n = static_cast<double>(data.X.rows());
  p.log_prior_right = std::log(static_cast<double>(counts.right) / n);
  p.log_prior_left = std::log(static_cast<double>(counts.left) / n);
  return {ModelKind::NaiveBayes, std::move(p), kPositiveClass, d};
}

TrainedModel train_adaboost(const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<MotorLabel>& y,
                            const BoostingConfig& cfg, BoostingTrace* trace) {
  require_both_classes(check_inputs(X, y), 1, "Boosting");
  if (cfg.rounds < 1) throw Error(ErrorCode::InvalidArgument, "boosting.rounds must be positive");

  const Canonical data = canonicalize(X, y);
  const Eigen::Index n = data.X.rows();
  const Eigen::Index d = data.X.cols();

  Eigen::VectorXd ys(n);
  for (Eigen::Index i = 0; i < n; ++i) ys(i) = sign_of(data.y[static_cast<std::size_t>(i)]);

  std::vector<std::vector<Eigen::Index>> sorted(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j) {
    auto& idx = sorted[static_cast<std::size_t>(j)];
    idx.resize(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return data.X(a, j) < data.X(b, j); });
  }

  auto record = [&](const Eigen::VectorXd& weights) {
    if (!trace) return;
    Eigen::VectorXd original(n);
    for (Eigen::Index i = 0; i < n; ++i) original(data.order[static_cast<std::size_t>(i)]) = weights(i);
    trace->weights.push_back(std::move(original));
  };

  BoostingParams params;
  Eigen::VectorXd weights = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  record(weights);

  for (int round = 0; round < cfg.rounds; ++round) {
    double pos_total = 0.0;
    double neg_total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) (ys(i) > 0 ? pos_total : neg_total) += weights(i);

    std::optional<Stump> best;
    double best_error = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto& idx = sorted[static_cast<std::size_t>(j)];
      double pos_below = 0.0;
      double neg_below = 0.0;
      for (std::size_t s = 0; s + 1 < idx.size(); ++s) {
        const Eigen::Index i = idx[s];
        (ys(i) > 0 ? pos_below : neg_below) += weights(i);
        const double lo = data.X(i, j);
        const double hi = data.X(idx[s + 1], j);
        if (!(lo < hi)) continue;
        const double threshold = lo + (hi - lo) / 2.0;
        // polarity +1 predicts Right above the threshold
        const double error_plus = pos_below + (neg_total - neg_below);
        const double error_minus = neg_below + (pos_total - pos_below);
        if (error_plus < best_error) {
          best_error = error_plus;
          best = Stump{static_cast<int>(j), threshold, 1, 0.0};
        }
        if (error_minus < best_error) {
          best_error = error_minus;
          best = Stump{static_cast<int>(j), threshold, -1, 0.0};
        }
      }
    }
    if (!best) break;
    const double total = pos_total + neg_total;
    const double eps = std::max(0.0, best_error / total);
    if (trace) trace->errors.push_back(eps);
    if (eps >= 0.5) break;
    if (eps <= 0.0) {
      best->alpha = 0.5 * std::log(1e10);
      params.stumps.push_back(*best);
      break;
    }
    best->alpha = 0.5 * std::log((1.0 - eps) / eps);
    params.stumps.push_back(*best);

    for (Eigen::Index i = 0; i < n; ++i) {
      const double h = data.X(i, best->feature) > best->threshold ? best->polarity : -best->polarity;
      weights(i) *= std::exp(-best->alpha * ys(i) * h);
    }
    weights /= weights.sum();
    record(weights);
  }
  return {ModelKind::Boosting, std::move(params), kPositiveClass, d};
}

TrainedModel train_lda(const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<MotorLabel>& y,
                       const LdaConfig& cfg) {
  const ClassCounts counts = check_inputs(X, y);
  require_both_classes(counts, 2, "LDA");
  if (!(cfg.shrinkage > 0.0)) throw Error(ErrorCode::InvalidArgument, "lda.shrinkage must be positive");
  const Canonical data = canonicalize(X, y);
  const Eigen::Index n = data.X.rows();
  const Eigen::Index d = data.X.cols();

  Eigen::VectorXd mean_right = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd mean_left = Eigen::VectorXd::Zero(d);
  for (Eigen::Index i = 0; i < n; ++i)
    (data.y[static_cast<std::size_t>(i)] == MotorLabel::Right ? mean_right : mean_left) += data.X.row(i).transpose();
  mean_right /= static_cast<double>(counts.right);
  mean_left /= static_cast<double>(counts.left);

  Eigen::MatrixXd centred(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    centred.row(i) = data.X.row(i) -
                     (data.y[static_cast<std::size_t>(i)] == MotorLabel::Right ? mean_right : mean_left).transpose();
  Eigen::MatrixXd pooled = Eigen::MatrixXd(d, d).setZero().selfadjointView<Eigen::Lower>().rankUpdate(centred.transpose());
  pooled /= static_cast<double>(n - 2);

  const double ridge = cfg.shrinkage * pooled.trace() / static_cast<double>(d);
  pooled.diagonal().array() += ridge;
  const Eigen::LLT<Eigen::MatrixXd> llt(pooled);
  if (!(ridge > 0.0) || llt.info() != Eigen::Success)
    throw Error(ErrorCode::NumericFailure, "LDA within-class covariance is not positive definite after shrinkage");
  Eigen::VectorXd w = llt.solve(mean_right - mean_left);
  if (!w.allFinite()) throw Error(ErrorCode::NumericFailure, "LDA solve produced non-finite weights");

  const double log_prior_ratio = std::log(static_cast<double>(counts.right) / static_cast<double>(counts.left));
  const double threshold = w.dot(mean_right + mean_left) / 2.0 - log_prior_ratio;
  return {ModelKind::LDA, LdaParams{std::move(w), threshold}, kPositiveClass, d};
}

TrainedModel train(ModelKind kind, const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<MotorLabel>& y,
                   const TrainConfig& cfg) {
  switch (kind) {
    case ModelKind::SVM: return train_svm(X, y, cfg.svm);
    case ModelKind::KNN: return train_knn(X, y, cfg.knn);
    case ModelKind::NaiveBayes: return train_naive_bayes(X, y, cfg.nb);
    case ModelKind::Boosting: return train_adaboost(X, y, cfg.boosting);
    case ModelKind::LDA: return train_lda(X, y, cfg.lda);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown model kind");
}

MotorLabel predict(const TrainedModel& model, const Eigen::Ref<const Eigen::VectorXd>& row) {
  check_width(model, row.size());
  return std::visit(
      [&](const auto& p) -> MotorLabel {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, SvmParams>) {
          return label_of(p.w.dot(row) + p.b);
        } else if constexpr (std::is_same_v<P, KnnParams>) {
          const Eigen::VectorXd dist = (p.rows.rowwise() - row.transpose()).rowwise().squaredNorm();
          std::vector<Eigen::Index> idx(static_cast<std::size_t>(dist.size()));
          std::iota(idx.begin(), idx.end(), Eigen::Index{0});
          const auto k = static_cast<std::ptrdiff_t>(std::min<Eigen::Index>(p.k, dist.size()));
          std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&](Eigen::Index a, Eigen::Index b) {
            return dist(a) < dist(b) || (dist(a) == dist(b) && a < b);
          });
          int votes = 0;
          for (std::ptrdiff_t i = 0; i < k; ++i)
            votes += p.labels[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] == MotorLabel::Right ? 1 : -1;
          return label_of(static_cast<double>(votes));
        } else if constexpr (std::is_same_v<P, NaiveBayesParams>) {
          const double right = naive_bayes_score(p.mean_right, p.var_right, p.log_prior_right, row);
          const double left = naive_bayes_score(p.mean_left, p.var_left, p.log_prior_left, row);
          return right >= left ? MotorLabel::Right : MotorLabel::Left;
        } else if constexpr (std::is_same_v<P, BoostingParams>) {
          double score = 0.0;
          for (const Stump& s : p.stumps) score += s.alpha * (row(s.feature) > s.threshold ? s.polarity : -s.polarity);
          return label_of(score);
        } else {
          return p.w.dot(row) >= p.threshold ? MotorLabel::Right : MotorLabel::Left;
        }
      },
      model.params);
}

std::vector<MotorLabel> predict_rows(const TrainedModel& model, const Eigen::Ref<const Eigen::MatrixXd>& rows) {
  std::vector<MotorLabel> out;
  out.reserve(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) out.push_back(predict(model, rows.row(i).transpose()));
  return out;
}

double accuracy(const TrainedModel& model, const Eigen::Ref<const Eigen::MatrixXd>& rows,
                const std::vector<MotorLabel>& labels) {
  if (rows.rows() == 0 || static_cast<std::size_t>(rows.rows()) != labels.size())
    throw Error(ErrorCode::InvalidArgument, "accuracy needs a non-empty, labelled row set");
  const auto predicted = predict_rows(model, rows);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) hits += predicted[i] == labels[i];
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

namespace {

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vec_from(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

MotorLabel label_from_json(const json& j) {
  const auto label = label_from_int(j.get<int>());
  if (!label) throw Error(ErrorCode::UnknownLabel, "label must be 1 or 2");
  return *label;
}

}  // namespace

json to_json(const TrainedModel& model) {
  json j;
  j["kind"] = std::string(to_string(model.kind));
  j["positive_class"] = static_cast<int>(model.positive_class);
  j["width"] = model.width;
  json p = json::object();
  std::visit(
      [&](const auto& params) {
        using P = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<P, SvmParams>) {
          p["w"] = vec_json(params.w);
          p["b"] = params.b;
        } else if constexpr (std::is_same_v<P, KnnParams>) {
          p["k"] = params.k;
          p["rows"] = json::array();
          for (Eigen::Index i = 0; i < params.rows.rows(); ++i) p["rows"].push_back(vec_json(params.rows.row(i).transpose()));
          p["labels"] = json::array();
          for (MotorLabel l : params.labels) p["labels"].push_back(static_cast<int>(l));
        } else if constexpr (std::is_same_v<P, NaiveBayesParams>) {
          p["mean_right"] = vec_json(params.mean_right);
          p["var_right"] = vec_json(params.var_right);
          p["mean_left"] = vec_json(params.mean_left);
          p["var_left"] = vec_json(params.var_left);
          p["log_prior_right"] = params.log_prior_right;
          p["log_prior_left"] = params.log_prior_left;
        } else if constexpr (std::is_same_v<P, BoostingParams>) {
          p["stumps"] = json::array();
          for (const Stump& s : params.stumps)
            p["stumps"].push_back(
                {{"feature", s.feature}, {"threshold", s.threshold}, {"polarity", s.polarity}, {"alpha", s.alpha}});
        } else {
          p["w"] = vec_json(params.w);
          p["threshold"] = params.threshold;
        }
      },
      model.params);
  j["params"] = std::move(p);
  return j;
}

TrainedModel model_from_json(const json& j) {
  try {
    const auto kind = model_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorCode::ParseError, "unknown model kind " + j.at("kind").dump());
    TrainedModel model;
    model.kind = *kind;
    model.positive_class = label_from_json(j.at("positive_class"));
    model.width = j.at("width").get<Eigen::Index>();
    const json& p = j.at("params");
    switch (*kind) {
      case ModelKind::SVM:
        model.params = SvmParams{vec_from(p.at("w")), p.at("b").get<double>()};
        break;
      case ModelKind::KNN: {
        KnnParams k;
        k.k = p.at("k").get<int>();
        const json& rows = p.at("rows");
        k.rows.resize(static_cast<Eigen::Index>(rows.size()), model.width);
        for (std::size_t i = 0; i < rows.size(); ++i) k.rows.row(static_cast<Eigen::Index>(i)) = vec_from(rows[i]).transpose();
        for (const json& l : p.at("labels")) k.labels.push_back(label_from_json(l));
        model.params = std::move(k);
        break;
      }
      case ModelKind::NaiveBayes:
        model.params = NaiveBayesParams{vec_from(p.at("mean_right")), vec_from(p.at("var_right")),
                                        vec_from(p.at("mean_left")),  vec_from(p.at("var_left")),
                                        p.at("log_prior_right").get<double>(), p.at("log_prior_left").get<double>()};
        break;
      case ModelKind::Boosting: {
        BoostingParams b;
        for (const json& s : p.at("stumps"))
          b.stumps.push_back({s.at("feature").get<int>(), s.at("threshold").get<double>(), s.at("polarity").get<int>(),
                              s.at("alpha").get<double>()});
        model.params = std::move(b);
        break;
      }
      case ModelKind::LDA:
        model.params = LdaParams{vec_from(p.at("w")), p.at("threshold").get<double>()};
        break;
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("model JSON: ") + e.what());
  }
}

}  // namespace motorclass
