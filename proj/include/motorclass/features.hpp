#pragma once

#include <Eigen/Core>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "motorclass/dataset.hpp"
#include "motorclass/dsp.hpp"

namespace motorclass {

struct RowOrigin {
  int trial_id = 0;
  int epoch = 0;

  bool operator==(const RowOrigin&) const = default;
};

struct FeatureRow {
  Eigen::VectorXd values;
  MotorLabel label = MotorLabel::Right;
  RowOrigin origin;
};

/// Per-column z-score statistics, fitted on training rows only.
struct Scaler {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;
};

inline constexpr double kDegenerateStddev = 1e-12;

/// One row per (trial, epoch); column = channel * 25 + (bin - 1).
struct FeatureMatrix {
  Eigen::MatrixXd values;
  std::vector<MotorLabel> labels;
  std::vector<RowOrigin> origins;
  std::optional<Scaler> scaler;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
  FeatureRow row(Eigen::Index i) const;
  FeatureMatrix select(const std::vector<Eigen::Index>& indices) const;
  std::size_t count(MotorLabel label) const;
};

enum class FeatureScale { Linear, Decibel };

struct FeatureConfig {
  FeatureScale scale = FeatureScale::Linear;
  double overlap = 0.0;
};

inline constexpr int feature_column(int channel, int bin) { return channel * kBins + (bin - 1); }
std::string feature_name(int column);

/// Eight contiguous 1 s epochs, each 12 x 512.
std::vector<Eigen::MatrixXd> epoch_trial(const Trial& trial);

/// Filters every channel over the full trial, epochs, then takes psd_epoch per channel.
/// Rows are ordered by (manifest order, epoch).
FeatureMatrix build_feature_matrix(const Dataset& dataset, const dsp::FirFilter& filter,
                                   const FeatureConfig& config = {});

/// Feature rows for a single trial (8 x 300).
Eigen::MatrixXd trial_features(const Trial& trial, const dsp::FirFilter& filter, const FeatureConfig& config = {});

Scaler fit_scaler(const Eigen::Ref<const Eigen::MatrixXd>& train_rows);
Eigen::MatrixXd apply_scaler(const Scaler& scaler, const Eigen::Ref<const Eigen::MatrixXd>& rows);

/// Header: trial_id,epoch,label,<channel>_<freq>Hz x 300.
void write_feature_csv(const FeatureMatrix& features, std::ostream& out);

}  // namespace motorclass
