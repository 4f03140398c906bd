#include "motorclass/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace motorclass {

FeatureRow FeatureMatrix::row(Eigen::Index i) const {
  return {values.row(i).transpose(), labels[static_cast<std::size_t>(i)], origins[static_cast<std::size_t>(i)]};
}

FeatureMatrix FeatureMatrix::select(const std::vector<Eigen::Index>& indices) const {
  FeatureMatrix out;
  out.values.resize(static_cast<Eigen::Index>(indices.size()), values.cols());
  out.labels.reserve(indices.size());
  out.origins.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    out.values.row(static_cast<Eigen::Index>(r)) = values.row(indices[r]);
    out.labels.push_back(labels[static_cast<std::size_t>(indices[r])]);
    out.origins.push_back(origins[static_cast<std::size_t>(indices[r])]);
  }
  return out;
}

std::size_t FeatureMatrix::count(MotorLabel label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

std::string feature_name(int column) {
  const int channel = column / kBins;
  const int bin = column % kBins + 1;
  return std::string(ChannelSet::names[static_cast<std::size_t>(channel)]) + "_" +
         std::to_string(static_cast<int>(bin_center_hz(bin))) + "Hz";
}

std::vector<Eigen::MatrixXd> epoch_trial(const Trial& trial) {
  if (trial.samples.rows() != kChannels || trial.samples.cols() != kTrialSamples)
    throw Error(ErrorCode::BadSampleCount, "trial must be 12 x 4096", trial.trial_id);
  std::vector<Eigen::MatrixXd> epochs;
  epochs.reserve(kEpochsPerTrial);
  for (int e = 0; e < kEpochsPerTrial; ++e) epochs.emplace_back(trial.samples.middleCols(e * kEpochSamples, kEpochSamples));
  return epochs;
}

Eigen::MatrixXd trial_features(const Trial& trial, const dsp::FirFilter& filter, const FeatureConfig& config) {
  const auto violations = validate_trial(trial);
  if (!violations.empty()) throw Error(violations.front().code, violations.front().message, trial.trial_id);

  Trial filtered = trial;
  filtered.samples = dsp::apply_filter_rows(filter, trial.samples);

  Eigen::MatrixXd rows(kEpochsPerTrial, kFeatures);
  const auto epochs = epoch_trial(filtered);
  for (int e = 0; e < kEpochsPerTrial; ++e) {
    for (int c = 0; c < kChannels; ++c) {
      const Eigen::VectorXd segment = epochs[static_cast<std::size_t>(e)].row(c).transpose();
      const dsp::PsdVector psd = dsp::psd_epoch(segment, trial.fs, config.overlap, c);
      const auto values = config.scale == FeatureScale::Decibel ? psd.decibels() : psd.values;
      rows.block(e, c * kBins, 1, kBins) = values.matrix().transpose();
    }
  }
  return rows;
}

FeatureMatrix build_feature_matrix(const Dataset& dataset, const dsp::FirFilter& filter, const FeatureConfig& config) {
  FeatureMatrix out;
  const auto n = static_cast<Eigen::Index>(dataset.trials.size());
  out.values.resize(n * kEpochsPerTrial, kFeatures);
  out.labels.reserve(static_cast<std::size_t>(n * kEpochsPerTrial));
  out.origins.reserve(static_cast<std::size_t>(n * kEpochsPerTrial));
  for (Eigen::Index t = 0; t < n; ++t) {
    const Trial& trial = dataset.trials[static_cast<std::size_t>(t)];
    out.values.middleRows(t * kEpochsPerTrial, kEpochsPerTrial) = trial_features(trial, filter, config);
    for (int e = 0; e < kEpochsPerTrial; ++e) {
      out.labels.push_back(trial.label);
      out.origins.push_back({trial.trial_id, e});
    }
  }
  return out;
}

Scaler fit_scaler(const Eigen::Ref<const Eigen::MatrixXd>& train_rows) {
  if (train_rows.rows() < 2)
    throw Error(ErrorCode::TooFewRows, "scaler needs at least 2 training rows, got " + std::to_string(train_rows.rows()));
  Scaler scaler;
  scaler.mean = train_rows.colwise().mean().transpose();
  const Eigen::MatrixXd centred = train_rows.rowwise() - scaler.mean.transpose();
  scaler.stddev = (centred.colwise().squaredNorm() / static_cast<double>(train_rows.rows() - 1)).cwiseSqrt().transpose();
  return scaler;
}

Eigen::MatrixXd apply_scaler(const Scaler& scaler, const Eigen::Ref<const Eigen::MatrixXd>& rows) {
  if (rows.cols() != scaler.mean.size())
    throw Error(ErrorCode::WidthMismatch, "scaler width " + std::to_string(scaler.mean.size()) + " vs rows width " +
                                              std::to_string(rows.cols()));
  Eigen::MatrixXd out = rows.rowwise() - scaler.mean.transpose();
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double sd = scaler.stddev(j);
    if (sd < kDegenerateStddev)
      out.col(j).setZero();
    else
      out.col(j) /= sd;
  }
  return out;
}

void write_feature_csv(const FeatureMatrix& features, std::ostream& out) {
  out << "trial_id,epoch,label";
  for (int c = 0; c < features.cols(); ++c) out << ',' << feature_name(c);
  out << '\n';
  char buf[32];
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    const auto& origin = features.origins[static_cast<std::size_t>(r)];
    out << origin.trial_id << ',' << origin.epoch << ',' << static_cast<int>(features.labels[static_cast<std::size_t>(r)]);
    for (Eigen::Index c = 0; c < features.cols(); ++c) {
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), features.values(r, c));
      out << ',' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    out << '\n';
  }
}

}  // namespace motorclass
