#pragma once

#include <Eigen/Core>
#include <array>
#include <istream>
#include <optional>
#include <ostream>

#include "motorclass/features.hpp"

namespace motorclass::stats {

struct TTestResult {
  double t = 0.0;
  int df = 0;
  double p = 1.0;
  std::size_t n = 0;
};

/// Regularized incomplete beta I_x(a, b), modified Lentz continued fraction.
double incomplete_beta(double a, double b, double x);

/// Two-tailed Student-t p-value. `t` may be +/-infinity.
double t_pvalue(double t, int df);

/// Paired t-test on d = x - y. Zero-variance differences give t = 0 / p = 1 when the
/// mean is zero and t = +/-inf / p = 0 otherwise.
TTestResult paired_t(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y);

enum class Level { Epoch, Trial };

struct SignificanceOptions {
  double alpha = 0.05;
  Level level = Level::Epoch;
  /// Pair only the first min(n_right, n_left) samples instead of rejecting unequal counts.
  bool truncate_unequal = false;
};

using ChannelBinGrid = Eigen::Matrix<double, kChannels, kBins>;

/// Per (channel, bin) paired test of Right vs Left power. `delta` is mean(Right) - mean(Left).
struct SignificanceMap {
  ChannelBinGrid t = ChannelBinGrid::Zero();
  ChannelBinGrid p = ChannelBinGrid::Ones();
  ChannelBinGrid delta = ChannelBinGrid::Zero();
  ChannelBinGrid mean_right = ChannelBinGrid::Zero();
  ChannelBinGrid mean_left = ChannelBinGrid::Zero();
  Eigen::Matrix<bool, kChannels, kBins> significant = Eigen::Matrix<bool, kChannels, kBins>::Constant(false);
  double alpha = 0.05;
  std::size_t pairs = 0;

  double significant_fraction() const;
};

/// Pairs the i-th Right sample with the i-th Left sample in row order.
SignificanceMap significance_map(const FeatureMatrix& features, const SignificanceOptions& options = {});

struct BandMap {
  /// Mean delta over the band's bins, [band][channel].
  std::array<std::array<double, kChannels>, 4> mean_delta{};
  /// Mean delta over significant bins only; nullopt when the band has none for that channel.
  std::array<std::array<std::optional<double>, kChannels>, 4> mean_delta_significant{};
};

BandMap band_aggregate(const SignificanceMap& map);

/// channel,freq_hz,t,p,delta,significant
void write_significance_csv(const SignificanceMap& map, std::ostream& out);
SignificanceMap read_significance_csv(std::istream& in, double alpha = 0.05);
/// band,channel,mean_delta,mean_delta_significant (empty cell for null)
void write_band_csv(const BandMap& bands, std::ostream& out);
/// channel,freq_hz,mean_left,mean_right
void write_mean_psd_csv(const SignificanceMap& map, std::ostream& out);

}  // namespace motorclass::stats
