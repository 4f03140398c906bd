#include "motorclass/stats.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>

namespace motorclass::stats {

namespace {

constexpr double kCfTolerance = 1e-12;
constexpr int kCfMaxIterations = 300;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kCfMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double step = d * c;
    h *= step;
    if (std::fabs(step - 1.0) < kCfTolerance) return h;
  }
  throw Error(ErrorCode::NumericFailure, "incomplete beta continued fraction did not converge (a=" + std::to_string(a) +
                                             ", b=" + std::to_string(b) + ", x=" + std::to_string(x) + ")");
}

std::string format_number(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw Error(ErrorCode::InvalidArgument, "incomplete beta needs a, b > 0");
  if (std::isnan(x)) throw Error(ErrorCode::InvalidArgument, "incomplete beta argument is NaN");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double t_pvalue(double t, int df) {
  if (df < 1) throw Error(ErrorCode::InvalidArgument, "degrees of freedom must be >= 1, got " + std::to_string(df));
  if (std::isnan(t)) throw Error(ErrorCode::InvalidArgument, "t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  const double nu = static_cast<double>(df);
  const double x = nu / (nu + t * t);
  const double p = incomplete_beta(nu / 2.0, 0.5, x);
  return std::clamp(p, 0.0, 1.0);
}

TTestResult paired_t(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::InvalidArgument,
                "paired samples differ in length: " + std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  if (x.size() < 2) throw Error(ErrorCode::TooFewRows, "paired t-test needs at least 2 pairs");
  if (!x.allFinite() || !y.allFinite()) throw Error(ErrorCode::NonFinite, "paired t-test input is not finite");

  const Eigen::VectorXd d = x - y;
  const auto n = static_cast<std::size_t>(d.size());
  TTestResult result;
  result.n = n;
  result.df = static_cast<int>(n) - 1;

  const double mean = d.mean();
  const bool constant = (d.array() == d(0)).all();
  if (constant) {
    if (d(0) == 0.0) {
      result.t = 0.0;
      result.p = 1.0;
    } else {
      result.t = d(0) > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
      result.p = 0.0;
    }
    return result;
  }
  const double sd = std::sqrt((d.array() - mean).square().sum() / static_cast<double>(n - 1));
  result.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  result.p = t_pvalue(result.t, result.df);
  return result;
}

double SignificanceMap::significant_fraction() const {
  return static_cast<double>(significant.count()) / static_cast<double>(significant.size());
}

namespace {

// Samples (rows) for one label, either per epoch or averaged per trial, in row order.
Eigen::MatrixXd label_samples(const FeatureMatrix& features, MotorLabel label, Level level) {
  std::vector<Eigen::Index> rows;
  for (Eigen::Index r = 0; r < features.rows(); ++r)
    if (features.labels[static_cast<std::size_t>(r)] == label) rows.push_back(r);

  if (level == Level::Epoch) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), features.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = features.values.row(rows[i]);
    return out;
  }

  std::vector<int> order;
  std::map<int, std::vector<Eigen::Index>> groups;
  for (Eigen::Index r : rows) {
    const int id = features.origins[static_cast<std::size_t>(r)].trial_id;
    if (!groups.contains(id)) order.push_back(id);
    groups[id].push_back(r);
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(order.size()), features.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& members = groups[order[i]];
    for (Eigen::Index r : members) out.row(static_cast<Eigen::Index>(i)) += features.values.row(r);
    out.row(static_cast<Eigen::Index>(i)) /= static_cast<double>(members.size());
  }
  return out;
}

}  // namespace

SignificanceMap significance_map(const FeatureMatrix& features, const SignificanceOptions& options) {
  if (!(options.alpha >= 0.0 && options.alpha <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0, 1]");
  if (features.cols() != kFeatures)
    throw Error(ErrorCode::WidthMismatch, "feature matrix must have 300 columns");

  Eigen::MatrixXd right = label_samples(features, MotorLabel::Right, options.level);
  Eigen::MatrixXd left = label_samples(features, MotorLabel::Left, options.level);
  if (right.rows() == 0 || left.rows() == 0)
    throw Error(ErrorCode::MissingLabel, "significance map needs both Right and Left rows");
  if (right.rows() != left.rows()) {
    if (!options.truncate_unequal)
      throw Error(ErrorCode::UnequalCounts, std::to_string(right.rows()) + " right vs " + std::to_string(left.rows()) +
                                                " left samples; enable truncation to pair the first min(n) of each");
    const Eigen::Index n = std::min(right.rows(), left.rows());
    right.conservativeResize(n, Eigen::NoChange);
    left.conservativeResize(n, Eigen::NoChange);
  }

  SignificanceMap map;
  map.alpha = options.alpha;
  map.pairs = static_cast<std::size_t>(right.rows());
  for (int c = 0; c < kChannels; ++c) {
    for (int b = 0; b < kBins; ++b) {
      const int col = feature_column(c, b + 1);
      const TTestResult test = paired_t(right.col(col), left.col(col));
      map.t(c, b) = test.t;
      map.p(c, b) = test.p;
      map.mean_right(c, b) = right.col(col).mean();
      map.mean_left(c, b) = left.col(col).mean();
      map.delta(c, b) = map.mean_right(c, b) - map.mean_left(c, b);
      map.significant(c, b) = test.p < options.alpha;
    }
  }
  return map;
}

BandMap band_aggregate(const SignificanceMap& map) {
  BandMap out;
  for (std::size_t bi = 0; bi < kAllBands.size(); ++bi) {
    const auto bins = band_bins(kAllBands[bi]);
    for (int c = 0; c < kChannels; ++c) {
      double total = 0.0;
      double sig_total = 0.0;
      int sig_count = 0;
      for (int bin : bins) {
        const double d = map.delta(c, bin - 1);
        total += d;
        if (map.significant(c, bin - 1)) {
          sig_total += d;
          ++sig_count;
        }
      }
      out.mean_delta[bi][static_cast<std::size_t>(c)] = total / static_cast<double>(bins.size());
      if (sig_count > 0) out.mean_delta_significant[bi][static_cast<std::size_t>(c)] = sig_total / sig_count;
    }
  }
  return out;
}

void write_significance_csv(const SignificanceMap& map, std::ostream& out) {
  out << "channel,freq_hz,t,p,delta,significant\n";
  for (int c = 0; c < kChannels; ++c)
    for (int b = 0; b < kBins; ++b)
      out << ChannelSet::names[static_cast<std::size_t>(c)] << ',' << static_cast<int>(bin_center_hz(b + 1)) << ','
          << format_number(map.t(c, b)) << ',' << format_number(map.p(c, b)) << ',' << format_number(map.delta(c, b))
          << ',' << (map.significant(c, b) ? 1 : 0) << '\n';
}

SignificanceMap read_significance_csv(std::istream& in, double alpha) {
  SignificanceMap map;
  map.alpha = alpha;
  std::string line;
  if (!std::getline(in, line) || line.rfind("channel,freq_hz,t,p,delta,significant", 0) != 0)
    throw Error(ErrorCode::ParseError, "significance CSV header mismatch");
  Eigen::Matrix<bool, kChannels, kBins> seen = Eigen::Matrix<bool, kChannels, kBins>::Constant(false);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string channel, freq, t, p, delta, sig;
    std::getline(ss, channel, ',');
    std::getline(ss, freq, ',');
    std::getline(ss, t, ',');
    std::getline(ss, p, ',');
    std::getline(ss, delta, ',');
    std::getline(ss, sig, ',');
    const auto c = ChannelSet::index_of(channel);
    if (!c) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": unknown channel '" + channel + "'");
    try {
      const int hz = std::stoi(freq);
      const int bin = hz / static_cast<int>(kBinHz);
      if (hz % static_cast<int>(kBinHz) != 0 || bin < 1 || bin > kBins)
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": frequency " + freq + " off grid");
      map.t(*c, bin - 1) = std::stod(t);
      map.p(*c, bin - 1) = std::stod(p);
      map.delta(*c, bin - 1) = std::stod(delta);
      map.significant(*c, bin - 1) = (sig == "1" || sig == "true");
      seen(*c, bin - 1) = true;
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": malformed number");
    }
  }
  if (!seen.all()) throw Error(ErrorCode::ParseError, "significance CSV must contain all 300 cells");
  return map;
}

void write_band_csv(const BandMap& bands, std::ostream& out) {
  out << "band,channel,mean_delta,mean_delta_significant\n";
  for (std::size_t bi = 0; bi < kAllBands.size(); ++bi)
    for (std::size_t c = 0; c < static_cast<std::size_t>(kChannels); ++c) {
      out << to_string(kAllBands[bi]) << ',' << ChannelSet::names[c] << ',' << format_number(bands.mean_delta[bi][c])
          << ',';
      if (const auto& sig = bands.mean_delta_significant[bi][c]) out << format_number(*sig);
      out << '\n';
    }
}

void write_mean_psd_csv(const SignificanceMap& map, std::ostream& out) {
  out << "channel,freq_hz,mean_left,mean_right\n";
  for (int c = 0; c < kChannels; ++c)
    for (int b = 0; b < kBins; ++b)
      out << ChannelSet::names[static_cast<std::size_t>(c)] << ',' << static_cast<int>(bin_center_hz(b + 1)) << ','
          << format_number(map.mean_left(c, b)) << ',' << format_number(map.mean_right(c, b)) << '\n';
}

}  // namespace motorclass::stats
