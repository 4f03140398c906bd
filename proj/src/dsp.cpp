#include "motorclass/dsp.hpp"

#include <algorithm>
#include <string>

namespace motorclass::dsp {

namespace {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Index into a signal of length n extended by mirror reflection about its end samples
// (the edge sample is not repeated).
std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) {
  if (n == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
  std::ptrdiff_t m = i % period;
  if (m < 0) m += period;
  if (m >= static_cast<std::ptrdiff_t>(n)) m = period - m;
  return static_cast<std::size_t>(m);
}

}  // namespace

Eigen::VectorXd hamming(std::size_t length) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(length));
  if (length == 1) {
    w(0) = 1.0;
    return w;
  }
  const double denom = static_cast<double>(length - 1);
  for (std::size_t i = 0; i < length; ++i)
    w(static_cast<Eigen::Index>(i)) = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / denom);
  return w;
}

FirFilter design_bandpass(double fs, double low, double high, std::size_t taps) {
  if (!(std::isfinite(fs) && fs > 0.0))
    throw Error(ErrorCode::InvalidArgument, "sampling rate must be positive");
  if (!(std::isfinite(low) && std::isfinite(high) && 0.0 < low && low < high && high < fs / 2.0))
    throw Error(ErrorCode::InvalidArgument,
                "band must satisfy 0 < low < high < fs/2, got (" + std::to_string(low) + ", " +
                    std::to_string(high) + ")");
  if (taps < 3 || taps % 2 == 0)
    throw Error(ErrorCode::InvalidArgument, "tap count must be odd and >= 3, got " + std::to_string(taps));

  const Eigen::VectorXd window = hamming(taps);
  const double fl = low / fs;
  const double fh = high / fs;
  const auto centre = static_cast<std::ptrdiff_t>((taps - 1) / 2);

  FirFilter filter;
  filter.fs = fs;
  filter.low_hz = low;
  filter.high_hz = high;
  filter.taps.resize(taps);
  for (std::size_t i = 0; i <= static_cast<std::size_t>(centre); ++i) {
    const double m = static_cast<double>(static_cast<std::ptrdiff_t>(i) - centre);
    const double ideal = 2.0 * fh * sinc(2.0 * fh * m) - 2.0 * fl * sinc(2.0 * fl * m);
    const double tap = window(static_cast<Eigen::Index>(i)) * ideal;
    // Mirror-assign so the symmetry holds bit-exactly.
    filter.taps[i] = tap;
    filter.taps[taps - 1 - i] = tap;
  }
  return filter;
}

namespace {

void check_filter(const FirFilter& filter) {
  if (filter.taps.empty() || filter.taps.size() % 2 == 0)
    throw Error(ErrorCode::InvalidArgument, "filter must have an odd, non-zero tap count");
}

void check_signal(const Eigen::Ref<const Eigen::VectorXd>& signal) {
  if (signal.size() == 0) throw Error(ErrorCode::InvalidArgument, "cannot filter an empty signal");
  if (!signal.allFinite()) throw Error(ErrorCode::NonFinite, "filter input contains non-finite samples");
}

std::vector<double> reflect_pad(const Eigen::Ref<const Eigen::VectorXd>& signal, std::size_t delay) {
  const auto n = static_cast<std::size_t>(signal.size());
  std::vector<double> padded(n + 2 * delay);
  for (std::size_t j = 0; j < padded.size(); ++j)
    padded[j] = signal(static_cast<Eigen::Index>(
        reflect_index(static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(delay), n)));
  return padded;
}

bool use_direct(const FirFilter& filter, std::size_t n) { return n * filter.taps.size() <= (std::size_t{1} << 16); }

// y[i] = sum_k h[k] * padded[i + 2*delay - k]
Eigen::VectorXd filter_direct(const FirFilter& filter, const Eigen::Ref<const Eigen::VectorXd>& signal) {
  const std::size_t delay = filter.group_delay();
  const std::vector<double> padded = reflect_pad(signal, delay);
  Eigen::VectorXd out(signal.size());
  for (Eigen::Index i = 0; i < signal.size(); ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < filter.taps.size(); ++k)
      acc += filter.taps[k] * padded[static_cast<std::size_t>(i) + 2 * delay - k];
    out(i) = acc;
  }
  return out;
}

// FFT convolution of up to two real signals at once, packed as real and imaginary parts.
// The taps are real, so the two outputs stay separated in the real and imaginary parts.
class FftConvolver {
 public:
  FftConvolver(const FirFilter& filter, std::size_t n)
      : delay_(filter.group_delay()), n_(n), nfft_(std::bit_ceil(n + 2 * delay_ + filter.taps.size() - 1)) {
    ComplexVector<double> h = ComplexVector<double>::Zero(static_cast<Eigen::Index>(nfft_));
    for (std::size_t k = 0; k < filter.taps.size(); ++k) h(static_cast<Eigen::Index>(k)) = filter.taps[k];
    response_ = fft(h);
  }

  void run(const Eigen::Ref<const Eigen::VectorXd>& first, const Eigen::VectorXd* second, Eigen::Ref<Eigen::VectorXd> out_first,
           Eigen::VectorXd* out_second) const {
    ComplexVector<double> a = ComplexVector<double>::Zero(static_cast<Eigen::Index>(nfft_));
    const std::vector<double> p1 = reflect_pad(first, delay_);
    for (std::size_t j = 0; j < p1.size(); ++j) a(static_cast<Eigen::Index>(j)).real(p1[j]);
    if (second) {
      const std::vector<double> p2 = reflect_pad(*second, delay_);
      for (std::size_t j = 0; j < p2.size(); ++j) a(static_cast<Eigen::Index>(j)).imag(p2[j]);
    }
    const ComplexVector<double> conv = ifft(ComplexVector<double>(fft(a).cwiseProduct(response_)));
    for (std::size_t i = 0; i < n_; ++i) {
      const auto& v = conv(static_cast<Eigen::Index>(i + 2 * delay_));
      out_first(static_cast<Eigen::Index>(i)) = v.real();
      if (out_second) (*out_second)(static_cast<Eigen::Index>(i)) = v.imag();
    }
  }

 private:
  std::size_t delay_;
  std::size_t n_;
  std::size_t nfft_;
  ComplexVector<double> response_;
};

}  // namespace

Eigen::VectorXd apply_filter(const FirFilter& filter, const Eigen::Ref<const Eigen::VectorXd>& signal) {
  check_signal(signal);
  check_filter(filter);
  const auto n = static_cast<std::size_t>(signal.size());
  if (use_direct(filter, n)) return filter_direct(filter, signal);
  Eigen::VectorXd out(signal.size());
  FftConvolver(filter, n).run(signal, nullptr, out, nullptr);
  return out;
}

Eigen::MatrixXd apply_filter_rows(const FirFilter& filter, const Eigen::Ref<const Eigen::MatrixXd>& signals) {
  check_filter(filter);
  Eigen::MatrixXd out(signals.rows(), signals.cols());
  for (Eigen::Index r = 0; r < signals.rows(); ++r) check_signal(signals.row(r).transpose());
  const auto n = static_cast<std::size_t>(signals.cols());
  if (use_direct(filter, n)) {
    for (Eigen::Index r = 0; r < signals.rows(); ++r) out.row(r) = filter_direct(filter, signals.row(r).transpose()).transpose();
    return out;
  }
  const FftConvolver convolver(filter, n);
  Eigen::VectorXd y1(signals.cols()), y2(signals.cols());
  for (Eigen::Index r = 0; r < signals.rows(); r += 2) {
    const Eigen::VectorXd x1 = signals.row(r).transpose();
    if (r + 1 < signals.rows()) {
      const Eigen::VectorXd x2 = signals.row(r + 1).transpose();
      convolver.run(x1, &x2, y1, &y2);
      out.row(r + 1) = y2.transpose();
    } else {
      convolver.run(x1, nullptr, y1, nullptr);
    }
    out.row(r) = y1.transpose();
  }
  return out;
}

Eigen::Array<double, kBins, 1> PsdVector::decibels() const {
  return 10.0 * values.max(std::numeric_limits<double>::min()).log10();
}

PsdVector psd_epoch(const Eigen::Ref<const Eigen::VectorXd>& epoch, double fs, double overlap, int channel) {
  if (epoch.size() != kEpochSamples)
    throw Error(ErrorCode::InvalidArgument,
                "epoch must have " + std::to_string(kEpochSamples) + " samples, got " + std::to_string(epoch.size()));
  if (!(std::isfinite(fs) && fs > 0.0)) throw Error(ErrorCode::InvalidArgument, "sampling rate must be positive");
  if (!(overlap >= 0.0 && overlap < 1.0)) throw Error(ErrorCode::InvalidArgument, "overlap must lie in [0, 1)");
  if (!epoch.allFinite()) throw Error(ErrorCode::NonFinite, "epoch contains non-finite samples");

  static const Eigen::VectorXd window = hamming(kSegmentSamples);
  static const double window_energy = window.squaredNorm();

  const auto step = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(std::lround(kSegmentSamples * (1.0 - overlap))));

  Eigen::Array<double, kBins, 1> acc = Eigen::Array<double, kBins, 1>::Zero();
  int segments = 0;
  for (Eigen::Index start = 0; start + kSegmentSamples <= kEpochSamples; start += step) {
    // Constant detrend so an offset cannot leak into bin 1 through the window sidelobes.
    const double mean = epoch.segment(start, kSegmentSamples).mean();
    ComplexVector<double> seg(kSegmentSamples);
    for (Eigen::Index i = 0; i < kSegmentSamples; ++i) seg(i) = (epoch(start + i) - mean) * window(i);
    const ComplexVector<double> spec = fft(seg);
    // Bins 1..25 are interior to the one-sided spectrum, so all are doubled.
    for (int k = 1; k <= kBins; ++k) acc(k - 1) += 2.0 * std::norm(spec(k)) / (fs * window_energy);
    ++segments;
  }

  PsdVector psd;
  psd.values = acc / static_cast<double>(segments);
  psd.channel = channel;
  return psd;
}

bool exceeds_amplitude(const Eigen::Ref<const Eigen::VectorXd>& epoch, double threshold_uv) {
  return epoch.size() > 0 && epoch.cwiseAbs().maxCoeff() > threshold_uv;
}

}  // namespace motorclass::dsp
