#pragma once

#include <Eigen/Core>
#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "motorclass/error.hpp"
#include "motorclass/types.hpp"

namespace motorclass::dsp {

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

/// In-place iterative radix-2 decimation-in-time FFT (forward, unnormalised).
template <typename Scalar>
void fft_inplace(std::span<std::complex<Scalar>> data) {
  const std::size_t n = data.size();
  if (n == 0 || !std::has_single_bit(n))
    throw Error(ErrorCode::InvalidArgument, "fft length must be a power of two, got " + std::to_string(n));
  if (n == 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  // Twiddles evaluated directly rather than by recurrence, so error stays O(eps log n).
  // One table per length and thread; the transform sizes used in practice are few.
  thread_local std::map<std::size_t, std::vector<std::complex<Scalar>>> cache;
  auto& twiddle = cache[n];
  if (twiddle.empty()) {
    twiddle.resize(n / 2);
    const Scalar step = -2 * std::numbers::pi_v<Scalar> / static_cast<Scalar>(n);
    for (std::size_t k = 0; k < n / 2; ++k)
      twiddle[k] = std::polar(Scalar(1), step * static_cast<Scalar>(k));
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const std::complex<Scalar> u = data[start + k];
        // Written out so the compiler does not route through the Annex G NaN-recovery multiply.
        const std::complex<Scalar> x = data[start + k + half];
        const std::complex<Scalar> w = twiddle[k * stride];
        const std::complex<Scalar> v(x.real() * w.real() - x.imag() * w.imag(), x.real() * w.imag() + x.imag() * w.real());
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
}

template <typename Scalar>
ComplexVector<Scalar> fft(const ComplexVector<Scalar>& x) {
  ComplexVector<Scalar> out = x;
  fft_inplace(std::span<std::complex<Scalar>>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

/// Inverse DFT via conj(FFT(conj(X))) / N.
template <typename Scalar>
ComplexVector<Scalar> ifft(const ComplexVector<Scalar>& spectrum) {
  ComplexVector<Scalar> out = spectrum.conjugate();
  fft_inplace(std::span<std::complex<Scalar>>(out.data(), static_cast<std::size_t>(out.size())));
  return out.conjugate() / static_cast<Scalar>(out.size());
}

/// Linear-phase FIR filter. Taps are symmetric and odd in length.
struct FirFilter {
  std::vector<double> taps;
  double fs = kSampleRate;
  double low_hz = 1.0;
  double high_hz = 50.0;

  std::size_t group_delay() const { return (taps.size() - 1) / 2; }
};

inline constexpr std::size_t kDefaultTaps = 1691;

/// Hamming-windowed sinc band-pass with half-amplitude points at `low` and `high`.
FirFilter design_bandpass(double fs, double low, double high, std::size_t taps = kDefaultTaps);

/// Zero-phase application: reflection padding on both edges, output shifted by the group
/// delay so that it is time-aligned with (and the same length as) the input.
Eigen::VectorXd apply_filter(const FirFilter& filter, const Eigen::Ref<const Eigen::VectorXd>& signal);

/// Filters every row of `signals` independently; same result as apply_filter per row.
Eigen::MatrixXd apply_filter_rows(const FirFilter& filter, const Eigen::Ref<const Eigen::MatrixXd>& signals);

/// Hamming window, symmetric form.
Eigen::VectorXd hamming(std::size_t length);

struct PsdVector {
  /// Linear power density in uV^2/Hz; entry k-1 is bin k with centre 2k Hz.
  Eigen::Array<double, kBins, 1> values = Eigen::Array<double, kBins, 1>::Zero();
  int channel = 0;

  Eigen::Array<double, kBins, 1> decibels() const;
};

/// Welch estimate of one 1 s epoch: 256-sample Hamming segments, one-sided density
/// normalised by fs and window energy, segments averaged, bins 1..25 kept.
/// `overlap` is the segment overlap fraction in [0, 1).
PsdVector psd_epoch(const Eigen::Ref<const Eigen::VectorXd>& epoch, double fs = kSampleRate,
                    double overlap = 0.0, int channel = 0);

/// Optional artifact screen: true when any |sample| exceeds the threshold (uV).
bool exceeds_amplitude(const Eigen::Ref<const Eigen::VectorXd>& epoch, double threshold_uv = 200.0);

}  // namespace motorclass::dsp
