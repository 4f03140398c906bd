#pragma once

// Independent reference computations used only by tests.

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "motorclass/types.hpp"

namespace oracle {

inline std::vector<std::complex<double>> brute_dft(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      acc += x[j] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  return out;
}

/// |H(f)| of a tap vector, evaluated directly from its DTFT.
inline double fir_magnitude(const std::vector<double>& taps, double fs, double hz) {
  std::complex<double> acc = 0.0;
  const double omega = 2.0 * std::numbers::pi * hz / fs;
  for (std::size_t n = 0; n < taps.size(); ++n)
    acc += taps[n] * std::complex<double>(std::cos(omega * static_cast<double>(n)), -std::sin(omega * static_cast<double>(n)));
  return std::abs(acc);
}

inline double db(double magnitude) { return 20.0 * std::log10(magnitude); }

/// Direct convolution with mirror padding and group-delay alignment, sample i only.
inline double filtered_sample(const std::vector<double>& taps, const Eigen::VectorXd& x, long i) {
  const long n = x.size();
  const long delay = static_cast<long>(taps.size() - 1) / 2;
  auto at = [&](long j) {
    while (j < 0 || j >= n) j = j < 0 ? -j : 2 * (n - 1) - j;
    return x(j);
  };
  double acc = 0.0;
  for (long k = 0; k < static_cast<long>(taps.size()); ++k) acc += taps[static_cast<std::size_t>(k)] * at(i + delay - k);
  return acc;
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth) {
  const double c = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fc = f(c);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double s, double eps, int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (d <= 0 || std::fabs(left + right - s) <= 15.0 * eps) return left + right + (left + right - s) / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, eps / 2.0, d - 1) + rec(mid, hi, fmid, frm, fhi, right, eps / 2.0, d - 1);
      };
  return rec(a, b, fa, fc, fb, whole, tol, depth);
}

inline double t_density(double x, double df) {
  const double log_norm = std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) - 0.5 * std::log(df * std::numbers::pi);
  return std::exp(log_norm - (df + 1.0) / 2.0 * std::log1p(x * x / df));
}

/// Two-tailed p-value by quadrature of the t density over [0, |t|].
inline double t_pvalue_quadrature(double t, double df) {
  if (t == 0.0) return 1.0;
  const double mass = adaptive_simpson([df](double x) { return t_density(x, df); }, 0.0, std::fabs(t), 1e-13, 50);
  return 1.0 - 2.0 * mass;
}

struct Blobs {
  Eigen::MatrixXd X;
  std::vector<motorclass::MotorLabel> y;
};

/// Unit-variance Gaussian classes with means +/-shift on the first `informative` dims.
inline Blobs gaussian_blobs(int per_side, int dims, int informative, double shift, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Blobs b;
  b.X.resize(2 * per_side, dims);
  for (int i = 0; i < 2 * per_side; ++i) {
    const bool right = i % 2 == 0;
    b.y.push_back(right ? motorclass::MotorLabel::Right : motorclass::MotorLabel::Left);
    for (int j = 0; j < dims; ++j) b.X(i, j) = g(rng) + (j < informative ? (right ? shift : -shift) : 0.0);
  }
  return b;
}

/// Bayes accuracy for the blob construction: Phi(shift * sqrt(informative)).
inline double blob_bayes_accuracy(int informative, double shift) {
  const double z = shift * std::sqrt(static_cast<double>(informative));
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

}  // namespace oracle
