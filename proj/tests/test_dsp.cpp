#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "motorclass/dsp.hpp"
#include "motorclass/error.hpp"
#include "oracles.hpp"

using namespace motorclass;
using dsp::ComplexVector;

namespace {

ComplexVector<double> to_eigen(const std::vector<std::complex<double>>& v) {
  ComplexVector<double> out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

Eigen::VectorXd sinusoid(Eigen::Index n, double hz, double fs, double amplitude = 1.0) {
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = amplitude * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / fs);
  return x;
}

const dsp::FirFilter& default_filter() {
  static const dsp::FirFilter f = dsp::design_bandpass(512.0, 1.0, 50.0);
  return f;
}

}  // namespace

TEST_CASE("fft of a unit impulse is flat") {
  ComplexVector<double> x = ComplexVector<double>::Zero(256);
  x(0) = 1.0;
  const auto X = dsp::fft(x);
  for (Eigen::Index k = 0; k < X.size(); ++k) CHECK(std::abs(X(k) - std::complex<double>(1.0, 0.0)) < 1e-12);
}

TEST_CASE("fft of ones concentrates in bin zero") {
  const ComplexVector<double> x = ComplexVector<double>::Constant(256, 1.0);
  const auto X = dsp::fft(x);
  CHECK(std::abs(X(0) - 256.0) < 1e-9);
  for (Eigen::Index k = 1; k < X.size(); ++k) CHECK(std::abs(X(k)) < 1e-9);
}

TEST_CASE("fft matches the direct DFT on random vectors") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  const int lengths[] = {8, 16, 32, 64};
  for (int trial = 0; trial < 100; ++trial) {
    const int n = lengths[trial % 4];
    std::vector<std::complex<double>> x(static_cast<std::size_t>(n));
    for (auto& v : x) v = {g(rng), g(rng)};
    const auto expected = to_eigen(oracle::brute_dft(x));
    const auto got = dsp::fft(to_eigen(x));
    CHECK((got - expected).norm() <= 1e-9 * expected.norm());
  }
}

TEST_CASE("fft rejects lengths that are not powers of two") {
  const ComplexVector<double> x = ComplexVector<double>::Zero(12);
  CHECK_THROWS_AS(dsp::fft(x), Error);
  CHECK_THROWS_AS(dsp::fft(ComplexVector<double>(0)), Error);
}

TEST_CASE("inverse fft recovers the input and Parseval holds") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int n = 1; n <= 1024; n *= 2) {
    ComplexVector<double> x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = {g(rng), g(rng)};
    const auto X = dsp::fft(x);
    CHECK((dsp::ifft(X) - x).norm() <= 1e-9 * x.norm());
    const double time_energy = x.squaredNorm();
    const double freq_energy = X.squaredNorm() / static_cast<double>(n);
    CHECK(std::fabs(time_energy - freq_energy) <= 1e-9 * time_energy);
  }
}

TEST_CASE("fft also instantiates for float") {
  ComplexVector<float> x = ComplexVector<float>::Zero(8);
  x(1) = 1.0f;
  const auto X = dsp::fft(x);
  CHECK(std::abs(X(2) - std::complex<float>(0.0f, -1.0f)) < 1e-6f);
}

TEST_CASE("band-pass design meets the response mask") {
  const auto& f = default_filter();
  REQUIRE(f.taps.size() == dsp::kDefaultTaps);
  CHECK(f.group_delay() == 845);
  for (std::size_t i = 0; i < f.taps.size(); ++i) CHECK(f.taps[i] == f.taps[f.taps.size() - 1 - i]);

  for (double hz : {5.0, 10.0, 25.0, 40.0}) CHECK(std::fabs(oracle::db(oracle::fir_magnitude(f.taps, 512.0, hz))) <= 0.5);
  for (double hz : {0.1, 56.0, 100.0}) CHECK(oracle::db(oracle::fir_magnitude(f.taps, 512.0, hz)) <= -40.0);
  // Windowed-sinc edges sit at half amplitude.
  CHECK(oracle::fir_magnitude(f.taps, 512.0, 1.0) == doctest::Approx(0.5).epsilon(0.05));
  CHECK(oracle::fir_magnitude(f.taps, 512.0, 50.0) == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("band-pass design validates its arguments") {
  CHECK_THROWS_AS(dsp::design_bandpass(512.0, 1.0, 50.0, 1690), Error);
  CHECK_THROWS_AS(dsp::design_bandpass(512.0, 50.0, 1.0), Error);
  CHECK_THROWS_AS(dsp::design_bandpass(512.0, 1.0, 256.0), Error);
  CHECK_THROWS_AS(dsp::design_bandpass(512.0, 0.0, 50.0), Error);
  CHECK_THROWS_AS(dsp::design_bandpass(-1.0, 1.0, 50.0), Error);
  const auto small = dsp::design_bandpass(256.0, 4.0, 30.0, 101);
  CHECK(small.taps.size() == 101);
  for (std::size_t i = 0; i < small.taps.size(); ++i) CHECK(small.taps[i] == small.taps[100 - i]);
}

TEST_CASE("filtering zeros gives zeros") {
  const Eigen::VectorXd y = dsp::apply_filter(default_filter(), Eigen::VectorXd::Zero(4096));
  CHECK(y.size() == 4096);
  CHECK(y.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("passband sinusoid keeps its amplitude") {
  const Eigen::VectorXd y = dsp::apply_filter(default_filter(), sinusoid(4096, 25.0, 512.0));
  const double peak = y.segment(1024, 2048).cwiseAbs().maxCoeff();
  CHECK(peak == doctest::Approx(1.0).epsilon(0.05));
  // Group delay compensation keeps the phase aligned.
  const Eigen::VectorXd x = sinusoid(4096, 25.0, 512.0);
  CHECK((y.segment(1024, 2048) - x.segment(1024, 2048)).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("constant offset is suppressed") {
  const Eigen::VectorXd y = dsp::apply_filter(default_filter(), Eigen::VectorXd::Constant(4096, 100.0));
  CHECK(y.segment(1024, 2048).cwiseAbs().maxCoeff() <= 1.0);
}

TEST_CASE("filter output matches direct convolution with mirror padding") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  Eigen::VectorXd x(4096);
  for (auto& v : x) v = g(rng);
  const Eigen::VectorXd y = dsp::apply_filter(default_filter(), x);
  for (long i : {0L, 1L, 17L, 845L, 2048L, 3000L, 4095L})
    CHECK(y(i) == doctest::Approx(oracle::filtered_sample(default_filter().taps, x, i)).epsilon(1e-9).scale(1.0));
}

TEST_CASE("short signals take the direct path and agree with the oracle") {
  const auto f = dsp::design_bandpass(512.0, 1.0, 50.0, 31);
  Eigen::VectorXd x(40);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = std::cos(0.3 * static_cast<double>(i)) + 0.01 * static_cast<double>(i);
  const Eigen::VectorXd y = dsp::apply_filter(f, x);
  for (long i = 0; i < x.size(); ++i) CHECK(y(i) == doctest::Approx(oracle::filtered_sample(f.taps, x, i)).epsilon(1e-12).scale(1.0));

  Eigen::VectorXd one(1);
  one << 3.0;
  CHECK(dsp::apply_filter(f, one).size() == 1);
}

TEST_CASE("filter is linear in scaling") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  Eigen::VectorXd x(4096);
  for (auto& v : x) v = g(rng);
  const Eigen::VectorXd y = dsp::apply_filter(default_filter(), x);
  for (double a : {-3.0, 0.25, 1e3}) {
    const Eigen::VectorXd ya = dsp::apply_filter(default_filter(), a * x);
    CHECK((ya - a * y).norm() <= 1e-12 * (a * y).norm());
  }
}

TEST_CASE("filter rejects bad signals") {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(100);
  x(3) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(dsp::apply_filter(default_filter(), x), Error);
  CHECK_THROWS_AS(dsp::apply_filter(default_filter(), Eigen::VectorXd(0)), Error);
}

TEST_CASE("psd of zeros is zero") {
  const auto p = dsp::psd_epoch(Eigen::VectorXd::Zero(512));
  CHECK(p.values.abs().maxCoeff() == 0.0);
}

TEST_CASE("psd of a 10 Hz sinusoid peaks in bin 5") {
  const auto p = dsp::psd_epoch(sinusoid(512, 10.0, 512.0));
  Eigen::Index peak = 0;
  p.values.maxCoeff(&peak);
  CHECK(peak + 1 == 5);
  CHECK(p.values.segment(3, 3).sum() >= 0.85 * p.values.sum());
  CHECK((p.values >= 0.0).all());
  CHECK(p.values.allFinite());
}

TEST_CASE("psd of white noise integrates to the in-band variance") {
  const double sigma = 3.0;
  std::normal_distribution<double> g(0.0, sigma);
  double total = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    Eigen::VectorXd x(512);
    for (auto& v : x) v = g(rng);
    total += dsp::psd_epoch(x).values.sum() * 2.0;
  }
  // Bins 1..25 each span 2 Hz of a flat one-sided density sigma^2 / (fs/2).
  const double in_band = sigma * sigma * 50.0 / 256.0;
  CHECK(total / 100.0 == doctest::Approx(in_band).epsilon(0.2));
}

TEST_CASE("psd ignores a constant offset") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  Eigen::VectorXd x(512);
  for (auto& v : x) v = g(rng);
  const auto a = dsp::psd_epoch(x);
  const auto b = dsp::psd_epoch((x.array() + 5.0).matrix());
  CHECK(((a.values - b.values).abs() <= 1e-9 * a.values.abs().maxCoeff()).all());
}

TEST_CASE("psd overlap and decibel view") {
  const Eigen::VectorXd x = sinusoid(512, 20.0, 512.0);
  const auto half = dsp::psd_epoch(x, 512.0, 0.5);
  Eigen::Index peak = 0;
  half.values.maxCoeff(&peak);
  CHECK(peak + 1 == 10);
  const auto p = dsp::psd_epoch(x);
  CHECK(p.decibels()(9) == doctest::Approx(10.0 * std::log10(p.values(9))));
  CHECK_THROWS_AS(dsp::psd_epoch(x, 512.0, 1.0), Error);
  CHECK_THROWS_AS(dsp::psd_epoch(Eigen::VectorXd::Zero(511)), Error);
}

TEST_CASE("amplitude screen") {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(512);
  CHECK_FALSE(dsp::exceeds_amplitude(x));
  x(7) = -201.0;
  CHECK(dsp::exceeds_amplitude(x));
}

TEST_CASE("hamming window is symmetric") {
  const auto w = dsp::hamming(256);
  CHECK(w(0) == doctest::Approx(0.08));
  for (Eigen::Index i = 0; i < 256; ++i) CHECK(w(i) == doctest::Approx(w(255 - i)).epsilon(1e-15));
}
