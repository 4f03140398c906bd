#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "motorclass/stats.hpp"
#include "oracles.hpp"

using namespace motorclass;
using namespace motorclass::stats;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

const dsp::FirFilter& filter() {
  static const dsp::FirFilter f = dsp::design_bandpass(512.0, 1.0, 50.0);
  return f;
}

// Features where every Right row is copied from a Left row.
FeatureMatrix mirrored_features(Eigen::Index pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> e(1.0);
  FeatureMatrix fm;
  fm.values.resize(2 * pairs, kFeatures);
  for (Eigen::Index i = 0; i < pairs; ++i) {
    for (Eigen::Index c = 0; c < kFeatures; ++c) fm.values(2 * i, c) = e(rng);
    fm.values.row(2 * i + 1) = fm.values.row(2 * i);
    fm.labels.push_back(MotorLabel::Right);
    fm.labels.push_back(MotorLabel::Left);
    fm.origins.push_back({static_cast<int>(2 * i + 1), 0});
    fm.origins.push_back({static_cast<int>(2 * i + 2), 0});
  }
  return fm;
}

FeatureMatrix random_features(Eigen::Index pairs, std::uint64_t seed) {
  FeatureMatrix fm = mirrored_features(pairs, seed);
  std::mt19937_64 rng(seed + 1000);
  std::exponential_distribution<double> e(1.0);
  for (Eigen::Index i = 0; i < fm.values.size(); ++i) fm.values.data()[i] = e(rng);
  return fm;
}

FeatureMatrix swap_labels(FeatureMatrix fm) {
  for (auto& l : fm.labels) l = opposite(l);
  return fm;
}

}  // namespace

TEST_CASE("paired t with zero mean difference") {
  const auto r = paired_t(vec({1, -1, 1, -1}), Eigen::VectorXd::Zero(4));
  CHECK(r.t == 0.0);
  CHECK(r.p == 1.0);
  CHECK(r.df == 3);
}

TEST_CASE("paired t with constant nonzero difference") {
  const auto r = paired_t(vec({2, 3, 4, 5}), vec({1, 2, 3, 4}));
  CHECK(std::isinf(r.t));
  CHECK(r.t > 0.0);
  CHECK(r.p == 0.0);
  const auto z = paired_t(vec({1, 1}), vec({1, 1}));
  CHECK(z.t == 0.0);
  CHECK(z.p == 1.0);
}

TEST_CASE("paired t hand-computed case") {
  const auto r = paired_t(vec({2, 0, 2, 0}), Eigen::VectorXd::Zero(4));
  CHECK(r.t == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(r.t == doctest::Approx(1.732051).epsilon(1e-6));
  CHECK(r.df == 3);
  CHECK(r.p == doctest::Approx(0.1817).epsilon(0.0005));
  CHECK(r.p == doctest::Approx(0.181690113816209).epsilon(1e-12));
  CHECK(r.p == doctest::Approx(oracle::t_pvalue_quadrature(std::sqrt(3.0), 3.0)).epsilon(1e-9));
}

TEST_CASE("paired t is antisymmetric") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd x(12), y(12);
    for (Eigen::Index i = 0; i < 12; ++i) {
      x(i) = g(rng);
      y(i) = g(rng) + 0.3;
    }
    const auto a = paired_t(x, y);
    const auto b = paired_t(y, x);
    CHECK(a.t == -b.t);
    CHECK(a.p == b.p);
  }
}

TEST_CASE("paired t preconditions") {
  CHECK_THROWS_AS(paired_t(vec({1, 2, 3}), vec({1, 2})), Error);
  CHECK_THROWS_AS(paired_t(vec({1}), vec({2})), Error);
  CHECK_THROWS_AS(paired_t(vec({1, std::nan("")}), vec({2, 3})), Error);
}

TEST_CASE("t p-value anchors") {
  for (int df : {1, 2, 5, 30, 639}) CHECK(t_pvalue(0.0, df) == 1.0);
  CHECK(t_pvalue(1.0, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t_pvalue(2.228, 10) == doctest::Approx(0.05).epsilon(0.0005 / 0.05));
  CHECK(t_pvalue(2.228, 10) == doctest::Approx(0.0500117718).epsilon(1e-8));
  CHECK(t_pvalue(std::numeric_limits<double>::infinity(), 4) == 0.0);
  CHECK(t_pvalue(-std::numeric_limits<double>::infinity(), 4) == 0.0);
  CHECK_THROWS_AS(t_pvalue(1.0, 0), Error);
  CHECK_THROWS_AS(t_pvalue(std::nan(""), 3), Error);
}

TEST_CASE("t p-value agrees with quadrature of the density") {
  for (int df : {1, 2, 3, 7, 10, 30, 100, 639})
    for (double t : {0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0}) {
      CAPTURE(df);
      CAPTURE(t);
      CHECK(std::fabs(t_pvalue(t, df) - oracle::t_pvalue_quadrature(t, df)) < 1e-8);
    }
}

TEST_CASE("t p-value is symmetric and monotone") {
  for (int df : {1, 3, 10, 100, 639}) {
    double previous = 2.0;
    for (int i = 0; i < 100; ++i) {
      const double t = 0.08 * i;
      const double p = t_pvalue(t, df);
      CHECK(p == t_pvalue(-t, df));
      CHECK(p < previous);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      previous = p;
    }
  }
}

TEST_CASE("incomplete beta closed forms") {
  for (double x : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) {
    CHECK(incomplete_beta(1.0, 1.0, x) == doctest::Approx(x).epsilon(1e-12));
    CHECK(incomplete_beta(3.0, 1.0, x) == doctest::Approx(std::pow(x, 3.0)).epsilon(1e-12));
    CHECK(incomplete_beta(1.0, 2.5, x) == doctest::Approx(1.0 - std::pow(1.0 - x, 2.5)).epsilon(1e-12));
    CHECK(incomplete_beta(2.0, 3.0, x) + incomplete_beta(3.0, 2.0, 1.0 - x) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(incomplete_beta(1.0, 1.0, 1.5) == 1.0);
  CHECK(incomplete_beta(1.0, 1.0, -0.5) == 0.0);
  CHECK_THROWS_AS(incomplete_beta(0.0, 1.0, 0.5), Error);
}

TEST_CASE("identical classes give nothing significant") {
  const auto map = significance_map(mirrored_features(20, 1));
  CHECK(map.t.cwiseAbs().maxCoeff() == 0.0);
  CHECK(map.p.minCoeff() == 1.0);
  CHECK(map.significant.count() == 0);
  CHECK(map.pairs == 20);
}

TEST_CASE("alpha zero marks nothing") {
  FeatureMatrix fm = random_features(30, 2);
  fm.values.col(0).array() += 10.0 * Eigen::ArrayXd::LinSpaced(60, 0, 1).unaryExpr([](double v) { return std::fmod(v * 59, 2.0) < 1 ? 1.0 : 0.0; });
  SignificanceOptions opts;
  opts.alpha = 0.0;
  CHECK(significance_map(fm, opts).significant.count() == 0);
  CHECK(significance_map(fm).p(0, 0) < 1e-6);
}

TEST_CASE("swapping labels flips delta and keeps p") {
  const FeatureMatrix fm = random_features(25, 3);
  const auto a = significance_map(fm);
  const auto b = significance_map(swap_labels(fm));
  CHECK(a.delta == -b.delta);
  CHECK(a.t == -b.t);
  CHECK(a.p == b.p);
  CHECK(a.significant == b.significant);
}

TEST_CASE("pairing needs both labels and equal counts") {
  FeatureMatrix fm = random_features(5, 4);
  FeatureMatrix right_only = fm.select({0, 2, 4});
  CHECK_THROWS_AS(significance_map(right_only), Error);

  FeatureMatrix unequal = fm.select({0, 1, 2, 3, 4});
  try {
    significance_map(unequal);
    FAIL("expected UnequalCounts");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnequalCounts);
  }
  SignificanceOptions opts;
  opts.truncate_unequal = true;
  const auto map = significance_map(unequal, opts);
  CHECK(map.pairs == 2);
  CHECK(map.t == significance_map(fm.select({0, 1, 2, 3})).t);
}

TEST_CASE("trial level averages epochs per trial") {
  SynthConfig c;
  c.n_trials_per_side = 6;
  const FeatureMatrix fm = build_feature_matrix(generate_synthetic(c), filter());
  SignificanceOptions opts;
  opts.level = Level::Trial;
  const auto map = significance_map(fm, opts);
  CHECK(map.pairs == 6);
  CHECK(significance_map(fm).pairs == 48);
  double right = 0.0;
  for (Eigen::Index r = 0; r < fm.rows(); ++r)
    if (fm.labels[static_cast<std::size_t>(r)] == MotorLabel::Right) right += fm.values(r, 7);
  CHECK(map.mean_right(0, 7) == doctest::Approx(right / 48.0).epsilon(1e-12));
}

TEST_CASE("alpha boost on C4 shows up as significant positive delta") {
  SynthConfig c;
  c.asymmetry_db = 3.0;
  c.target_channels = {9};
  c.seed = 17;
  const auto map = significance_map(build_feature_matrix(generate_synthetic(c), filter()));
  for (int bin = 4; bin <= 6; ++bin) {
    CHECK(map.significant(9, bin - 1));
    CHECK(map.delta(9, bin - 1) > 0.0);
  }
  // The left-trial boost lands on the mirror channel.
  CHECK(map.delta(2, 4) < 0.0);
}

TEST_CASE("band aggregation") {
  SignificanceMap uniform;
  uniform.delta.setOnes();
  uniform.significant.setConstant(true);
  const BandMap all = band_aggregate(uniform);
  for (int b = 0; b < 4; ++b)
    for (int c = 0; c < kChannels; ++c) {
      CHECK(all.mean_delta[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)] == 1.0);
      CHECK(all.mean_delta_significant[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)] == 1.0);
    }

  SignificanceMap single;
  single.delta(9, 0) = 2.0;
  single.significant(9, 0) = true;
  const BandMap one = band_aggregate(single);
  for (int b = 0; b < 4; ++b)
    for (int c = 0; c < kChannels; ++c) {
      const auto& v = one.mean_delta_significant[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)];
      if (b == 0 && c == 9) {
        REQUIRE(v.has_value());
        CHECK(*v == 2.0);
      } else {
        CHECK_FALSE(v.has_value());
      }
    }
}

TEST_CASE("bands partition the bin grid") {
  std::set<int> seen;
  std::size_t total = 0;
  for (Band b : kAllBands) {
    total += band_bins(b).size();
    for (int bin : band_bins(b)) seen.insert(bin);
  }
  CHECK(total == 25);
  CHECK(seen.size() == 25);
  CHECK(*seen.begin() == 1);
  CHECK(*seen.rbegin() == 25);
  CHECK(band_bins(Band::Delta).size() == 1);
  CHECK(band_bins(Band::Theta).size() == 2);
  CHECK(band_bins(Band::Alpha).size() == 3);
  CHECK(band_bins(Band::Beta).front() == 7);
}

TEST_CASE("significance csv round-trip") {
  const auto map = significance_map(random_features(10, 6));
  std::ostringstream out;
  write_significance_csv(map, out);
  const std::string text = out.str();
  CHECK(text.rfind("channel,freq_hz,t,p,delta,significant\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 301);
  std::istringstream in(text);
  const auto back = read_significance_csv(in);
  CHECK(back.t == map.t);
  CHECK(back.p == map.p);
  CHECK(back.delta == map.delta);
  CHECK(back.significant == map.significant);

  std::istringstream bad("channel,freq_hz,t,p,delta,significant\nXX,2,0,1,0,0\n");
  CHECK_THROWS_AS(read_significance_csv(bad), Error);
}

TEST_CASE("band csv writes empty cells for null") {
  SignificanceMap single;
  single.delta(9, 0) = 2.0;
  single.significant(9, 0) = true;
  std::ostringstream out;
  write_band_csv(band_aggregate(single), out);
  const std::string text = out.str();
  CHECK(text.rfind("band,channel,mean_delta,mean_delta_significant\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 49);
  CHECK(text.find("delta,C4,2,2\n") != std::string::npos);
  CHECK(text.find("delta,C3,0,\n") != std::string::npos);
}
