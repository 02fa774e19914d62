#include <cmath>
#include <complex>
#include <sstream>

#include <gtest/gtest.h>

#include "bdeconv/error.hpp"
#include "bdeconv/model_sim.hpp"
#include "test_support.hpp"

using namespace bdeconv;
using bdeconv::testing::series;

TEST(SimulateSignal, DegenerateAlphabetIsConstant) {
  const DiscreteComplexDist dist{{{2, 1}}, {1.0}};
  const ComplexSeries x = simulate_signal(dist, 5, 42);
  ASSERT_EQ(x.size(), 5u);
  for (const cplx& v : x.samples) EXPECT_EQ(v, cplx(2, 1));
}

TEST(SimulateSignal, FrequenciesMatchWeights) {
  const DiscreteComplexDist dist = reference_alphabet();
  const std::size_t n = 2000;
  const ComplexSeries x = simulate_signal(dist, n, 11);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    double count = 0;
    for (const cplx& v : x.samples) count += (v == dist.points[i]) ? 1.0 : 0.0;
    const double pi = dist.weights[i];
    EXPECT_NEAR(count / n, pi, 3.0 * std::sqrt(pi * (1 - pi) / n)) << "point " << i;
  }
}

TEST(SimulateSignal, SameSeedSameSeries) {
  const DiscreteComplexDist dist = reference_alphabet();
  EXPECT_EQ(simulate_signal(dist, 300, 5).samples, simulate_signal(dist, 300, 5).samples);
  EXPECT_NE(simulate_signal(dist, 300, 5).samples, simulate_signal(dist, 300, 6).samples);
}

TEST(SimulateSignal, RejectsBadDistribution) {
  EXPECT_THROW(simulate_signal(DiscreteComplexDist{{{1, 0}, {2, 0}}, {0.5, 0.6}}, 5, 1), Error);
  EXPECT_THROW(simulate_signal(DiscreteComplexDist{{{1, 0}, {1, 0}}, {0.5, 0.5}}, 5, 1), Error);
}

TEST(ApplyFilter, IdentityFilter) {
  const ComplexSeries x = series({{1, 2}, {3, -1}, {0, 0.5}});
  const ComplexSeries y = apply_filter(FiniteFilter{{1.0}, 0}, x);
  EXPECT_EQ(y.samples, x.samples);
  EXPECT_EQ(y.origin, x.origin);
}

TEST(ApplyFilter, TwoTapHandConvolution) {
  const ComplexSeries x = series({{1, 0}, {0, 1}, {-1, 0}});
  const ComplexSeries y = apply_filter(FiniteFilter{{1.0, 1.0}, 0}, x);
  ASSERT_EQ(y.size(), 2u);
  EXPECT_EQ(y.samples[0], cplx(1, 1));
  EXPECT_EQ(y.samples[1], cplx(-1, 1));
}

TEST(ApplyFilter, IsLinear) {
  const DiscreteComplexDist dist = reference_alphabet();
  const ComplexSeries a = simulate_signal(dist, 50, 1);
  const ComplexSeries b = simulate_signal(dist, 50, 2);
  ComplexSeries combo = a;
  const cplx ca(0.3, -1.2), cb(2.0, 0.5);
  for (std::size_t i = 0; i < combo.size(); ++i) combo.samples[i] = ca * a.samples[i] + cb * b.samples[i];
  const FiniteFilter f{{0.5, -0.25, 1.5}, -1};
  const ComplexSeries fa = apply_filter(f, a), fb = apply_filter(f, b), fc = apply_filter(f, combo);
  ASSERT_EQ(fc.size(), fa.size());
  for (std::size_t i = 0; i < fc.size(); ++i) EXPECT_LT(std::abs(fc.samples[i] - ca * fa.samples[i] - cb * fb.samples[i]), 1e-12);
}

TEST(ApplyFilter, EmptyOverlapThrows) {
  try {
    apply_filter(FiniteFilter{{1, 1, 1, 1}, 0}, series({{1, 0}, {2, 0}}));
    FAIL() << "expected EmptyOverlap";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyOverlap);
  }
}

TEST(InverseRecursion, RoundTripRecoversSignal) {
  const std::vector<double> theta = preset_inverse_filter(Preset::Ar2);
  const ComplexSeries x = simulate_signal(reference_alphabet(), 500, 3);
  const ComplexSeries y = solve_inverse_recursion(theta, x);
  const ComplexSeries back = apply_filter(FiniteFilter{theta, 0}, y);
  for (long t = back.origin; t <= back.last_index(); ++t) {
    EXPECT_LT(std::abs(back.at_time(t) - x.at_time(t)), 1e-10) << "t=" << t;
  }
}

TEST(AddNoise, ZeroNoiseIsIdentity) {
  const ComplexSeries x = simulate_signal(reference_alphabet(), 20, 9);
  EXPECT_EQ(add_noise(x, 0.0, 4).samples, x.samples);
}

TEST(AddNoise, ConjugateMomentsOfCircularGaussian) {
  const std::size_t n = 100000;
  const ComplexSeries w = add_noise(series(std::vector<cplx>(n)), 1.0, 77);
  for (int l = 0; l <= 3; ++l) {
    for (int m = 0; m <= 3; ++m) {
      if (l + m == 0) continue;
      cplx mean{};
      std::vector<cplx> terms(n);
      for (std::size_t t = 0; t < n; ++t) {
        cplx v{1, 0};
        for (int a = 0; a < l; ++a) v *= w.samples[t];
        for (int a = 0; a < m; ++a) v *= std::conj(w.samples[t]);
        terms[t] = v;
        mean += v;
      }
      mean /= static_cast<double>(n);
      double var = 0;
      for (const cplx& v : terms) var += std::norm(v - mean);
      const double se = std::sqrt(var / (n - 1) / n);
      const double expected = (l == m) ? std::tgamma(m + 1.0) : 0.0;
      EXPECT_LT(std::abs(mean - expected), 5.0 * se) << "l=" << l << " m=" << m;
    }
  }
}

TEST(SimulateModel, NoiselessMixtureIsTheSignal) {
  const ModelConfig cfg = make_preset(Preset::Mixture, 0.0, 400, 8);
  const ComplexSeries y = simulate_model(cfg);
  ASSERT_EQ(y.size(), 400u);
  EXPECT_EQ(y.origin, 1);
  for (const cplx& v : y.samples) {
    bool hit = false;
    for (const cplx& a : cfg.dist.points) hit = hit || v == a;
    EXPECT_TRUE(hit) << v;
  }
}

TEST(SimulateModel, SmallNoiseStaysNearAlphabet) {
  const ModelConfig cfg = make_preset(Preset::Mixture, 0.05, 2000, 8);
  const ComplexSeries y = simulate_model(cfg);
  int far = 0;
  for (const cplx& v : y.samples) {
    double best = 1e300;
    for (const cplx& a : cfg.dist.points) best = std::min(best, std::abs(v - a));
    far += best > 5 * 0.05;
  }
  EXPECT_EQ(far, 0);
}

TEST(SimulateModel, Ar2PresetMatchesInverseFilter) {
  const ModelConfig cfg = make_preset(Preset::Ar2, 0.0, 300, 2);
  EXPECT_EQ(cfg.channel, ChannelKind::InverseRecursion);
  const std::vector<double> theta{6.0 / 7, -2.0 / 7, 3.0 / 7};
  ASSERT_EQ(cfg.filter.coeffs.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(cfg.filter.coeffs[i], theta[i]);
  const ComplexSeries y = simulate_model(cfg);
  ASSERT_EQ(y.size(), 300u);
  // Applying theta to the noiseless output lands back on the alphabet.
  const ComplexSeries x = apply_filter(FiniteFilter{theta, 0}, y);
  for (const cplx& v : x.samples) {
    double best = 1e300;
    for (const cplx& a : cfg.dist.points) best = std::min(best, std::abs(v - a));
    EXPECT_LT(best, 1e-9);
  }
}

TEST(SimulateModel, Deterministic) {
  const ModelConfig cfg = make_preset(Preset::Ar2, 0.05, 500, 31);
  EXPECT_EQ(simulate_model(cfg).samples, simulate_model(cfg).samples);
}

TEST(SeriesCsv, RoundTripIsExact) {
  const ComplexSeries y = simulate_model(make_preset(Preset::Mixture, 0.05, 64, 3));
  std::stringstream buf;
  write_series_csv(buf, y);
  const ComplexSeries back = read_series_csv(buf);
  EXPECT_EQ(back.origin, y.origin);
  EXPECT_EQ(back.samples, y.samples);
}

TEST(SeriesCsv, RejectsGaps) {
  std::stringstream buf("t,re,im\n1,0,0\n3,1,1\n");
  EXPECT_THROW(read_series_csv(buf), Error);
}
