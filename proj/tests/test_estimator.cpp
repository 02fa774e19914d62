#include <cmath>

#include <gtest/gtest.h>

#include "bdeconv/error.hpp"
#include "bdeconv/estimator.hpp"
#include "bdeconv/model_sim.hpp"
#include "bdeconv/pseudo_moment.hpp"
#include "test_support.hpp"

using namespace bdeconv;
using bdeconv::testing::series;

namespace {

ComplexSeries mixture(double sigma0, std::size_t n, std::uint64_t seed) {
  return simulate_model(make_preset(Preset::Mixture, sigma0, n, seed));
}

RootSearchConfig quick_search(std::uint64_t seed) {
  RootSearchConfig cfg;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST(SigmaRoot, MixtureAtTrueFilter) {
  const ComplexSeries y = mixture(0.05, 2000, 21);
  const CriterionEvaluator ev(y, 1, 3);
  const std::vector<double> theta{0, 1, 0};
  const auto root = sigma_root(theta, ev, default_sigma_max(y), RootSearchConfig{});
  ASSERT_TRUE(root.has_value());
  EXPECT_GE(*root, 0.03);
  EXPECT_LE(*root, 0.08);
}

TEST(SigmaRoot, NoiselessRootNearZero) {
  const ComplexSeries y = mixture(0.0, 5000, 22);
  const CriterionEvaluator ev(y, 1, 3);
  const std::vector<double> theta{0, 1, 0};
  const auto root = sigma_root(theta, ev, default_sigma_max(y), RootSearchConfig{});
  ASSERT_TRUE(root.has_value());
  EXPECT_LT(*root, 0.02);
}

TEST(SigmaRoot, FullRankMomentsHavePositiveRoot) {
  const std::vector<cplx> pts{{4, 1}, {-1, 3}, {-2, -1}, {0.5, -2}};
  const std::vector<double> w{0.4, 0.3, 0.2, 0.1};
  const MomentVector d = discrete_moments(pts, w, 3);
  ASSERT_GT(criterion_detail(0.0, 1.0, d).value, 0.0);
  const auto root = sigma_root(d, 1.0, 3.0, RootSearchConfig{});
  if (root) EXPECT_GT(*root, 0.0);
}

TEST(SigmaRoot, NonPositiveAtZeroReturnsZero) {
  // p = 1 on a constant series: D~(0) is singular, J(0) = 0.
  const MomentVector d = empirical_moments(series(std::vector<cplx>(5, cplx(1, 1))), 1);
  const auto bracket = bracket_sigma_root(d, 1.0, 1.0, RootSearchConfig{});
  ASSERT_TRUE(bracket.has_value());
  EXPECT_EQ(bracket->root(), 0.0);
}

TEST(SigmaRoot, NoRootBelowTinyCeiling) {
  const ComplexSeries y = mixture(0.05, 2000, 23);
  const CriterionEvaluator ev(y, 1, 3);
  const std::vector<double> theta{0, 1, 0};
  EXPECT_FALSE(sigma_root(theta, ev, 1e-3, RootSearchConfig{}).has_value());
}

TEST(SigmaRoot, ScaleInvariant) {
  const ComplexSeries y = mixture(0.05, 2000, 24);
  const CriterionEvaluator ev(y, 1, 3);
  RootSearchConfig cfg;
  cfg.bisect_tol = 1e-9;
  const double smax = default_sigma_max(y);
  for (const std::vector<double>& xi : {std::vector<double>{0.1, 1, -0.05}, std::vector<double>{0.3, 0.9, 0.2}}) {
    std::vector<double> twice(xi);
    for (double& v : twice) v *= 2;
    const auto a = sigma_root(xi, ev, smax, cfg), b = sigma_root(twice, ev, smax, cfg);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) EXPECT_LT(std::abs(*a - *b), 2 * cfg.bisect_tol);
  }
}

TEST(SigmaRoot, ToleranceLadderConverges) {
  const ComplexSeries y = mixture(0.05, 2000, 25);
  const CriterionEvaluator ev(y, 1, 3);
  const std::vector<double> theta{0, 1, 0};
  RootSearchConfig fine;
  fine.bisect_tol = 1e-12;
  const double ref = *sigma_root(theta, ev, default_sigma_max(y), fine);
  for (double tol : {1e-3, 1e-6, 1e-9}) {
    RootSearchConfig cfg;
    cfg.bisect_tol = tol;
    EXPECT_LE(std::abs(*sigma_root(theta, ev, default_sigma_max(y), cfg) - ref), tol) << tol;
  }
}

TEST(SigmaRoot, BracketStraddlesSignChange) {
  const ComplexSeries y = mixture(0.05, 2000, 26);
  const MomentVector d = empirical_moments(y, 3);
  const auto br = bracket_sigma_root(d, 1.0, default_sigma_max(y), RootSearchConfig{});
  ASSERT_TRUE(br.has_value());
  EXPECT_GT(criterion_detail(br->lower, 1.0, d).value, 0.0);
  EXPECT_LE(criterion_detail(br->upper, 1.0, d).value, 0.0);
  EXPECT_LE(br->upper - br->lower, 1e-9);
}

TEST(NormalizeFilter, Examples) {
  const auto a = normalize_filter(std::vector<double>{2, 0, 0});
  EXPECT_EQ(a, (std::vector<double>{1, 0, 0}));
  const auto b = normalize_filter(std::vector<double>{-6.0 / 7, 2.0 / 7, -3.0 / 7});
  EXPECT_NEAR(b[0], 6.0 / 7, 1e-15);
  EXPECT_NEAR(b[1], -2.0 / 7, 1e-15);
  EXPECT_NEAR(b[2], 3.0 / 7, 1e-15);
  const auto c = normalize_filter(std::vector<double>{3, 4, 0});
  EXPECT_NEAR(c[0], 0.6, 1e-15);
  EXPECT_NEAR(c[1], 0.8, 1e-15);
  EXPECT_EQ(c[2], 0.0);
}

TEST(NormalizeFilter, ZeroThrows) {
  try {
    normalize_filter(std::vector<double>{0, 0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroFilter);
  }
}

TEST(AlignDelay, MovesDominantTapFirst) {
  const DelayAlignment a = align_delay(std::vector<double>{0.01, 0.99995, 0.0});
  EXPECT_EQ(a.shift, 1);
  EXPECT_GT(a.coeffs[0], 0.9999);
  EXPECT_NEAR(a.dropped_energy, 1e-4, 1e-12);
  const DelayAlignment b = align_delay(std::vector<double>{6.0 / 7, -2.0 / 7, 3.0 / 7});
  EXPECT_EQ(b.shift, 0);
  EXPECT_EQ(b.dropped_energy, 0.0);
}

TEST(Estimate, MixtureRecoversIdentityFilter) {
  const ComplexSeries y = mixture(0.05, 2000, 31);
  const EstimationResult est = estimate(y, FilterSpec::identity(1), 3, quick_search(1));
  EXPECT_GE(est.sigma_hat, 0.03);
  EXPECT_LE(est.sigma_hat, 0.08);
  ASSERT_EQ(est.theta_hat.size(), 3u);
  EXPECT_NEAR(est.theta_hat[0], 1.0, 0.02);
  EXPECT_NEAR(est.theta_hat[1], 0.0, 0.02);
  EXPECT_NEAR(est.theta_hat[2], 0.0, 0.02);
  EXPECT_LE(est.j_residual, est.j_threshold);
  EXPECT_NEAR(std::hypot(est.theta_unit[0], est.theta_unit[1], est.theta_unit[2]), 1.0, 1e-12);
}

TEST(Estimate, Ar2RecoversInverseFilter) {
  const ComplexSeries y = simulate_model(make_preset(Preset::Ar2, 0.05, 1000, 32));
  const EstimationResult est = estimate(y, FilterSpec::identity(1), 3, quick_search(2));
  const std::vector<double> theta{6.0 / 7, -2.0 / 7, 3.0 / 7};
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(est.theta_hat[i], theta[i], 0.03) << i;
  EXPECT_GE(est.sigma_hat, 0.03);
  EXPECT_LE(est.sigma_hat, 0.09);
}

TEST(Estimate, NoiselessData) {
  const ComplexSeries y = mixture(0.0, 5000, 33);
  const EstimationResult est = estimate(y, FilterSpec::identity(1), 3, quick_search(3));
  EXPECT_LT(est.sigma_hat, 0.02);
  EXPECT_NEAR(est.theta_hat[0], 1.0, 0.02);
  EXPECT_NEAR(est.theta_hat[1], 0.0, 0.02);
  EXPECT_NEAR(est.theta_hat[2], 0.0, 0.02);
}

TEST(Estimate, DeterministicForFixedSeed) {
  const ComplexSeries y = mixture(0.05, 1000, 34);
  RootSearchConfig cfg = quick_search(9);
  const EstimationResult a = estimate(y, FilterSpec::identity(1), 3, cfg);
  cfg.workers = 3;
  const EstimationResult b = estimate(y, FilterSpec::identity(1), 3, cfg);
  EXPECT_EQ(a.sigma_hat, b.sigma_hat);
  EXPECT_EQ(a.xi_hat, b.xi_hat);
}

TEST(Estimate, AllStartsFailed) {
  const ComplexSeries y = mixture(0.05, 1000, 35);
  RootSearchConfig cfg = quick_search(4);
  cfg.sigma_max = 1e-4;
  cfg.n_starts = 3;
  cfg.restarts = 0;
  try {
    estimate(y, FilterSpec::identity(1), 3, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AllStartsFailed);
  }
}

TEST(Estimate, SeriesTooShort) {
  try {
    estimate(series({{1, 0}, {2, 0}}), FilterSpec::identity(1), 3, quick_search(5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SeriesTooShort);
  }
}

TEST(RootSearchConfigTest, Validation) {
  RootSearchConfig cfg;
  cfg.grid_steps = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = RootSearchConfig{};
  cfg.n_starts = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = RootSearchConfig{};
  cfg.bisect_tol = -1;
  EXPECT_THROW(cfg.validate(), Error);
}
