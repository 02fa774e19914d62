#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "bdeconv/asymptotics.hpp"
#include "bdeconv/error.hpp"
#include "bdeconv/model_sim.hpp"
#include "bdeconv/rng.hpp"

using namespace bdeconv;

namespace {

Eigen::MatrixXcd random_matrix(int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(rng.normal(), rng.normal());
  return m;
}

double fd_error_max(const Eigen::MatrixXcd& d) {
  const int n = static_cast<int>(d.rows());
  const Eigen::VectorXcd g = det_gradient(d);
  double worst = 0.0;
  for (int col = 0; col < n; ++col) {
    for (int row = 0; row < n; ++row) {
      const double h = 1e-5;
      Eigen::MatrixXcd plus = d, minus = d;
      plus(row, col) += h;
      minus(row, col) -= h;
      const cplx fd = (plus.determinant() - minus.determinant()) / (2 * h);
      const cplx an = g(col * n + row);
      worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
    }
  }
  return worst;
}

}  // namespace

TEST(DetGradient, Identity) {
  const Eigen::VectorXcd g = det_gradient(Eigen::MatrixXcd::Identity(2, 2));
  ASSERT_EQ(g.size(), 4);
  EXPECT_EQ(g(0), cplx(1));
  EXPECT_EQ(g(1), cplx(0));
  EXPECT_EQ(g(2), cplx(0));
  EXPECT_EQ(g(3), cplx(1));
}

TEST(DetGradient, Diagonal) {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 2;
  d(1, 1) = 3;
  const Eigen::VectorXcd g = det_gradient(d);
  EXPECT_EQ(g(0), cplx(3));
  EXPECT_EQ(g(1), cplx(0));
  EXPECT_EQ(g(2), cplx(0));
  EXPECT_EQ(g(3), cplx(2));
}

TEST(DetGradient, MatchesFiniteDifferences) {
  for (int n = 2; n <= 7; ++n) EXPECT_LT(fd_error_max(random_matrix(n, 100 + n)), 1e-6) << "n=" << n;
}

TEST(DetGradient, SingularMatrix) {
  Eigen::MatrixXcd d = random_matrix(4, 7);
  d.col(3) = d.col(0) + cplx(0, 2) * d.col(1);
  EXPECT_LT(fd_error_max(d), 1e-6);
  EXPECT_GT(det_gradient(d).norm(), 0.0);
}

TEST(CriterionDerivatives, QuadraticIsExact) {
  // J = 3 s^2 - 2 s x0 + x0^2 + 4 x0 x1 - x1^2 + 5 s
  const CriterionFunction f = [](double s, std::span<const double> x) {
    return 3 * s * s - 2 * s * x[0] + x[0] * x[0] + 4 * x[0] * x[1] - x[1] * x[1] + 5 * s;
  };
  const std::vector<double> x{0.3, -0.7};
  const double s = 0.2;
  FdSteps steps{1e-3, {1e-3, 1e-3}};
  const CriterionDerivatives d = criterion_derivatives(f, s, x, steps);
  EXPECT_NEAR(d.d_sigma, 6 * s - 2 * x[0] + 5, 1e-8);
  EXPECT_NEAR(d.d_xi(0), -2 * s + 2 * x[0] + 4 * x[1], 1e-8);
  EXPECT_NEAR(d.d_xi(1), 4 * x[0] - 2 * x[1], 1e-8);
  EXPECT_NEAR(d.d_xi_xi(0, 0), 2, 1e-6);
  EXPECT_NEAR(d.d_xi_xi(0, 1), 4, 1e-6);
  EXPECT_NEAR(d.d_xi_xi(1, 0), 4, 1e-6);
  EXPECT_NEAR(d.d_xi_xi(1, 1), -2, 1e-6);
  EXPECT_NEAR(d.d_sigma_xi(0), -2, 1e-6);
  EXPECT_NEAR(d.d_sigma_xi(1), 0, 1e-6);
  EXPECT_TRUE(d.negative_alpha);
}

TEST(CriterionDerivatives, SecondOrderConvergence) {
  const CriterionFunction f = [](double s, std::span<const double> x) {
    return std::exp(0.5 * s) * std::sin(x[0]) * std::cos(2 * x[1]);
  };
  const std::vector<double> x{0.4, 0.3};
  const double s = 0.1;
  const double exact00 = -std::exp(0.05) * std::sin(0.4) * std::cos(0.6);
  const double exact01 = -2 * std::exp(0.05) * std::cos(0.4) * std::sin(0.6);
  auto errors = [&](double h) {
    const CriterionDerivatives d = criterion_derivatives(f, s, x, FdSteps{h, {h, h}});
    return std::pair{std::abs(d.d_xi_xi(0, 0) - exact00), std::abs(d.d_xi_xi(0, 1) - exact01)};
  };
  const auto [a0, a1] = errors(2e-2);
  const auto [b0, b1] = errors(1e-2);
  EXPECT_NEAR(a0 / b0, 4.0, 0.3);
  EXPECT_NEAR(a1 / b1, 4.0, 0.3);
}

TEST(Hac, BandwidthZeroIsSampleVariance) {
  Rng rng(5);
  Eigen::MatrixXd c(1000, 1);
  for (int t = 0; t < 1000; ++t) c(t, 0) = rng.normal() * 2 + 1;
  const double mean = c.col(0).mean();
  const double var = (c.col(0).array() - mean).square().sum() / 1000.0;
  EXPECT_NEAR(hac_gamma1(c, 0)(0, 0), var, 1e-12);
}

TEST(Hac, MovingAverageLongRunVariance) {
  const int n = 100000;
  const double theta = 0.5, sigma = 1.3;
  Rng rng(6);
  Eigen::MatrixXd c(n, 1);
  double prev = sigma * rng.normal();
  for (int t = 0; t < n; ++t) {
    const double u = sigma * rng.normal();
    c(t, 0) = u + theta * prev;
    prev = u;
  }
  const double expected = (1 + theta) * (1 + theta) * sigma * sigma;
  const double got = hac_gamma1(c, default_bandwidth(n))(0, 0);
  EXPECT_NEAR(got / expected, 1.0, 0.1);
}

TEST(Hac, WhiteNoiseVector) {
  const int n = 100000;
  Eigen::Matrix3d chol;
  chol << 1.0, 0.0, 0.0, 0.5, 1.2, 0.0, -0.3, 0.4, 0.8;
  const Eigen::Matrix3d expected = chol * chol.transpose();
  Rng rng(7);
  Eigen::MatrixXd c(n, 3);
  for (int t = 0; t < n; ++t) {
    const Eigen::Vector3d u(rng.normal(), rng.normal(), rng.normal());
    c.row(t) = (chol * u).transpose();
  }
  const Eigen::MatrixXd g = hac_gamma1(c, default_bandwidth(n));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      EXPECT_LT(std::abs(g(i, j) - expected(i, j)), 0.05 * std::sqrt(expected(i, i) * expected(j, j))) << i << j;
}

TEST(Hac, ComplexOverloadIsConsistent) {
  Rng rng(8);
  Eigen::MatrixXcd c(500, 2);
  for (int t = 0; t < 500; ++t)
    for (int k = 0; k < 2; ++k) c(t, k) = cplx(rng.normal(), rng.normal() * (k + 1));
  const ComplexLongRunCovariance lr = hac_gamma1(c, 3);
  ASSERT_EQ(lr.real.rows(), 4);
  EXPECT_LT((lr.real - lr.real.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((lr.hermitian - lr.hermitian.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double rr = lr.real(2 * a, 2 * b), ii = lr.real(2 * a + 1, 2 * b + 1);
      const double ir = lr.real(2 * a + 1, 2 * b), ri = lr.real(2 * a, 2 * b + 1);
      EXPECT_NEAR(lr.hermitian(a, b).real(), rr + ii, 1e-12);
      EXPECT_NEAR(lr.hermitian(a, b).imag(), ir - ri, 1e-12);
    }
  }
}

TEST(Hac, DefaultBandwidth) {
  EXPECT_EQ(default_bandwidth(1000), 10);
  EXPECT_EQ(default_bandwidth(2000), 12);
  EXPECT_EQ(default_bandwidth(100000), 46);
}

namespace {

CovarianceReport mixture_cov(std::size_t n, std::uint64_t seed) {
  const ComplexSeries y = simulate_model(make_preset(Preset::Mixture, 0.05, n, seed));
  RootSearchConfig cfg;
  cfg.seed = seed;
  return plug_in_covariance(estimate(y, FilterSpec::identity(1), 3, cfg), y);
}

}  // namespace

TEST(PlugInCovariance, SymmetricPositiveSemidefinite) {
  const CovarianceReport r = mixture_cov(2000, 51);
  ASSERT_EQ(r.cov.rows(), 4);
  EXPECT_LT((r.cov - r.cov.transpose()).cwiseAbs().maxCoeff(), 1e-12 * r.cov.cwiseAbs().maxCoeff());
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(r.cov).eigenvalues();
  EXPECT_GT(ev.minCoeff(), -1e-10);
  EXPECT_FALSE(r.negative_alpha);
  EXPECT_GT(r.alpha_hat, 0.0);
  EXPECT_EQ(r.bandwidth, default_bandwidth(r.effective_n));
  ASSERT_EQ(r.std_errors.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(r.std_errors[i] * r.std_errors[i], r.cov(i, i), 1e-15);
  EXPECT_GT(r.std_errors[3], 0.0);
}

// Standard errors shrink like 1/sqrt(n): quadrupling n halves them.
TEST(PlugInCovariance, RootNRate) {
  double small = 0, large = 0;
  for (std::uint64_t s : {61, 62, 63}) {
    small += mixture_cov(2000, s).std_errors[3];
    large += mixture_cov(8000, s + 10).std_errors[3];
  }
  EXPECT_NEAR(small / large, 2.0, 0.4);
}
