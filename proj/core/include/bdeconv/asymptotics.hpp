#pragma once

// Plug-in asymptotic covariance of (xi_hat, sigma_hat).
//
// Linearising J_n around the estimate gives
//   Cov = N * (Dh M Dh') * N' / n,
//   M   = A^{-1}(sigma ||theta||) Gamma_1 A^{-1}(sigma ||theta||)',
//   N   = (1/alpha) [ (d2_xi J)^{-1} d_sigma_xi J ; 1 ],  alpha = -d_sigma J,
// where Dh is the gradient of det with respect to the pseudo-moments and
// Gamma_1 the long-run covariance of the per-sample moment terms.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bdeconv/estimator.hpp"
#include "bdeconv/pseudo_moment.hpp"

namespace bdeconv {

/// d det / d D(k, j) at flat position j(p+1)+k, i.e. the cofactor matrix.
/// Computed from minors, so it is valid for singular D.
Eigen::VectorXcd det_gradient(const Eigen::MatrixXcd& d);

struct FdSteps {
  double sigma = 1e-4;
  std::vector<double> xi;

  /// h_sigma = 1e-4 max(1, sigma), h_xi = 1e-4 max(1, |xi_i|).
  static FdSteps defaults(double sigma, std::span<const double> xi);
};

struct CriterionDerivatives {
  double d_sigma = 0.0;
  Eigen::VectorXd d_xi;
  Eigen::MatrixXd d_xi_xi;
  Eigen::VectorXd d_sigma_xi;
  /// d_sigma >= 0, i.e. alpha would not be positive.
  bool negative_alpha = false;
};

using CriterionFunction = std::function<double(double, std::span<const double>)>;

/// Central finite differences of J around (sigma, xi).
CriterionDerivatives criterion_derivatives(const CriterionFunction& J, double sigma, std::span<const double> xi,
                                           const FdSteps& steps);

/// Newey-West (Bartlett) long-run covariance of the rows of `contributions`
/// (one row per time step), centred at the column means, divisor T.
Eigen::MatrixXd hac_gamma1(const Eigen::MatrixXd& contributions, int bandwidth);

struct ComplexLongRunCovariance {
  /// Interleaved (re, im) real covariance, size 2m x 2m.
  Eigen::MatrixXd real;
  /// E[(c - mu)(c - mu)^H] in long-run form, size m x m.
  Eigen::MatrixXcd hermitian;
};

ComplexLongRunCovariance hac_gamma1(const Eigen::MatrixXcd& contributions, int bandwidth);

/// floor(n^{1/3}).
int default_bandwidth(std::size_t n);

struct CovarianceOptions {
  std::optional<int> bandwidth;
  std::optional<double> fd_step_sigma;
  std::optional<double> fd_step_xi;
};

struct CovarianceReport {
  /// (d+1)x(d+1) covariance of (theta_hat, sigma_hat); sigma is the last coordinate.
  Eigen::MatrixXd cov;
  std::vector<double> std_errors;
  double alpha_hat = 0.0;
  bool negative_alpha = false;
  /// Asymptotic variance of sqrt(n) J_n at the estimate, Dh M Dh'.
  double j_variance = 0.0;
  Eigen::MatrixXcd gamma1_hat;
  double fd_step_sigma = 0.0;
  double fd_step_xi = 0.0;
  int bandwidth = 0;
  std::size_t effective_n = 0;
};

/// Derivatives in xi are taken in a chart of the unit sphere around
/// theta_unit, because J is homogeneous in the filter scale and its Hessian
/// is singular along the radial direction. Throws SingularHessian when the
/// chart Hessian has condition number above 1e12.
CovarianceReport plug_in_covariance(const EstimationResult& estimate, const ComplexSeries& y,
                                    const CovarianceOptions& options = {});

}  // namespace bdeconv
