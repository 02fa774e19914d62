#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bdeconv/estimator.hpp"
#include "bdeconv/moment_engine.hpp"
#include "bdeconv/pseudo_moment.hpp"

namespace bdeconv {

struct AlphabetEstimate {
  /// Canonically ordered support points.
  std::vector<cplx> points;
  /// Unit eigenvector of the smallest eigenvalue of D~.
  Eigen::VectorXcd eigvec;
  double min_eigenvalue = 0.0;
  /// Coefficients c_0..c_p of the polynomial whose roots are `points`.
  /// With D~(k, j) = E[Z^k conj(Z)^j], a null vector v gives E|sum_j conj(v_j) Z^j|^2 = 0,
  /// so c_j = conj(v_j).
  Eigen::VectorXcd polynomial;
};

struct WeightEstimate {
  std::vector<double> weights;
  double imag_residual = 0.0;
  bool negative_flag = false;
};

/// Descending real part, ties by descending imaginary part.
std::vector<cplx> canonical_sort(std::vector<cplx> points);

/// Roots of c_0 + c_1 x + ... + c_p x^p from the companion matrix.
/// Throws DegenerateLeadingCoeff when |c_p| < 1e-10.
std::vector<cplx> polynomial_roots(const Eigen::VectorXcd& coeffs);

AlphabetEstimate support_points(const PseudoMomentMatrix& d_tilde);

/// Solves sum_i q_i a_i^k = d~(0, k), k = 0..p-1. Throws SingularVandermonde.
WeightEstimate weights(const MomentVector& d_tilde, std::span<const cplx> points);

struct DistributionEstimate {
  AlphabetEstimate alphabet;
  WeightEstimate weights;
  PseudoMomentMatrix d_tilde;
};

/// Alphabet and weights from D~_n(sigma_hat, theta_unit) of an estimate.
DistributionEstimate recover_distribution(const ComplexSeries& y, const EstimationResult& estimate);

}  // namespace bdeconv
