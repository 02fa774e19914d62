#include "bdeconv/distribution_recovery.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "bdeconv/error.hpp"

namespace bdeconv {

std::vector<cplx> canonical_sort(std::vector<cplx> points) {
  std::stable_sort(points.begin(), points.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return points;
}

std::vector<cplx> polynomial_roots(const Eigen::VectorXcd& coeffs) {
  const Eigen::Index degree = coeffs.size() - 1;
  if (degree < 1) throw Error(ErrorCode::InvalidArgument, "polynomial must have degree >= 1");
  const cplx lead = coeffs(degree);
  if (std::abs(lead) < 1e-10) {
    throw Error(ErrorCode::DegenerateLeadingCoeff, "leading coefficient vanishes; degree collapses");
  }
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
  for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < degree; ++i) companion(i, degree - 1) = -coeffs(i) / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::InvalidArgument, "companion eigenvalues did not converge");
  const Eigen::VectorXcd ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

AlphabetEstimate support_points(const PseudoMomentMatrix& d_tilde) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(d_tilde.entries);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::InvalidArgument, "Hermitian eigensolver failed");
  AlphabetEstimate out;
  out.min_eigenvalue = solver.eigenvalues()(0);
  out.eigvec = solver.eigenvectors().col(0).normalized();
  out.polynomial = out.eigvec.conjugate();
  out.points = canonical_sort(polynomial_roots(out.polynomial));
  return out;
}

WeightEstimate weights(const MomentVector& d_tilde, std::span<const cplx> points) {
  const auto p = static_cast<Eigen::Index>(points.size());
  if (p < 1 || p > d_tilde.p) throw Error(ErrorCode::InvalidArgument, "need between 1 and p support points");
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      if (std::abs(points[static_cast<std::size_t>(i)] - points[static_cast<std::size_t>(j)]) < 1e-10) {
        throw Error(ErrorCode::SingularVandermonde, "support points coincide");
      }
    }
  }
  Eigen::MatrixXcd vandermonde(p, p);
  Eigen::VectorXcd rhs(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    cplx power = 1.0;
    for (Eigen::Index k = 0; k < p; ++k) {
      vandermonde(k, i) = power;
      power *= points[static_cast<std::size_t>(i)];
    }
  }
  for (Eigen::Index k = 0; k < p; ++k) rhs(k) = d_tilde(0, static_cast<int>(k));
  const Eigen::VectorXcd q = vandermonde.partialPivLu().solve(rhs);

  WeightEstimate out;
  out.weights.resize(static_cast<std::size_t>(p));
  for (Eigen::Index i = 0; i < p; ++i) {
    out.weights[static_cast<std::size_t>(i)] = q(i).real();
    out.imag_residual = std::max(out.imag_residual, std::abs(q(i).imag()));
    out.negative_flag = out.negative_flag || q(i).real() < 0.0;
  }
  return out;
}

DistributionEstimate recover_distribution(const ComplexSeries& y, const EstimationResult& estimate) {
  const CriterionEvaluator evaluator(y, estimate.half_width, estimate.p);
  const MomentVector d_tilde = pseudo_moments(evaluator.moments(estimate.theta_unit), estimate.sigma_hat, 1.0);
  DistributionEstimate out;
  out.d_tilde = hankel_matrix(d_tilde);
  out.alphabet = support_points(out.d_tilde);
  out.weights = weights(d_tilde, out.alphabet.points);
  return out;
}

}  // namespace bdeconv
