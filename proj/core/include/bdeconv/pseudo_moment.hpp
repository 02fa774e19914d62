#pragma once

// Gaussian noise removal at the level of moments.
//
// If Z = R + beta * V with V circular complex Gaussian (E|V|^2 = 1), the
// conjugate moments satisfy d = A(beta) d~, where d~ are the moments of R.
// For a hypothesised noise level sigma and filter s, beta = sigma * ||s||_2.
// The (p+1)x(p+1) arrangement D~ of d~ is Hermitian, and its determinant
// J(sigma, s) vanishes at the true noise level and inverse filter.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bdeconv/moment_engine.hpp"

namespace bdeconv {

inline constexpr int kMaxAlphabet = 12;

/// Exact binomial coefficient C(n, k) for 0 <= k <= n <= kMaxAlphabet.
std::uint64_t binomial(int n, int k);
/// Exact n! for 0 <= n <= kMaxAlphabet.
std::uint64_t factorial(int n);

/// Dense (p+1)^2 x (p+1)^2 matrix A(beta); rows (j,k), columns (m,l).
Eigen::MatrixXd build_A(double beta, int p);
/// Closed-form inverse of build_A(beta, p).
Eigen::MatrixXd build_A_inverse(double beta, int p);

/// d~ = A^{-1}(sigma * norm) d, applied through the sparse closed form.
MomentVector pseudo_moments(const MomentVector& d_n, double sigma, double norm);

/// Hermitian-symmetrised arrangement, entries(k, j) = d~[j(p+1)+k].
struct PseudoMomentMatrix {
  Eigen::MatrixXcd entries;
  /// max |D - D^H| / max(1, max |D|) before symmetrisation.
  double raw_asymmetry = 0.0;

  int p() const noexcept { return static_cast<int>(entries.rows()) - 1; }
};

PseudoMomentMatrix hankel_matrix(const MomentVector& d_tilde);

/// Pivoted-LU determinant.
std::complex<double> determinant(const Eigen::MatrixXcd& m);

struct CriterionValue {
  double value = 0.0;
  /// |Im det| / max(|det|, tiny) of the symmetrised matrix.
  double relative_imag = 0.0;
  double raw_asymmetry = 0.0;
};

/// J at hypothesised noise level sigma for a filter with Euclidean norm `norm`.
CriterionValue criterion_detail(double sigma, double norm, const MomentVector& d_n);

/// J_n(sigma, xi) = det D~_n(sigma, s(xi)).
double criterion_J(double sigma, const FilterSpec& spec, const MomentVector& d_n);

/// sign(j) * log(|j| + 1).
double g_transform(double j_value) noexcept;

struct GCurvePoint {
  double sigma = 0.0;
  double j = 0.0;
  double g = 0.0;
};

std::vector<GCurvePoint> g_curve(const FilterSpec& spec, const MomentVector& d_n, std::span<const double> sigma_grid);

/// CSV with columns sigma,J,G.
void write_g_curve_csv(std::ostream& out, std::span<const GCurvePoint> curve);

}  // namespace bdeconv
