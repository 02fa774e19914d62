#pragma once

// Filtered process Z_t = sum_{|k| <= K} s_k Y_{t-k} and its empirical
// conjugate moments E_n[Z^k conj(Z)^j], 0 <= j, k <= p.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bdeconv/types.hpp"

namespace bdeconv {

enum class FilterFamily {
  /// xi is the coefficient vector (s_{-K}, ..., s_K) itself.
  FirDirect,
};

/// Parametric inverse filter truncated to half width K = half_width.
struct FilterSpec {
  FilterFamily family = FilterFamily::FirDirect;
  int half_width = 0;
  std::vector<double> xi;

  std::size_t dimension() const noexcept { return 2 * static_cast<std::size_t>(half_width) + 1; }
  /// Truncated coefficients s_{-K}, ..., s_K.
  std::span<const double> coefficients() const noexcept { return xi; }
  void validate() const;

  static FilterSpec fir(std::vector<double> coeffs);
  /// Delta at lag 0 padded to half width `half_width`.
  static FilterSpec identity(int half_width);
};

/// Flat offset of the (j, k) conjugate moment E[Z^k conj(Z)^j].
constexpr std::size_t moment_index(int p, int j, int k) noexcept {
  return static_cast<std::size_t>(j * (p + 1) + k);
}

/// (p+1)^2 moments, entry j(p+1)+k = E[Z^k conj(Z)^j].
struct MomentVector {
  int p = 1;
  std::vector<cplx> entries;

  MomentVector() = default;
  MomentVector(int p_, std::vector<cplx> entries_);
  static MomentVector zeros(int p);

  cplx& operator()(int j, int k) { return entries[moment_index(p, j, k)]; }
  const cplx& operator()(int j, int k) const { return entries[moment_index(p, j, k)]; }
  std::size_t size() const noexcept { return entries.size(); }
};

/// Z_t for t = origin(y) + K ... last(y) - K. Throws SeriesTooShort.
ComplexSeries z_series(const FilterSpec& spec, const ComplexSeries& y);

/// Compensated single-pass mean of Z^k conj(Z)^j.
MomentVector empirical_moments(const ComplexSeries& z, int p);

/// Per-sample terms Z_t^k conj(Z_t)^j, one row per t, columns in flat order.
Eigen::MatrixXcd moment_contributions(const ComplexSeries& z, int p);

/// Exact moments of a discrete distribution: sum_i w_i a_i^k conj(a_i)^j.
MomentVector discrete_moments(std::span<const cplx> points, std::span<const double> weights, int p);

/// Euclidean norm of the truncated coefficient vector.
double filter_l2_norm(const FilterSpec& spec);

/// Debug dump with columns j,k,re,im.
void write_moments_csv(std::ostream& out, const MomentVector& moments);

}  // namespace bdeconv
