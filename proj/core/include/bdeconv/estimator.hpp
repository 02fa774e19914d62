#pragma once

// Joint estimation of the noise level and the inverse filter:
//
//   sigma_hat = min { sigma >= 0 : exists xi in K with J_n(sigma, xi) = 0 },
//
// computed as min over xi of the smallest positive root sigma*(xi) of
// sigma -> J_n(sigma, xi). The inner root is bracketed on a grid and refined by
// bisection; the outer minimisation is a multi-start Nelder-Mead over the box K.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bdeconv/moment_engine.hpp"
#include "bdeconv/types.hpp"

namespace bdeconv {

struct RootSearchConfig {
  /// Ceiling of the sigma scan; <= 0 selects 3 * sample std of |Y|.
  double sigma_max = 0.0;
  int grid_steps = 200;
  double bisect_tol = 1e-9;
  int n_starts = 8;
  /// Outer optimiser tolerance on simplex values; the coordinate tolerance is its square root.
  double simplex_tol = 1e-10;
  /// K = [-xi_box, xi_box]^d.
  double xi_box = 2.0;
  std::size_t max_evaluations = 1500;
  /// Extra Nelder-Mead runs restarted from each start's best point.
  int restarts = 2;
  std::uint64_t seed = 0;
  unsigned workers = 1;

  void validate() const;
};

/// Final bisection bracket: J > 0 at lower, J <= 0 at upper.
struct RootBracket {
  double lower = 0.0;
  double upper = 0.0;
  double root() const noexcept { return 0.5 * (lower + upper); }
};

/// Empirical moments of Z(s(xi)) for a fixed observation record.
class CriterionEvaluator {
 public:
  CriterionEvaluator(ComplexSeries y, int half_width, int p);

  MomentVector moments(std::span<const double> xi) const;
  double criterion(double sigma, std::span<const double> xi) const;

  const ComplexSeries& observations() const noexcept { return y_; }
  int half_width() const noexcept { return half_width_; }
  int p() const noexcept { return p_; }
  /// Number of Z samples, n - 2K.
  std::size_t effective_length() const noexcept { return y_.size() - 2 * static_cast<std::size_t>(half_width_); }

 private:
  FilterSpec spec_for(std::span<const double> xi) const;

  ComplexSeries y_;
  int half_width_;
  int p_;
};

double default_sigma_max(const ComplexSeries& y);

/// Smallest sign change of sigma -> J on (0, sigma_max], widened once to
/// 2 * sigma_max. Returns a zero-width bracket at 0 when J(0) <= 0 and
/// nullopt (NO_ROOT) when no sign change is found.
std::optional<RootBracket> bracket_sigma_root(const MomentVector& d_n, double filter_norm, double sigma_max,
                                              const RootSearchConfig& cfg);

std::optional<double> sigma_root(const MomentVector& d_n, double filter_norm, double sigma_max,
                                 const RootSearchConfig& cfg);
std::optional<double> sigma_root(std::span<const double> xi, const CriterionEvaluator& evaluator, double sigma_max,
                                 const RootSearchConfig& cfg);

/// Unit Euclidean norm with the largest-magnitude tap made positive. Throws ZeroFilter.
std::vector<double> normalize_filter(std::span<const double> theta_raw);

struct DelayAlignment {
  std::vector<double> coeffs;
  /// Taps the window was advanced by.
  int shift = 0;
  /// Energy of the leading taps pushed out of the window, before renormalising.
  double dropped_energy = 0.0;
};

/// Advances a unit-norm filter so its largest-magnitude tap sits first in the window.
DelayAlignment align_delay(std::span<const double> theta);

struct StartOutcome {
  std::vector<double> start;
  std::optional<double> sigma;
  std::vector<double> xi;
  double j_residual = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

struct EstimationResult {
  double sigma_hat = 0.0;
  /// Raw minimiser of sigma*(xi).
  std::vector<double> xi_hat;
  /// Scale/sign normalised xi_hat, delay untouched.
  std::vector<double> theta_unit;
  /// theta_unit advanced to put the dominant tap first.
  std::vector<double> theta_hat;
  int delay_shift = 0;
  double dropped_energy = 0.0;
  RootBracket bracket;
  double j_residual = 0.0;
  /// max |J| over the final bracket ends; j_residual stays below it.
  double j_threshold = 0.0;
  int start_used = -1;
  bool converged = false;
  int half_width = 0;
  int p = 0;
  double sigma_max = 0.0;
  std::vector<StartOutcome> starts;
};

/// Throws AllStartsFailed when no start finds a root, SeriesTooShort when y
/// cannot support the filter window.
EstimationResult estimate(const ComplexSeries& y, const FilterSpec& family, int p, const RootSearchConfig& cfg);

}  // namespace bdeconv
