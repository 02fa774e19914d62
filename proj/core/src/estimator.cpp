#include "bdeconv/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "bdeconv/error.hpp"
#include "bdeconv/nelder_mead.hpp"
#include "bdeconv/parallel.hpp"
#include "bdeconv/pseudo_moment.hpp"
#include "bdeconv/rng.hpp"

namespace bdeconv {

void RootSearchConfig::validate() const {
  if (grid_steps < 1) throw Error(ErrorCode::InvalidArgument, "grid_steps must be positive");
  if (!(bisect_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "bisect_tol must be positive");
  if (n_starts < 1) throw Error(ErrorCode::InvalidArgument, "n_starts must be at least 1");
  if (!(simplex_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "simplex_tol must be positive");
  if (!(xi_box > 0.0)) throw Error(ErrorCode::InvalidArgument, "xi_box must be positive");
  if (restarts < 0) throw Error(ErrorCode::InvalidArgument, "restarts must be nonnegative");
}

CriterionEvaluator::CriterionEvaluator(ComplexSeries y, int half_width, int p)
    : y_(std::move(y)), half_width_(half_width), p_(p) {
  y_.validate();
  if (half_width_ < 0) throw Error(ErrorCode::InvalidArgument, "half width must be nonnegative");
  if (p_ < 1 || p_ > kMaxAlphabet) throw Error(ErrorCode::InvalidArgument, "alphabet size p must be in [1, 12]");
  if (y_.size() < 2 * static_cast<std::size_t>(half_width_) + 1) {
    throw Error(ErrorCode::SeriesTooShort, "series needs at least 2*half_width+1 samples");
  }
}

FilterSpec CriterionEvaluator::spec_for(std::span<const double> xi) const {
  FilterSpec spec;
  spec.half_width = half_width_;
  spec.xi.assign(xi.begin(), xi.end());
  return spec;
}

MomentVector CriterionEvaluator::moments(std::span<const double> xi) const {
  return empirical_moments(z_series(spec_for(xi), y_), p_);
}

double CriterionEvaluator::criterion(double sigma, std::span<const double> xi) const {
  const FilterSpec spec = spec_for(xi);
  return criterion_J(sigma, spec, empirical_moments(z_series(spec, y_), p_));
}

double default_sigma_max(const ComplexSeries& y) {
  y.validate();
  double mean = 0.0;
  for (const cplx& v : y.samples) mean += std::abs(v);
  mean /= static_cast<double>(y.size());
  double var = 0.0;
  for (const cplx& v : y.samples) var += (std::abs(v) - mean) * (std::abs(v) - mean);
  const double sd = y.size() > 1 ? std::sqrt(var / static_cast<double>(y.size() - 1)) : 0.0;
  // A constant-modulus record still needs a positive ceiling.
  return 3.0 * std::max(sd, 1e-3 * std::max(mean, 1.0));
}

std::optional<RootBracket> bracket_sigma_root(const MomentVector& d_n, double filter_norm, double sigma_max,
                                              const RootSearchConfig& cfg) {
  cfg.validate();
  if (!(sigma_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma_max must be positive");
  auto J = [&](double sigma) { return criterion_detail(sigma, filter_norm, d_n).value; };

  if (!(J(0.0) > 0.0)) return RootBracket{0.0, 0.0};

  auto scan = [&](double from, double to) -> std::optional<RootBracket> {
    const double step = (to - from) / cfg.grid_steps;
    double prev = from;
    for (int i = 1; i <= cfg.grid_steps; ++i) {
      const double sigma = from + step * i;
      if (!(J(sigma) > 0.0)) return RootBracket{prev, sigma};
      prev = sigma;
    }
    return std::nullopt;
  };

  std::optional<RootBracket> bracket = scan(0.0, sigma_max);
  if (!bracket) bracket = scan(sigma_max, 2.0 * sigma_max);
  if (!bracket) return std::nullopt;

  while (bracket->upper - bracket->lower > cfg.bisect_tol) {
    const double mid = bracket->root();
    if (mid <= bracket->lower || mid >= bracket->upper) break;
    if (J(mid) > 0.0) {
      bracket->lower = mid;
    } else {
      bracket->upper = mid;
    }
  }
  return bracket;
}

std::optional<double> sigma_root(const MomentVector& d_n, double filter_norm, double sigma_max,
                                 const RootSearchConfig& cfg) {
  const auto bracket = bracket_sigma_root(d_n, filter_norm, sigma_max, cfg);
  if (!bracket) return std::nullopt;
  return bracket->root();
}

std::optional<double> sigma_root(std::span<const double> xi, const CriterionEvaluator& evaluator, double sigma_max,
                                 const RootSearchConfig& cfg) {
  FilterSpec spec;
  spec.half_width = evaluator.half_width();
  spec.xi.assign(xi.begin(), xi.end());
  return sigma_root(evaluator.moments(xi), filter_l2_norm(spec), sigma_max, cfg);
}

std::vector<double> normalize_filter(std::span<const double> theta_raw) {
  double norm2 = 0.0;
  std::size_t lead = 0;
  for (std::size_t i = 0; i < theta_raw.size(); ++i) {
    norm2 += theta_raw[i] * theta_raw[i];
    if (std::abs(theta_raw[i]) > std::abs(theta_raw[lead])) lead = i;
  }
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) throw Error(ErrorCode::ZeroFilter, "cannot normalise a zero filter");
  const double scale = (theta_raw[lead] < 0.0 ? -1.0 : 1.0) / std::sqrt(norm2);
  std::vector<double> out(theta_raw.begin(), theta_raw.end());
  for (double& c : out) c *= scale;
  return out;
}

DelayAlignment align_delay(std::span<const double> theta) {
  DelayAlignment out;
  if (theta.empty()) return out;
  std::size_t lead = 0;
  for (std::size_t i = 1; i < theta.size(); ++i) {
    if (std::abs(theta[i]) > std::abs(theta[lead])) lead = i;
  }
  out.shift = static_cast<int>(lead);
  out.coeffs.assign(theta.size(), 0.0);
  for (std::size_t i = 0; i < lead; ++i) out.dropped_energy += theta[i] * theta[i];
  for (std::size_t i = lead; i < theta.size(); ++i) out.coeffs[i - lead] = theta[i];
  out.coeffs = normalize_filter(out.coeffs);
  return out;
}

EstimationResult estimate(const ComplexSeries& y, const FilterSpec& family, int p, const RootSearchConfig& cfg) {
  cfg.validate();
  if (family.family != FilterFamily::FirDirect) throw Error(ErrorCode::InvalidArgument, "unsupported filter family");
  const CriterionEvaluator evaluator(y, family.half_width, p);
  const std::size_t dim = family.dimension();
  const double sigma_max = cfg.sigma_max > 0.0 ? cfg.sigma_max : default_sigma_max(y);

  auto objective = [&](std::span<const double> xi) {
    double norm2 = 0.0;
    for (double c : xi) norm2 += c * c;
    if (!(norm2 > 1e-24)) return std::numeric_limits<double>::infinity();
    const auto root = sigma_root(xi, evaluator, sigma_max, cfg);
    return root ? *root : std::numeric_limits<double>::infinity();
  };

  NelderMeadOptions nm;
  nm.box = cfg.xi_box;
  nm.f_tol = cfg.simplex_tol;
  nm.x_tol = std::sqrt(cfg.simplex_tol);
  nm.max_evaluations = cfg.max_evaluations;

  std::vector<StartOutcome> starts(static_cast<std::size_t>(cfg.n_starts));
  parallel_for(starts.size(), cfg.workers, [&](std::size_t s) {
    Rng rng = Rng::stream(cfg.seed, s);
    std::vector<double> start(dim);
    double norm2 = 0.0;
    while (!(norm2 > 1e-12)) {
      norm2 = 0.0;
      for (double& v : start) {
        v = rng.normal();
        norm2 += v * v;
      }
    }
    for (double& v : start) v /= std::sqrt(norm2);

    StartOutcome& out = starts[s];
    out.start = start;
    NelderMeadResult best = nelder_mead(objective, start, nm);
    out.evaluations = best.evaluations;
    for (int r = 0; r < cfg.restarts; ++r) {
      NelderMeadResult again = nelder_mead(objective, best.x, nm);
      out.evaluations += again.evaluations;
      const bool improved = again.value < best.value;
      if (improved || again.value == best.value) best = std::move(again);
      if (!improved) break;
    }
    out.converged = best.converged;
    if (std::isfinite(best.value)) {
      out.sigma = best.value;
      out.xi = best.x;
      out.j_residual = std::abs(evaluator.criterion(best.value, normalize_filter(best.x)));
    }
  });

  // Deterministic merge: smaller sigma, then smaller residual, then lower index.
  int chosen = -1;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    if (!starts[s].sigma) continue;
    if (chosen < 0) {
      chosen = static_cast<int>(s);
      continue;
    }
    const StartOutcome& a = starts[s];
    const StartOutcome& b = starts[static_cast<std::size_t>(chosen)];
    if (std::tie(*a.sigma, a.j_residual) < std::tie(*b.sigma, b.j_residual)) chosen = static_cast<int>(s);
  }
  if (chosen < 0) throw Error(ErrorCode::AllStartsFailed, "no start produced a sign change of J_n");

  const StartOutcome& best = starts[static_cast<std::size_t>(chosen)];
  EstimationResult result;
  result.xi_hat = best.xi;
  result.theta_unit = normalize_filter(best.xi);
  const DelayAlignment aligned = align_delay(result.theta_unit);
  result.theta_hat = aligned.coeffs;
  result.delay_shift = aligned.shift;
  result.dropped_energy = aligned.dropped_energy;
  result.start_used = chosen;
  result.converged = best.converged;
  result.half_width = family.half_width;
  result.p = p;
  result.sigma_max = sigma_max;

  const MomentVector d_n = evaluator.moments(result.theta_unit);
  const auto bracket = bracket_sigma_root(d_n, 1.0, sigma_max, cfg);
  result.bracket = bracket.value_or(RootBracket{*best.sigma, *best.sigma});
  result.sigma_hat = result.bracket.root();
  result.j_residual = std::abs(criterion_detail(result.sigma_hat, 1.0, d_n).value);
  result.j_threshold = std::max(std::abs(criterion_detail(result.bracket.lower, 1.0, d_n).value),
                                std::abs(criterion_detail(result.bracket.upper, 1.0, d_n).value));
  result.starts = std::move(starts);
  return result;
}

}  // namespace bdeconv
