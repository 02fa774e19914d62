#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace bdeconv {

struct NelderMeadOptions {
  /// Initial simplex edge along each coordinate.
  double initial_step = 0.25;
  /// Stop when the spread of simplex values is below f_tol and the simplex
  /// diameter is below x_tol.
  double f_tol = 1e-10;
  double x_tol = 1e-6;
  std::size_t max_evaluations = 2000;
  /// Symmetric box [-box, box]^d; trial points are projected onto it.
  double box = 2.0;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Derivative-free minimisation with box projection. The objective may
/// return +infinity for infeasible points.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::span<const double> start, const NelderMeadOptions& options);

}  // namespace bdeconv
