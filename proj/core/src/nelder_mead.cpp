#include "bdeconv/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bdeconv/error.hpp"

namespace bdeconv {

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::span<const double> start, const NelderMeadOptions& options) {
  const std::size_t d = start.size();
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "Nelder-Mead needs at least one coordinate");

  NelderMeadResult result;
  auto project = [&](std::vector<double>& x) {
    for (double& v : x) v = std::clamp(v, -options.box, options.box);
  };
  auto evaluate = [&](std::vector<double>& x) {
    project(x);
    ++result.evaluations;
    const double f = objective(x);
    return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
  };

  std::vector<Vertex> simplex;
  simplex.reserve(d + 1);
  {
    std::vector<double> x0(start.begin(), start.end());
    const double f0 = evaluate(x0);
    simplex.push_back({x0, f0});
  }
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> x(simplex[0].x);
    // Step away from the nearer box face so the vertex stays distinct.
    x[i] += (x[i] + options.initial_step <= options.box) ? options.initial_step : -options.initial_step;
    const double f = evaluate(x);
    simplex.push_back({std::move(x), f});
  }

  auto order = [&] {
    std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };
  auto diameter = [&] {
    double best = 0.0;
    for (std::size_t i = 1; i <= d; ++i) {
      for (std::size_t k = 0; k < d; ++k) best = std::max(best, std::abs(simplex[i].x[k] - simplex[0].x[k]));
    }
    return best;
  };

  std::vector<double> centroid(d);
  auto along = [&](double t) {
    std::vector<double> x(d);
    for (std::size_t k = 0; k < d; ++k) x[k] = centroid[k] + t * (simplex[d].x[k] - centroid[k]);
    return x;
  };

  order();
  while (result.evaluations < options.max_evaluations) {
    const double spread = simplex[d].f - simplex[0].f;
    if (std::isfinite(spread) && spread <= options.f_tol && diameter() <= options.x_tol) {
      result.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t k = 0; k < d; ++k) centroid[k] += simplex[i].x[k] / static_cast<double>(d);
    }

    std::vector<double> xr = along(-1.0);
    const double fr = evaluate(xr);
    if (fr < simplex[0].f) {
      std::vector<double> xe = along(-2.0);
      const double fe = evaluate(xe);
      if (fe < fr) {
        simplex[d] = {std::move(xe), fe};
      } else {
        simplex[d] = {std::move(xr), fr};
      }
    } else if (fr < simplex[d - 1].f) {
      simplex[d] = {std::move(xr), fr};
    } else {
      const bool outside = fr < simplex[d].f;
      std::vector<double> xc = along(outside ? -0.5 : 0.5);
      const double fc = evaluate(xc);
      if (fc < std::min(fr, simplex[d].f)) {
        simplex[d] = {std::move(xc), fc};
      } else {
        for (std::size_t i = 1; i <= d; ++i) {
          for (std::size_t k = 0; k < d; ++k) {
            simplex[i].x[k] = simplex[0].x[k] + 0.5 * (simplex[i].x[k] - simplex[0].x[k]);
          }
          simplex[i].f = evaluate(simplex[i].x);
        }
      }
    }
    order();
  }

  result.x = simplex[0].x;
  result.value = simplex[0].f;
  return result;
}

}  // namespace bdeconv
