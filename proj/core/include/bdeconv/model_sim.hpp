#pragma once

// Synthetic data for the noisy blind deconvolution model
//
//   Y_t = (u * X)_t + sigma0 * W_t,
//
// with X an i.i.d. finite-alphabet complex signal and W circular complex
// Gaussian noise (independent real and imaginary parts of variance 1/2).

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "bdeconv/types.hpp"

namespace bdeconv {

/// Finite complex alphabet with its probabilities.
struct DiscreteComplexDist {
  std::vector<cplx> points;
  std::vector<double> weights;

  std::size_t size() const noexcept { return points.size(); }

  /// Points pairwise distinct, weights strictly positive and summing to 1.
  void validate() const;
};

/// Real FIR filter; coeffs[i] is the tap at lag origin + i.
struct FiniteFilter {
  std::vector<double> coeffs;
  long origin = 0;
};

enum class Preset { Mixture, Ar2 };

std::string_view to_string(Preset preset) noexcept;
Preset parse_preset(std::string_view name);

enum class ChannelKind {
  /// Y~ = u * X with a finite direct filter u.
  Direct,
  /// Y~ solves X_t = sum_k theta_k Y~_{t-k} for a finite causal inverse filter theta.
  InverseRecursion,
};

struct ModelConfig {
  DiscreteComplexDist dist;
  ChannelKind channel = ChannelKind::Direct;
  /// The direct filter u, or the inverse filter theta for InverseRecursion.
  FiniteFilter filter{{1.0}, 0};
  double sigma0 = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  /// Discarded warm-up samples of the inverse recursion.
  std::size_t burn_in = 200;

  void validate() const;
};

/// The three-point alphabet (4+i, -1+3i, -2-i) with weights (0.6, 0.25, 0.15).
DiscreteComplexDist reference_alphabet();

/// Inverse filter of a preset, ordered theta_0, theta_1, ...
std::vector<double> preset_inverse_filter(Preset preset);

/// Mixture: u = delta_0. Ar2: theta = (6/7, -2/7, 3/7).
ModelConfig make_preset(Preset preset, double sigma0, std::size_t n, std::uint64_t seed);

ComplexSeries simulate_signal(const DiscreteComplexDist& dist, std::size_t n, std::uint64_t seed);

/// Convolution restricted to the output indices whose inputs all exist.
/// Throws EmptyOverlap when no output index is fully covered.
ComplexSeries apply_filter(const FiniteFilter& filter, const ComplexSeries& x);

/// Solves sum_k theta_k y_{t-k} = x_t forward in time with y = 0 before x starts.
ComplexSeries solve_inverse_recursion(std::span<const double> theta, const ComplexSeries& x);

/// Adds sigma0 * W_t with E|W_t|^2 = 1.
ComplexSeries add_noise(const ComplexSeries& y, double sigma0, std::uint64_t seed);

/// n observations indexed 1..n.
ComplexSeries simulate_model(const ModelConfig& cfg);

/// CSV with header "t,re,im".
void write_series_csv(std::ostream& out, const ComplexSeries& series);
ComplexSeries read_series_csv(std::istream& in);

}  // namespace bdeconv
