#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>

namespace bdeconv {

/// Mixes (seed, index) into an independent 64-bit seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// mt19937_64 with portable uniform and Box-Muller normal draws, so a given
/// seed yields the same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream number `index` of the master `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t index) { return Rng(derive_seed(seed, index)); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal N(0, 1).
  double normal();
  /// Index drawn from the probability vector `weights` (assumed to sum to 1).
  std::size_t categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace bdeconv
