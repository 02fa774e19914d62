#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace bdeconv {

using cplx = std::complex<double>;

/// A finite run of complex samples. `origin` is the time index of samples[0].
struct ComplexSeries {
  std::vector<cplx> samples;
  long origin = 1;

  std::size_t size() const noexcept { return samples.size(); }
  long last_index() const noexcept { return origin + static_cast<long>(samples.size()) - 1; }
  const cplx& at_time(long t) const { return samples.at(static_cast<std::size_t>(t - origin)); }

  /// Throws InvalidArgument when empty or when any sample is not finite.
  void validate() const;
};

}  // namespace bdeconv
