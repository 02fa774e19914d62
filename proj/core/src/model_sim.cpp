#include "bdeconv/model_sim.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "bdeconv/error.hpp"
#include "bdeconv/rng.hpp"

namespace bdeconv {

void ComplexSeries::validate() const {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "series is empty");
  for (const cplx& v : samples) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorCode::InvalidArgument, "series contains a non-finite sample");
    }
  }
}

void DiscreteComplexDist::validate() const {
  if (points.empty()) throw Error(ErrorCode::InvalidArgument, "alphabet is empty");
  if (points.size() != weights.size()) {
    throw Error(ErrorCode::InvalidArgument, "alphabet and weights differ in length");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(weights[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "weights must be strictly positive");
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (points[i] == points[j]) throw Error(ErrorCode::InvalidArgument, "alphabet points must be distinct");
    }
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorCode::InvalidArgument, "weights must sum to 1");
}

void ModelConfig::validate() const {
  dist.validate();
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be at least 1");
  if (!(sigma0 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma0 must be nonnegative");
  if (filter.coeffs.empty()) throw Error(ErrorCode::InvalidArgument, "filter is empty");
  if (channel == ChannelKind::InverseRecursion && (filter.origin != 0 || filter.coeffs.front() == 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "inverse recursion needs a causal filter with theta_0 != 0");
  }
}

std::string_view to_string(Preset preset) noexcept {
  return preset == Preset::Mixture ? "mixture" : "ar2";
}

Preset parse_preset(std::string_view name) {
  if (name == "mixture") return Preset::Mixture;
  if (name == "ar2") return Preset::Ar2;
  throw Error(ErrorCode::InvalidArgument, "unknown preset '" + std::string(name) + "'");
}

DiscreteComplexDist reference_alphabet() {
  return {{cplx(4, 1), cplx(-1, 3), cplx(-2, -1)}, {0.6, 0.25, 0.15}};
}

std::vector<double> preset_inverse_filter(Preset preset) {
  if (preset == Preset::Mixture) return {1.0};
  return {6.0 / 7.0, -2.0 / 7.0, 3.0 / 7.0};
}

ModelConfig make_preset(Preset preset, double sigma0, std::size_t n, std::uint64_t seed) {
  ModelConfig cfg;
  cfg.dist = reference_alphabet();
  cfg.sigma0 = sigma0;
  cfg.n = n;
  cfg.seed = seed;
  if (preset == Preset::Mixture) {
    cfg.channel = ChannelKind::Direct;
    cfg.filter = {{1.0}, 0};
  } else {
    cfg.channel = ChannelKind::InverseRecursion;
    cfg.filter = {preset_inverse_filter(preset), 0};
  }
  return cfg;
}

ComplexSeries simulate_signal(const DiscreteComplexDist& dist, std::size_t n, std::uint64_t seed) {
  dist.validate();
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be at least 1");
  Rng rng(seed);
  ComplexSeries out;
  out.samples.reserve(n);
  for (std::size_t t = 0; t < n; ++t) out.samples.push_back(dist.points[rng.categorical(dist.weights)]);
  return out;
}

ComplexSeries apply_filter(const FiniteFilter& filter, const ComplexSeries& x) {
  if (filter.coeffs.empty()) throw Error(ErrorCode::InvalidArgument, "filter is empty");
  const long len = static_cast<long>(filter.coeffs.size());
  const long count = static_cast<long>(x.size()) - len + 1;
  if (count < 1) throw Error(ErrorCode::EmptyOverlap, "series shorter than filter");

  // out_t = sum_i c_i x_{t - origin - i}; the first covered t is x.origin + origin + len - 1.
  ComplexSeries out;
  out.origin = x.origin + filter.origin + len - 1;
  out.samples.resize(static_cast<std::size_t>(count));
  for (long s = 0; s < count; ++s) {
    cplx acc = 0.0;
    for (long i = 0; i < len; ++i) {
      acc += filter.coeffs[static_cast<std::size_t>(i)] * x.samples[static_cast<std::size_t>(s + len - 1 - i)];
    }
    out.samples[static_cast<std::size_t>(s)] = acc;
  }
  return out;
}

ComplexSeries solve_inverse_recursion(std::span<const double> theta, const ComplexSeries& x) {
  if (theta.empty() || theta.front() == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "inverse recursion needs theta_0 != 0");
  }
  ComplexSeries y;
  y.origin = x.origin;
  y.samples.resize(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    cplx acc = x.samples[t];
    for (std::size_t k = 1; k < theta.size() && k <= t; ++k) acc -= theta[k] * y.samples[t - k];
    y.samples[t] = acc / theta[0];
  }
  return y;
}

ComplexSeries add_noise(const ComplexSeries& y, double sigma0, std::uint64_t seed) {
  if (!(sigma0 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma0 must be nonnegative");
  ComplexSeries out = y;
  if (sigma0 == 0.0) return out;
  Rng rng(seed);
  const double scale = sigma0 * std::sqrt(0.5);
  for (cplx& v : out.samples) {
    const double re = rng.normal();
    const double im = rng.normal();
    v += scale * cplx(re, im);
  }
  return out;
}

ComplexSeries simulate_model(const ModelConfig& cfg) {
  cfg.validate();
  const std::uint64_t signal_seed = derive_seed(cfg.seed, 0);
  const std::uint64_t noise_seed = derive_seed(cfg.seed, 1);

  ComplexSeries clean;
  if (cfg.channel == ChannelKind::Direct) {
    const long len = static_cast<long>(cfg.filter.coeffs.size());
    ComplexSeries x = simulate_signal(cfg.dist, cfg.n + cfg.filter.coeffs.size() - 1, signal_seed);
    x.origin = 1 - (cfg.filter.origin + len - 1);
    clean = apply_filter(cfg.filter, x);
  } else {
    ComplexSeries x = simulate_signal(cfg.dist, cfg.n + cfg.burn_in, signal_seed);
    ComplexSeries y = solve_inverse_recursion(cfg.filter.coeffs, x);
    clean.samples.assign(y.samples.begin() + static_cast<long>(cfg.burn_in), y.samples.end());
  }
  clean.origin = 1;
  return add_noise(clean, cfg.sigma0, noise_seed);
}

void write_series_csv(std::ostream& out, const ComplexSeries& series) {
  out << "t,re,im\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << series.origin + static_cast<long>(i) << ',' << series.samples[i].real() << ','
        << series.samples[i].imag() << '\n';
  }
}

ComplexSeries read_series_csv(std::istream& in) {
  ComplexSeries series;
  std::string line;
  bool first_row = true;
  long expected = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.find_first_of("tT") == 0) continue;  // header
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    long t = 0;
    double re = 0.0;
    double im = 0.0;
    if (!(fields >> t >> re >> im)) {
      throw Error(ErrorCode::Io, "malformed series row at line " + std::to_string(line_no));
    }
    if (first_row) {
      series.origin = t;
      expected = t;
      first_row = false;
    }
    if (t != expected) throw Error(ErrorCode::Io, "series time index is not contiguous at line " + std::to_string(line_no));
    ++expected;
    series.samples.emplace_back(re, im);
  }
  series.validate();
  return series;
}

}  // namespace bdeconv
