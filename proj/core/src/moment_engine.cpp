#include "bdeconv/moment_engine.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "bdeconv/error.hpp"
#include "bdeconv/model_sim.hpp"

namespace bdeconv {

namespace {

// Neumaier summation, applied to the real and imaginary parts separately.
struct CompensatedSum {
  double re = 0.0, im = 0.0, re_c = 0.0, im_c = 0.0;

  static void add(double& sum, double& comp, double x) noexcept {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  void add(cplx v) noexcept {
    add(re, re_c, v.real());
    add(im, im_c, v.imag());
  }
  cplx value() const noexcept { return {re + re_c, im + im_c}; }
};

}  // namespace

MomentVector::MomentVector(int p_, std::vector<cplx> entries_) : p(p_), entries(std::move(entries_)) {
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "alphabet size p must be at least 1");
  if (entries.size() != static_cast<std::size_t>((p + 1) * (p + 1))) {
    throw Error(ErrorCode::InvalidArgument, "moment vector must have (p+1)^2 entries");
  }
}

MomentVector MomentVector::zeros(int p) {
  return MomentVector(p, std::vector<cplx>(static_cast<std::size_t>((p + 1) * (p + 1))));
}

void FilterSpec::validate() const {
  if (half_width < 0) throw Error(ErrorCode::InvalidArgument, "half width must be nonnegative");
  if (xi.size() != dimension()) {
    throw Error(ErrorCode::InvalidArgument, "filter parameter dimension must be 2*half_width+1");
  }
  bool any = false;
  for (double c : xi) {
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "filter coefficient is not finite");
    any = any || c != 0.0;
  }
  if (!any) throw Error(ErrorCode::ZeroFilter, "all filter coefficients are zero");
}

FilterSpec FilterSpec::fir(std::vector<double> coeffs) {
  if (coeffs.size() % 2 == 0) {
    throw Error(ErrorCode::InvalidArgument, "FIR window must have odd length 2K+1");
  }
  FilterSpec spec;
  spec.half_width = static_cast<int>(coeffs.size() / 2);
  spec.xi = std::move(coeffs);
  return spec;
}

FilterSpec FilterSpec::identity(int half_width) {
  FilterSpec spec;
  spec.half_width = half_width;
  spec.xi.assign(spec.dimension(), 0.0);
  spec.xi[static_cast<std::size_t>(half_width)] = 1.0;
  return spec;
}

ComplexSeries z_series(const FilterSpec& spec, const ComplexSeries& y) {
  spec.validate();
  if (y.size() < spec.dimension()) {
    throw Error(ErrorCode::SeriesTooShort, "series needs at least 2*half_width+1 samples");
  }
  return apply_filter(FiniteFilter{spec.xi, -static_cast<long>(spec.half_width)}, y);
}

MomentVector empirical_moments(const ComplexSeries& z, int p) {
  if (z.samples.empty()) throw Error(ErrorCode::InvalidArgument, "empty series");
  MomentVector out = MomentVector::zeros(p);
  const int dim = p + 1;
  // Only k >= j is accumulated; the rest follows from conjugate symmetry.
  std::vector<CompensatedSum> sums(static_cast<std::size_t>(dim * dim));
  std::vector<cplx> powers(static_cast<std::size_t>(dim));
  for (const cplx& zt : z.samples) {
    powers[0] = 1.0;
    for (int k = 1; k < dim; ++k) powers[k] = powers[k - 1] * zt;
    for (int j = 0; j < dim; ++j) {
      const cplx cj = std::conj(powers[j]);
      for (int k = j; k < dim; ++k) sums[moment_index(p, j, k)].add(powers[k] * cj);
    }
  }
  const double inv_n = 1.0 / static_cast<double>(z.size());
  for (int j = 0; j < dim; ++j) {
    for (int k = j; k < dim; ++k) {
      const cplx v = sums[moment_index(p, j, k)].value() * inv_n;
      out(j, k) = v;
      out(k, j) = std::conj(v);
    }
    out(j, j) = out(j, j).real();
  }
  return out;
}

Eigen::MatrixXcd moment_contributions(const ComplexSeries& z, int p) {
  const int dim = p + 1;
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(z.size()), dim * dim);
  std::vector<cplx> powers(static_cast<std::size_t>(dim));
  for (std::size_t t = 0; t < z.size(); ++t) {
    powers[0] = 1.0;
    for (int k = 1; k < dim; ++k) powers[k] = powers[k - 1] * z.samples[t];
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < dim; ++k) {
        out(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(moment_index(p, j, k))) =
            powers[k] * std::conj(powers[j]);
      }
    }
  }
  return out;
}

MomentVector discrete_moments(std::span<const cplx> points, std::span<const double> weights, int p) {
  if (points.size() != weights.size()) {
    throw Error(ErrorCode::InvalidArgument, "points and weights differ in length");
  }
  MomentVector out = MomentVector::zeros(p);
  std::vector<cplx> powers(static_cast<std::size_t>(p + 1));
  for (std::size_t i = 0; i < points.size(); ++i) {
    powers[0] = 1.0;
    for (int k = 1; k <= p; ++k) powers[k] = powers[k - 1] * points[i];
    for (int j = 0; j <= p; ++j) {
      for (int k = 0; k <= p; ++k) out(j, k) += weights[i] * powers[k] * std::conj(powers[j]);
    }
  }
  return out;
}

double filter_l2_norm(const FilterSpec& spec) {
  double sum = 0.0;
  for (double c : spec.coefficients()) sum += c * c;
  return std::sqrt(sum);
}

void write_moments_csv(std::ostream& out, const MomentVector& moments) {
  out << "j,k,re,im\n" << std::setprecision(17);
  for (int j = 0; j <= moments.p; ++j) {
    for (int k = 0; k <= moments.p; ++k) {
      out << j << ',' << k << ',' << moments(j, k).real() << ',' << moments(j, k).imag() << '\n';
    }
  }
}

}  // namespace bdeconv
