#include "bdeconv/pseudo_moment.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "bdeconv/error.hpp"

namespace bdeconv {

namespace {

using Table = std::array<std::array<std::uint64_t, kMaxAlphabet + 1>, kMaxAlphabet + 1>;

constexpr Table make_binomials() {
  Table t{};
  for (int n = 0; n <= kMaxAlphabet; ++n) {
    t[n][0] = 1;
    for (int k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
  }
  return t;
}

constexpr std::array<std::uint64_t, kMaxAlphabet + 1> make_factorials() {
  std::array<std::uint64_t, kMaxAlphabet + 1> f{};
  f[0] = 1;
  for (int n = 1; n <= kMaxAlphabet; ++n) f[n] = f[n - 1] * static_cast<std::uint64_t>(n);
  return f;
}

constexpr Table kBinomials = make_binomials();
constexpr std::array<std::uint64_t, kMaxAlphabet + 1> kFactorials = make_factorials();

static_assert(kBinomials[12][6] == 924);
static_assert(kFactorials[12] == 479001600);

void check_p(int p) {
  if (p < 1 || p > kMaxAlphabet) throw Error(ErrorCode::InvalidArgument, "alphabet size p must be in [1, 12]");
}

// Coefficient of the shift-by-r term in row (j, k): C(k,r) C(j,r) r! beta^{2r}.
double shift_weight(int j, int k, int r, double beta2_pow) {
  return static_cast<double>(kBinomials[k][r]) * static_cast<double>(kBinomials[j][r]) *
         static_cast<double>(kFactorials[r]) * beta2_pow;
}

Eigen::MatrixXd build_transform(double beta, int p, bool inverse) {
  check_p(p);
  if (!(beta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be nonnegative");
  const int dim = p + 1;
  const double beta2 = beta * beta;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim * dim, dim * dim);
  for (int j = 0; j <= p; ++j) {
    for (int k = 0; k <= p; ++k) {
      double pow_r = 1.0;
      for (int r = 0; r <= std::min(j, k); ++r) {
        const double sign = (inverse && (r % 2 == 1)) ? -1.0 : 1.0;
        a(static_cast<Eigen::Index>(moment_index(p, j, k)), static_cast<Eigen::Index>(moment_index(p, j - r, k - r))) =
            sign * shift_weight(j, k, r, pow_r);
        pow_r *= beta2;
      }
    }
  }
  return a;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (n < 0 || n > kMaxAlphabet || k < 0 || k > n) throw Error(ErrorCode::InvalidArgument, "binomial out of range");
  return kBinomials[n][k];
}

std::uint64_t factorial(int n) {
  if (n < 0 || n > kMaxAlphabet) throw Error(ErrorCode::InvalidArgument, "factorial out of range");
  return kFactorials[n];
}

// Row (j,k), column (m,l): C(k,l) C(j,m) gamma_{j-m,k-l} beta^{k-l+j-m} with
// gamma_{r,s} = r! 1{r=s}, so only the diagonal shift m = j-r, l = k-r survives.
Eigen::MatrixXd build_A(double beta, int p) { return build_transform(beta, p, false); }

// Columns (m, k-j+m) for (j-k) v 0 <= m <= j, i.e. the same shifts with sign (-1)^r.
Eigen::MatrixXd build_A_inverse(double beta, int p) { return build_transform(beta, p, true); }

MomentVector pseudo_moments(const MomentVector& d_n, double sigma, double norm) {
  check_p(d_n.p);
  const int p = d_n.p;
  const double beta2 = (sigma * norm) * (sigma * norm);
  MomentVector out = MomentVector::zeros(p);
  for (int j = 0; j <= p; ++j) {
    for (int k = 0; k <= p; ++k) {
      cplx acc = 0.0;
      double pow_r = 1.0;
      for (int r = 0; r <= std::min(j, k); ++r) {
        const double w = shift_weight(j, k, r, pow_r);
        acc += (r % 2 == 0 ? w : -w) * d_n(j - r, k - r);
        pow_r *= beta2;
      }
      out(j, k) = acc;
    }
  }
  return out;
}

PseudoMomentMatrix hankel_matrix(const MomentVector& d_tilde) {
  const int dim = d_tilde.p + 1;
  Eigen::MatrixXcd raw(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) raw(k, j) = d_tilde(j, k);
  }
  PseudoMomentMatrix out;
  const double scale = std::max(1.0, raw.cwiseAbs().maxCoeff());
  out.raw_asymmetry = (raw - raw.adjoint()).cwiseAbs().maxCoeff() / scale;
  out.entries = 0.5 * (raw + raw.adjoint());
  return out;
}

std::complex<double> determinant(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidArgument, "determinant of a non-square matrix");
  if (m.rows() == 0) return 1.0;
  return m.partialPivLu().determinant();
}

CriterionValue criterion_detail(double sigma, double norm, const MomentVector& d_n) {
  const PseudoMomentMatrix dt = hankel_matrix(pseudo_moments(d_n, sigma, norm));
  const std::complex<double> det = determinant(dt.entries);
  CriterionValue out;
  out.value = det.real();
  out.relative_imag = std::abs(det.imag()) / std::max(std::abs(det), std::numeric_limits<double>::min());
  out.raw_asymmetry = dt.raw_asymmetry;
  return out;
}

double criterion_J(double sigma, const FilterSpec& spec, const MomentVector& d_n) {
  return criterion_detail(sigma, filter_l2_norm(spec), d_n).value;
}

double g_transform(double j_value) noexcept {
  if (j_value == 0.0) return 0.0;
  return std::copysign(std::log1p(std::abs(j_value)), j_value);
}

std::vector<GCurvePoint> g_curve(const FilterSpec& spec, const MomentVector& d_n, std::span<const double> sigma_grid) {
  if (sigma_grid.empty()) throw Error(ErrorCode::InvalidArgument, "sigma grid is empty");
  const double norm = filter_l2_norm(spec);
  std::vector<GCurvePoint> curve;
  curve.reserve(sigma_grid.size());
  for (double sigma : sigma_grid) {
    const double j = criterion_detail(sigma, norm, d_n).value;
    curve.push_back({sigma, j, g_transform(j)});
  }
  return curve;
}

void write_g_curve_csv(std::ostream& out, std::span<const GCurvePoint> curve) {
  auto put = [&out](double v, char sep) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, res.ptr - buf).put(sep);
  };
  out << "sigma,J,G\n";
  for (const GCurvePoint& pt : curve) {
    put(pt.sigma, ',');
    put(pt.j, ',');
    put(pt.g, '\n');
  }
}

}  // namespace bdeconv
