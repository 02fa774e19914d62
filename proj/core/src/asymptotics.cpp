#include "bdeconv/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "bdeconv/error.hpp"

namespace bdeconv {

Eigen::VectorXcd det_gradient(const Eigen::MatrixXcd& d) {
  const Eigen::Index n = d.rows();
  if (n != d.cols() || n == 0) throw Error(ErrorCode::InvalidArgument, "det_gradient needs a non-empty square matrix");
  Eigen::VectorXcd grad(n * n);
  if (n == 1) {
    grad(0) = 1.0;
    return grad;
  }
  Eigen::MatrixXcd minor(n - 1, n - 1);
  for (Eigen::Index row = 0; row < n; ++row) {
    for (Eigen::Index col = 0; col < n; ++col) {
      for (Eigen::Index i = 0, mi = 0; i < n; ++i) {
        if (i == row) continue;
        for (Eigen::Index j = 0, mj = 0; j < n; ++j) {
          if (j == col) continue;
          minor(mi, mj++) = d(i, j);
        }
        ++mi;
      }
      const double sign = ((row + col) % 2 == 0) ? 1.0 : -1.0;
      // Flat layout: column index is j, row index is k, offset j*n + k.
      grad(col * n + row) = sign * determinant(minor);
    }
  }
  return grad;
}

FdSteps FdSteps::defaults(double sigma, std::span<const double> xi) {
  FdSteps steps;
  steps.sigma = 1e-4 * std::max(1.0, std::abs(sigma));
  steps.xi.reserve(xi.size());
  for (double v : xi) steps.xi.push_back(1e-4 * std::max(1.0, std::abs(v)));
  return steps;
}

CriterionDerivatives criterion_derivatives(const CriterionFunction& J, double sigma, std::span<const double> xi,
                                           const FdSteps& steps) {
  const auto d = static_cast<Eigen::Index>(xi.size());
  if (steps.xi.size() != xi.size()) throw Error(ErrorCode::InvalidArgument, "one xi step per coordinate required");
  const double hs = steps.sigma;
  std::vector<double> point(xi.begin(), xi.end());

  auto at = [&](double s, Eigen::Index i, double di, Eigen::Index j, double dj) {
    std::vector<double> x(point);
    if (i >= 0) x[static_cast<std::size_t>(i)] += di;
    if (j >= 0) x[static_cast<std::size_t>(j)] += dj;
    return J(s, x);
  };

  CriterionDerivatives out;
  const double j0 = J(sigma, point);
  out.d_sigma = (at(sigma + hs, -1, 0, -1, 0) - at(sigma - hs, -1, 0, -1, 0)) / (2.0 * hs);
  out.negative_alpha = !(out.d_sigma < 0.0);
  out.d_xi.resize(d);
  out.d_xi_xi.resize(d, d);
  out.d_sigma_xi.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double hi = steps.xi[static_cast<std::size_t>(i)];
    const double plus = at(sigma, i, hi, -1, 0);
    const double minus = at(sigma, i, -hi, -1, 0);
    out.d_xi(i) = (plus - minus) / (2.0 * hi);
    out.d_xi_xi(i, i) = (plus - 2.0 * j0 + minus) / (hi * hi);
    out.d_sigma_xi(i) = (at(sigma + hs, i, hi, -1, 0) - at(sigma + hs, i, -hi, -1, 0) -
                         at(sigma - hs, i, hi, -1, 0) + at(sigma - hs, i, -hi, -1, 0)) /
                        (4.0 * hs * hi);
    for (Eigen::Index j = 0; j < i; ++j) {
      const double hj = steps.xi[static_cast<std::size_t>(j)];
      const double v = (at(sigma, i, hi, j, hj) - at(sigma, i, hi, j, -hj) - at(sigma, i, -hi, j, hj) +
                        at(sigma, i, -hi, j, -hj)) /
                       (4.0 * hi * hj);
      out.d_xi_xi(i, j) = v;
      out.d_xi_xi(j, i) = v;
    }
  }
  return out;
}

Eigen::MatrixXd hac_gamma1(const Eigen::MatrixXd& contributions, int bandwidth) {
  const Eigen::Index T = contributions.rows();
  if (bandwidth < 0) throw Error(ErrorCode::InvalidArgument, "bandwidth must be nonnegative");
  if (T <= 2 * static_cast<Eigen::Index>(bandwidth)) {
    throw Error(ErrorCode::InvalidArgument, "HAC needs more than 2*bandwidth observations");
  }
  const Eigen::RowVectorXd mean = contributions.colwise().mean();
  const Eigen::MatrixXd centered = contributions.rowwise() - mean;
  const double inv_t = 1.0 / static_cast<double>(T);
  Eigen::MatrixXd gamma = centered.transpose() * centered * inv_t;
  for (int lag = 1; lag <= bandwidth; ++lag) {
    const double w = 1.0 - static_cast<double>(lag) / static_cast<double>(bandwidth + 1);
    const Eigen::MatrixXd cross =
        centered.bottomRows(T - lag).transpose() * centered.topRows(T - lag) * inv_t;
    gamma += w * (cross + cross.transpose());
  }
  return gamma;
}

ComplexLongRunCovariance hac_gamma1(const Eigen::MatrixXcd& contributions, int bandwidth) {
  const Eigen::Index m = contributions.cols();
  Eigen::MatrixXd interleaved(contributions.rows(), 2 * m);
  for (Eigen::Index c = 0; c < m; ++c) {
    interleaved.col(2 * c) = contributions.col(c).real();
    interleaved.col(2 * c + 1) = contributions.col(c).imag();
  }
  ComplexLongRunCovariance out;
  out.real = hac_gamma1(interleaved, bandwidth);
  out.hermitian.resize(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      const double rr = out.real(2 * a, 2 * b);
      const double ii = out.real(2 * a + 1, 2 * b + 1);
      const double ir = out.real(2 * a + 1, 2 * b);
      const double ri = out.real(2 * a, 2 * b + 1);
      out.hermitian(a, b) = cplx(rr + ii, ir - ri);
    }
  }
  return out;
}

int default_bandwidth(std::size_t n) {
  return static_cast<int>(std::floor(std::cbrt(static_cast<double>(n)) + 1e-9));
}

CovarianceReport plug_in_covariance(const EstimationResult& estimate, const ComplexSeries& y,
                                    const CovarianceOptions& options) {
  const int p = estimate.p;
  const auto d = static_cast<Eigen::Index>(estimate.theta_unit.size());
  if (d < 1 || p < 1) throw Error(ErrorCode::InvalidArgument, "estimate is empty");
  const CriterionEvaluator evaluator(y, estimate.half_width, p);
  const double sigma = estimate.sigma_hat;

  Eigen::VectorXd theta = Eigen::Map<const Eigen::VectorXd>(estimate.theta_unit.data(), d);
  theta.normalize();
  // Orthonormal basis of the tangent space of the unit sphere at theta.
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(theta).householderQ();
  const Eigen::MatrixXd tangent = q.rightCols(d - 1);

  auto chart = [&](std::span<const double> eta) {
    Eigen::VectorXd x = theta;
    for (Eigen::Index i = 0; i < d - 1; ++i) x += tangent.col(i) * eta[static_cast<std::size_t>(i)];
    x.normalize();
    return std::vector<double>(x.data(), x.data() + d);
  };
  const CriterionFunction J = [&](double s, std::span<const double> eta) {
    return evaluator.criterion(s, chart(eta));
  };

  CovarianceReport report;
  report.fd_step_sigma = options.fd_step_sigma.value_or(1e-4 * std::max(1.0, sigma));
  report.fd_step_xi = options.fd_step_xi.value_or(1e-4);
  FdSteps steps;
  steps.sigma = report.fd_step_sigma;
  steps.xi.assign(static_cast<std::size_t>(d - 1), report.fd_step_xi);
  const std::vector<double> origin(static_cast<std::size_t>(d - 1), 0.0);
  const CriterionDerivatives der = criterion_derivatives(J, sigma, origin, steps);
  report.alpha_hat = -der.d_sigma;
  report.negative_alpha = der.negative_alpha;

  // N in chart coordinates, sigma last.
  Eigen::VectorXd n_chart(d);
  if (d > 1) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(der.d_xi_xi);
    const auto& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > 0.0) || sv(0) / sv(sv.size() - 1) > 1e12) {
      throw Error(ErrorCode::SingularHessian, "Hessian of J in xi is numerically singular");
    }
    n_chart.head(d - 1) = der.d_xi_xi.ldlt().solve(der.d_sigma_xi);
  }
  n_chart(d - 1) = 1.0;
  n_chart /= report.alpha_hat;

  // Variance of sqrt(n) J_n through the pseudo-moments.
  const ComplexSeries z = z_series(FilterSpec{FilterFamily::FirDirect, estimate.half_width, chart(origin)}, y);
  report.effective_n = z.size();
  report.bandwidth = options.bandwidth.value_or(default_bandwidth(z.size()));
  const ComplexLongRunCovariance gamma1 = hac_gamma1(moment_contributions(z, p), report.bandwidth);
  report.gamma1_hat = gamma1.hermitian;

  const Eigen::MatrixXd a_inv = build_A_inverse(sigma, p);  // filter has unit norm
  const Eigen::Index m = a_inv.rows();
  Eigen::MatrixXd a_inv2 = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) {
      a_inv2(2 * r, 2 * c) = a_inv(r, c);
      a_inv2(2 * r + 1, 2 * c + 1) = a_inv(r, c);
    }
  }
  const Eigen::MatrixXd moment_cov = a_inv2 * gamma1.real * a_inv2.transpose();

  const MomentVector d_tilde = pseudo_moments(evaluator.moments(chart(origin)), sigma, 1.0);
  const Eigen::VectorXcd cof = det_gradient(hankel_matrix(d_tilde).entries);
  Eigen::VectorXd grad(2 * m);
  for (Eigen::Index e = 0; e < m; ++e) {
    grad(2 * e) = cof(e).real();
    grad(2 * e + 1) = -cof(e).imag();
  }
  report.j_variance = grad.dot(moment_cov * grad);

  const Eigen::MatrixXd cov_chart = n_chart * n_chart.transpose() * (report.j_variance / static_cast<double>(z.size()));

  // Chart -> unit-norm filter coordinates -> delay-aligned theta_hat coordinates.
  Eigen::MatrixXd lift = Eigen::MatrixXd::Zero(d + 1, d);
  lift.topLeftCorner(d, d - 1) = tangent;
  lift(d, d - 1) = 1.0;
  Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(d + 1, d + 1);
  for (Eigen::Index i = 0; i + estimate.delay_shift < d; ++i) shift(i, i + estimate.delay_shift) = 1.0;
  shift(d, d) = 1.0;
  const Eigen::MatrixXd to_theta = shift * lift;
  report.cov = to_theta * cov_chart * to_theta.transpose();
  report.cov = 0.5 * (report.cov + report.cov.transpose());
  report.std_errors.resize(static_cast<std::size_t>(d + 1));
  for (Eigen::Index i = 0; i <= d; ++i) report.std_errors[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, report.cov(i, i)));
  return report;
}

}  // namespace bdeconv
