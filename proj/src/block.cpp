#include "kgz/block.hpp"

#include <cmath>
#include <stdexcept>

namespace kgz {

Eigen::Matrix4d mode_block(double lambda, double eta, double a) {
  if (!(lambda > 0.0 && eta > 0.0 && a > 0.0))
    throw std::invalid_argument("mode_block: lambda, eta, a must be positive");
  const double s = std::sqrt(lambda);
  Eigen::Matrix4d m;
  m << 0.0, -1.0, 0.0, 0.0,
       lambda + 1.0, eta * s, 0.0, a * s,
       0.0, 0.0, 0.0, -1.0,
       0.0, -a * s, lambda, eta * s;
  return m;
}

Eigen::Matrix4d mode_block_inverse(double lambda, double eta, double a) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("mode_block_inverse: lambda must be positive");
  const double s = std::sqrt(lambda);
  const double p = lambda + 1.0;
  Eigen::Matrix4d m;
  m << eta * s / p, 1.0 / p, a * s / p, 0.0,
       -1.0, 0.0, 0.0, 0.0,
       -a / s, 0.0, eta / s, 1.0 / lambda,
       0.0, 0.0, -1.0, 0.0;
  return m;
}

Eigen::Vector4d mode_char_poly(double lambda, double eta, double a) {
  const double s = std::sqrt(lambda);
  const double b = eta * s;
  Eigen::Vector4d c;  // (c3, c2, c1, c0)
  c << 2.0 * b,
       b * b + 2.0 * lambda + 1.0 + a * a * lambda,
       (2.0 * lambda + 1.0) * b,
       lambda * (lambda + 1.0);
  return c;
}

Eigen::Vector4cd mode_spectrum(double lambda, double eta, double a) {
  if (!(lambda > 0.0 && eta > 0.0))
    throw std::invalid_argument("mode_spectrum: lambda and eta must be positive");
  const Eigen::Vector4d c = mode_char_poly(lambda, eta, a);
  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  companion(1, 0) = companion(2, 1) = companion(3, 2) = 1.0;
  companion(0, 0) = -c[0];
  companion(0, 1) = -c[1];
  companion(0, 2) = -c[2];
  companion(0, 3) = -c[3];
  Eigen::EigenSolver<Eigen::Matrix4d> solver(companion, false);
  Eigen::Vector4cd roots = solver.eigenvalues();
  std::sort(roots.data(), roots.data() + 4, [](std::complex<double> x, std::complex<double> y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return roots;
}

double resolvent_norm(double beta, double lambda, double eta, double a) {
  const double s = std::sqrt(lambda);
  Eigen::Matrix4cd c = mode_block(lambda, eta, a).cast<std::complex<double>>();
  c.diagonal().array() += std::complex<double>(0.0, beta);
  Eigen::FullPivLU<Eigen::Matrix4cd> lu(c);
  if (!lu.isInvertible())
    throw std::domain_error("resolvent_norm: i*beta + M is numerically singular");
  Eigen::Vector4d d(s, 1.0, s, 1.0);
  Eigen::Matrix4cd weighted =
      d.asDiagonal() * lu.inverse() * d.cwiseInverse().asDiagonal();
  return weighted.jacobiSvd().singularValues()(0);
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (points < 2 || !(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("log_grid: bad range");
  std::vector<double> grid(points);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < points; ++i)
    grid[i] = std::exp(llo + (lhi - llo) * i / (points - 1));
  return grid;
}

AnalyticityScan analyticity_scan(const Domain& domain, double eta, double a,
                                 const std::vector<double>& beta_grid) {
  AnalyticityScan scan;
  scan.betas = beta_grid;
  scan.profile.assign(beta_grid.size(), 0.0);
  // distinct eigenvalues only; multiplicity does not change the sup
  std::vector<double> lambdas(domain.eigenvalues().data(),
                              domain.eigenvalues().data() + domain.num_modes());
  std::sort(lambdas.begin(), lambdas.end());
  lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
  for (std::size_t bi = 0; bi < beta_grid.size(); ++bi) {
    const double beta = beta_grid[bi];
    double worst = 0.0, worst_lambda = 0.0;
    for (double lambda : lambdas) {
      double value = std::abs(beta) * resolvent_norm(beta, lambda, eta, a);
      if (value > worst) {
        worst = value;
        worst_lambda = lambda;
      }
    }
    scan.profile[bi] = worst;
    if (worst > scan.sup) {
      scan.sup = worst;
      scan.beta_at_sup = beta;
      scan.lambda_at_sup = worst_lambda;
    }
  }
  return scan;
}

double accretivity_form(const State& x, double eta, double a) {
  const Eigen::ArrayXd& lam = x.domain()->eigenvalues();
  const Eigen::ArrayXd& slam = x.domain()->sqrt_eigenvalues();
  const Eigen::ArrayXd& u = x.u.coeffs;
  const Eigen::ArrayXd& p = x.ut.coeffs;
  const Eigen::ArrayXd& v = x.v.coeffs;
  const Eigen::ArrayXd& q = x.vt.coeffs;
  // A x per mode, then the (lambda+1, 1, lambda, 1)-weighted pairing with x
  const Eigen::ArrayXd au = -p;
  const Eigen::ArrayXd ap = (lam + 1.0) * u + eta * slam * p + a * slam * q;
  const Eigen::ArrayXd av = -q;
  const Eigen::ArrayXd aq = -a * slam * p + lam * v + eta * slam * q;
  return ((lam + 1.0) * au * u + ap * p + lam * av * v + aq * q).sum();
}

double accretivity_residual(const State& x, double eta, double a) {
  const Eigen::ArrayXd& slam = x.domain()->sqrt_eigenvalues();
  const double damping =
      eta * (slam * (x.ut.coeffs.square() + x.vt.coeffs.square())).sum();
  return accretivity_form(x, eta, a) - damping;
}

}  // namespace kgz
