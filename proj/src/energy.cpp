#include "kgz/energy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kgz {

double energy(const State& w, const Nonlinearity& f, int oversample) {
  double quad = 0.0;
  if (!f.is_zero())
    quad = integrate_composed(w.u, [&f](double s) { return f.primitive(s); }, oversample);
  return 0.5 * norm_alpha_sq(w.u, 0.5) + 0.5 * norm_alpha_sq(w.u, 0.0) +
         0.5 * norm_alpha_sq(w.ut, 0.0) + 0.5 * norm_alpha_sq(w.v, 0.5) +
         0.5 * norm_alpha_sq(w.vt, 0.0) - quad;
}

double modified_energy(const State& w, const Nonlinearity& f, double gamma1, double gamma2,
                       int oversample) {
  if (gamma1 < 0.0 || gamma2 < 0.0)
    throw std::invalid_argument("modified_energy: gammas must be nonnegative");
  return energy(w, f, oversample) + gamma1 * inner_X(w.u, w.ut) + gamma2 * inner_X(w.v, w.vt);
}

double dissipation_rate(const State& w, double eta) {
  const Eigen::ArrayXd& slam = w.domain()->sqrt_eigenvalues();
  return -eta * (slam * (w.ut.coeffs.square() + w.vt.coeffs.square())).sum();
}

double default_gamma(const Domain& domain, double eta, double a1) {
  const double lam1 = domain.lambda1();
  const double inv_c2 = std::sqrt(lam1);  // 1/c^2 with c = lambda_1^{-1/4}
  const double proof_bound =
      0.25 * eta * inv_c2 * std::min(1.0 / (a1 * a1), 1.0 / (1.0 + 0.5 * eta * eta));
  return 0.9 * std::min({0.5, 0.5 * lam1, proof_bound});
}

std::vector<double> audit_identity(const Trajectory& traj, const Nonlinearity& f, double eta,
                                   int oversample) {
  const std::size_t n = traj.times.size();
  if (n < 3) throw std::invalid_argument("audit_identity: need at least 3 samples");
  const double h = traj.times[1] - traj.times[0];
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs((traj.times[i] - traj.times[i - 1]) - h) > 1e-9 * std::max(1.0, h))
      throw std::invalid_argument("audit_identity: samples are not uniformly spaced");

  std::vector<double> E(n);
  for (std::size_t i = 0; i < n; ++i) E[i] = energy(traj.states[i], f, oversample);

  std::vector<double> r(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i)
    r[i] = (E[i + 1] - E[i - 1]) / (2.0 * h) - dissipation_rate(traj.states[i], eta);
  return r;
}

std::vector<EnergySample> energy_series(const Trajectory& traj, const Nonlinearity& f,
                                        double eta, double gamma1, double gamma2,
                                        int oversample) {
  const std::size_t n = traj.times.size();
  std::vector<EnergySample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const State& w = traj.states[i];
    out[i].t = traj.times[i];
    out[i].E = energy(w, f, oversample);
    out[i].Lmod = modified_energy(w, f, gamma1, gamma2, oversample);
    out[i].diss = dissipation_rate(w, eta);
    out[i].y0_norm2 = y0_norm_sq(w);
    out[i].reg_norm2 = reg_norm_sq(w);
    out[i].residual = 0.0;
  }
  if (n >= 3) {
    // residuals on the longest uniformly spaced prefix; a trailing partial
    // step only drops the last interior point
    const double h = traj.times[1] - traj.times[0];
    std::size_t m = n;
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs((traj.times[i] - traj.times[i - 1]) - h) > 1e-9 * std::max(1.0, h)) {
        m = i;
        break;
      }
    }
    for (std::size_t i = 1; i + 1 < m; ++i)
      out[i].residual = (out[i + 1].E - out[i - 1].E) / (2.0 * h) - out[i].diss;
  }
  return out;
}

FitResult fit_exponential(const std::vector<double>& t, const std::vector<double>& y,
                          double t_begin, double t_end) {
  if (t.size() != y.size()) throw std::invalid_argument("fit_exponential: size mismatch");
  double st = 0, sl = 0, stt = 0, stl = 0, sll = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_begin || t[i] > t_end) continue;
    if (!(y[i] > 0.0))
      throw std::invalid_argument("fit_exponential: nonpositive value inside the fit window");
    const double l = std::log(y[i]);
    st += t[i];
    sl += l;
    stt += t[i] * t[i];
    stl += t[i] * l;
    sll += l * l;
    ++m;
  }
  if (m < 2) throw std::invalid_argument("fit_exponential: fewer than 2 samples in window");
  const double denom = m * stt - st * st;
  FitResult fit;
  fit.t_begin = t_begin;
  fit.t_end = t_end;
  if (denom == 0.0) {
    fit.rate = 0.0;
    fit.offset = sl / m;
    fit.r2 = 1.0;
    return fit;
  }
  fit.rate = (m * stl - st * sl) / denom;
  fit.offset = (sl - fit.rate * st) / m;
  const double ss_tot = sll - sl * sl / m;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_begin || t[i] > t_end) continue;
    const double e = std::log(y[i]) - (fit.offset + fit.rate * t[i]);
    ss_res += e * e;
  }
  fit.r2 = ss_tot <= 0.0 ? 1.0 : std::max(0.0, 1.0 - ss_res / ss_tot);
  return fit;
}

FitResult fit_exponential(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.empty()) throw std::invalid_argument("fit_exponential: empty series");
  return fit_exponential(t, y, t.front(), t.back());
}

DominationFit fit_domination(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 5)
    throw std::invalid_argument("fit_domination: need at least 5 samples");
  DominationFit fit;
  const std::size_t n = t.size();
  const std::size_t tail_begin = n - std::max<std::size_t>(1, n / 5);
  fit.K2 = 0.0;
  for (std::size_t i = tail_begin; i < n; ++i) fit.K2 = std::max(fit.K2, y[i]);

  // transient rate from the segment clearly above the plateau
  std::vector<double> ts, ys;
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] > 2.0 * fit.K2 && y[i] - fit.K2 > 0.0) {
      ts.push_back(t[i]);
      ys.push_back(y[i] - fit.K2);
    }
  }
  const double tau = t.front();
  if (ts.size() >= 2) {
    FitResult line = fit_exponential(ts, ys);
    fit.sigma = std::max(0.0, -line.rate);
  } else {
    fit.sigma = 0.0;
  }

  // raise K1 to the pointwise envelope so domination holds by construction
  fit.K1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double excess = y[i] - fit.K2;
    if (excess > 0.0) fit.K1 = std::max(fit.K1, excess * std::exp(fit.sigma * (t[i] - tau)));
  }
  fit.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double slack = fit.K1 * std::exp(-fit.sigma * (t[i] - tau)) + fit.K2 - y[i];
    fit.min_slack = std::min(fit.min_slack, slack);
  }
  return fit;
}

}  // namespace kgz
