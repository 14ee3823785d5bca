#include "kgz/evolution.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace kgz {

Eigen::Matrix4d mat_exp_pade13(const Eigen::Matrix4d& m) {
  // Higham's scaling-and-squaring, degree-13 Pade approximant
  static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                             1187353796428800.0,  129060195264000.0,   10559470521600.0,
                             670442572800.0,      33522128640.0,       1323241920.0,
                             40840800.0,          960960.0,            16380.0,
                             182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;
  const double norm = m.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
  int squarings = 0;
  Eigen::Matrix4d a = m;
  if (norm > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    a *= std::pow(2.0, -squarings);
  }
  const Eigen::Matrix4d i = Eigen::Matrix4d::Identity();
  const Eigen::Matrix4d a2 = a * a;
  const Eigen::Matrix4d a4 = a2 * a2;
  const Eigen::Matrix4d a6 = a4 * a2;
  const Eigen::Matrix4d u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
           b[1] * i);
  const Eigen::Matrix4d v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * i;
  Eigen::Matrix4d r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  return r;
}

Propagator::Propagator(std::shared_ptr<const Domain> dom, SchemeConfig cfg, Physics physics)
    : dom_(std::move(dom)), cfg_(cfg), physics_(std::move(physics)) {
  if (!(cfg_.dt > 0.0)) throw std::invalid_argument("SchemeConfig: dt must be positive");
  exps_.resize(static_cast<std::size_t>(dom_->num_modes()));
}

void Propagator::refresh_exponentials(double a, double h) {
  if (cache_valid_ && h == h_cached_ && std::abs(a - a_cached_) <= 1e-12) return;
  const Eigen::ArrayXd& lam = dom_->eigenvalues();
  for (Eigen::Index k = 0; k < dom_->num_modes(); ++k)
    exps_[static_cast<std::size_t>(k)] = mat_exp_pade13(-h * mode_block(lam[k], physics_.eta, a));
  a_cached_ = a;
  h_cached_ = h;
  cache_valid_ = true;
}

void Propagator::linear_flow(State& w, double a, double h) {
  refresh_exponentials(a, h);
  const Eigen::Index n = dom_->num_modes();
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Vector4d x(w.u.coeffs[k], w.ut.coeffs[k], w.v.coeffs[k], w.vt.coeffs[k]);
    x = exps_[static_cast<std::size_t>(k)] * x;
    w.u.coeffs[k] = x[0];
    w.ut.coeffs[k] = x[1];
    w.v.coeffs[k] = x[2];
    w.vt.coeffs[k] = x[3];
  }
}

void Propagator::strang_step(State& w, double t, double h) {
  const bool kick = !physics_.f.is_zero();
  if (kick) w.ut.coeffs += (0.5 * h) * nemitskii(physics_.f, w.u, cfg_.dealias).coeffs;
  linear_flow(w, physics_.a(t + 0.5 * h), h);
  if (kick) w.ut.coeffs += (0.5 * h) * nemitskii(physics_.f, w.u, cfg_.dealias).coeffs;
}

State Propagator::rhs(const State& w, double t) const {
  const Eigen::ArrayXd& lam = dom_->eigenvalues();
  const Eigen::ArrayXd& slam = dom_->sqrt_eigenvalues();
  const double a = physics_.a(t);
  const double eta = physics_.eta;
  State d(dom_);
  d.u.coeffs = w.ut.coeffs;
  d.ut.coeffs = -(lam + 1.0) * w.u.coeffs - eta * slam * w.ut.coeffs - a * slam * w.vt.coeffs;
  if (!physics_.f.is_zero())
    d.ut.coeffs += nemitskii(physics_.f, w.u, cfg_.dealias).coeffs;
  d.v.coeffs = w.vt.coeffs;
  d.vt.coeffs = a * slam * w.ut.coeffs - lam * w.v.coeffs - eta * slam * w.vt.coeffs;
  return d;
}

void Propagator::rk4_step(State& w, double t, double h) {
  State k1 = rhs(w, t);
  State k2 = rhs(w + 0.5 * h * k1, t + 0.5 * h);
  State k3 = rhs(w + 0.5 * h * k2, t + 0.5 * h);
  State k4 = rhs(w + h * k3, t + h);
  k2 += k3;
  k1 += k4;
  k1 += 2.0 * std::move(k2);
  w += (h / 6.0) * std::move(k1);
}

void Propagator::check_finite(const State& w, double t) const {
  if (w.all_finite()) return;
  for (Eigen::Index k = 0; k < dom_->num_modes(); ++k) {
    if (!std::isfinite(w.u.coeffs[k]) || !std::isfinite(w.ut.coeffs[k]) ||
        !std::isfinite(w.v.coeffs[k]) || !std::isfinite(w.vt.coeffs[k])) {
      auto mi = dom_->multi_index(k);
      std::string idx;
      for (int c : mi) idx += (idx.empty() ? "" : ",") + std::to_string(c);
      throw std::runtime_error("non-finite value at t=" + std::to_string(t) + ", mode (" + idx +
                               ")");
    }
  }
}

void Propagator::step(State& w, double t, double h) {
  if (!(h > 0.0)) return;
  if (cfg_.scheme == Scheme::strang)
    strang_step(w, t, h);
  else
    rk4_step(w, t, h);
  check_finite(w, t + h);
}

void Propagator::step_cloud(std::vector<State>& states, double t, double h) {
  for (State& w : states) step(w, t, h);
}

StepPlan plan_steps(double tau, double t, double dt) {
  if (t < tau) throw std::invalid_argument("propagate: t must be >= tau");
  const double span = t - tau;
  long full = static_cast<long>(std::floor(span / dt + 1e-9));
  double remainder = span - full * dt;
  if (remainder <= 1e-12 * dt) remainder = 0.0;
  return {full, remainder};
}

Trajectory propagate(const State& w0, double tau, double t, const SchemeConfig& cfg,
                     const Physics& physics, long sample_every) {
  if (sample_every < 1) throw std::invalid_argument("propagate: sample_every must be >= 1");
  Propagator prop(w0.domain(), cfg, physics);
  const StepPlan plan = plan_steps(tau, t, cfg.dt);

  Trajectory traj;
  traj.tau = tau;
  traj.cfg = cfg;
  traj.eta = physics.eta;
  traj.eps = physics.eps;
  traj.f_name = physics.f.name();
  traj.family_name = physics.family.name();
  traj.times.push_back(tau);
  traj.states.push_back(w0);

  State w = w0;
  for (long i = 0; i < plan.full_steps; ++i) {
    const double ti = tau + static_cast<double>(i) * cfg.dt;
    prop.step(w, ti, cfg.dt);
    const bool is_last = (i + 1 == plan.full_steps) && plan.remainder == 0.0;
    if ((i + 1) % sample_every == 0 || is_last) {
      const double tnext = is_last ? t : tau + static_cast<double>(i + 1) * cfg.dt;
      if (tnext > traj.times.back()) {
        traj.times.push_back(tnext);
        traj.states.push_back(w);
      }
    }
  }
  if (plan.remainder > 0.0) {
    prop.step(w, tau + static_cast<double>(plan.full_steps) * cfg.dt, plan.remainder);
    traj.times.push_back(t);
    traj.states.push_back(w);
  }
  return traj;
}

State evolve(const State& w0, double tau, double t, const SchemeConfig& cfg,
             const Physics& physics) {
  Propagator prop(w0.domain(), cfg, physics);
  const StepPlan plan = plan_steps(tau, t, cfg.dt);
  State w = w0;
  for (long i = 0; i < plan.full_steps; ++i)
    prop.step(w, tau + static_cast<double>(i) * cfg.dt, cfg.dt);
  if (plan.remainder > 0.0)
    prop.step(w, tau + static_cast<double>(plan.full_steps) * cfg.dt, plan.remainder);
  return w;
}

State propagate_linear(const State& w0, double tau, double t, const SchemeConfig& cfg,
                       const Physics& physics) {
  return evolve(w0, tau, t, cfg, physics.with_zero_f());
}

int worker_count(std::size_t jobs) {
  unsigned hw = std::thread::hardware_concurrency();
  int workers = static_cast<int>(hw == 0 ? 1 : std::min(hw, 8u));
  if (const char* env = std::getenv("KGZ_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) workers = std::min(workers, cap);
  }
  return static_cast<int>(std::min<std::size_t>(workers, jobs == 0 ? 1 : jobs));
}

void evolve_cloud(std::vector<State>& states, double tau, double t, const SchemeConfig& cfg,
                  const Physics& physics) {
  if (states.empty()) return;
  const StepPlan plan = plan_steps(tau, t, cfg.dt);
  auto run_chunk = [&](std::size_t lo, std::size_t hi) {
    Propagator prop(states[lo].domain(), cfg, physics);
    for (long i = 0; i < plan.full_steps; ++i) {
      const double ti = tau + static_cast<double>(i) * cfg.dt;
      for (std::size_t j = lo; j < hi; ++j) prop.step(states[j], ti, cfg.dt);
    }
    if (plan.remainder > 0.0) {
      const double ti = tau + static_cast<double>(plan.full_steps) * cfg.dt;
      for (std::size_t j = lo; j < hi; ++j) prop.step(states[j], ti, plan.remainder);
    }
  };
  const int workers = worker_count(states.size());
  if (workers <= 1) {
    run_chunk(0, states.size());
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (states.size() + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    std::size_t lo = static_cast<std::size_t>(w) * chunk;
    std::size_t hi = std::min(states.size(), lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(run_chunk, lo, hi);
  }
  for (auto& th : pool) th.join();
}

State step(const State& w, double t, double dt, const SchemeConfig& cfg, const Physics& physics) {
  Propagator prop(w.domain(), cfg, physics);
  State out = w;
  prop.step(out, t, dt);
  return out;
}

}  // namespace kgz
