#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "kgz/block.hpp"
#include "kgz/coefficient.hpp"
#include "kgz/nonlinearity.hpp"
#include "kgz/state.hpp"

namespace kgz {

enum class Scheme { strang, rk4_monolithic };

struct SchemeConfig {
  double dt = 1e-3;
  Scheme scheme = Scheme::strang;
  bool dealias = true;
};

struct Physics {
  double eta = 1.0;
  Nonlinearity f = Nonlinearity::zero();
  CoefficientFamily family = CoefficientFamily::sinusoidal(2.0);
  double eps = 0.0;

  double a(double t) const { return family.eval(eps, t); }
  Physics with_zero_f() const {
    Physics p = *this;
    p.f = Nonlinearity::zero();
    return p;
  }
};

struct Trajectory {
  double tau = 0.0;
  std::vector<double> times;
  std::vector<State> states;
  SchemeConfig cfg;
  // metadata for reports
  double eta = 0.0;
  double eps = 0.0;
  std::string f_name;
  std::string family_name;
};

/// Scaling-and-squaring matrix exponential, Pade degree 13.
Eigen::Matrix4d mat_exp_pade13(const Eigen::Matrix4d& m);

/// Time stepper for W_t + A(t) W = F(W).
///
/// strang: half-step nonlinear kick, exact per-mode linear flow with the
/// coefficient frozen at the step midpoint, half-step kick. The per-(mode,dt)
/// exponentials are cached and refreshed whenever |a(t_mid) - a_cached|
/// exceeds 1e-12, so states advanced in lockstep share one refresh per step.
///
/// rk4_monolithic: classical four-stage update of the full semidiscrete
/// system, coefficient evaluated at stage times.
class Propagator {
 public:
  Propagator(std::shared_ptr<const Domain> dom, SchemeConfig cfg, Physics physics);

  /// One step of size h starting at time t.
  void step(State& w, double t, double h);
  void step_cloud(std::vector<State>& states, double t, double h);

  const SchemeConfig& config() const { return cfg_; }
  const Physics& physics() const { return physics_; }

 private:
  void strang_step(State& w, double t, double h);
  void rk4_step(State& w, double t, double h);
  State rhs(const State& w, double t) const;
  void linear_flow(State& w, double a, double h);
  void refresh_exponentials(double a, double h);
  void check_finite(const State& w, double t) const;

  std::shared_ptr<const Domain> dom_;
  SchemeConfig cfg_;
  Physics physics_;
  std::vector<Eigen::Matrix4d> exps_;
  double a_cached_ = 0.0;
  double h_cached_ = 0.0;
  bool cache_valid_ = false;
};

/// Number of full steps and the trailing partial step covering [tau, t].
/// The last sample lands exactly at t.
struct StepPlan {
  long full_steps;
  double remainder;
};
StepPlan plan_steps(double tau, double t, double dt);

/// Evolution process S(t, tau) applied to one initial state; samples every
/// sample_every-th step (the initial and final states are always included).
Trajectory propagate(const State& w0, double tau, double t, const SchemeConfig& cfg,
                     const Physics& physics, long sample_every = 1);

/// End state only.
State evolve(const State& w0, double tau, double t, const SchemeConfig& cfg,
             const Physics& physics);

/// Linear process L(t, tau): same scheme with f forced to zero.
State propagate_linear(const State& w0, double tau, double t, const SchemeConfig& cfg,
                       const Physics& physics);

/// Advances all states through the same time grid in lockstep (shared
/// exponential cache). Honors KGZ_THREADS by chunking states over workers.
void evolve_cloud(std::vector<State>& states, double tau, double t, const SchemeConfig& cfg,
                  const Physics& physics);

/// One convenience step (the spec-level `step` operation).
State step(const State& w, double t, double dt, const SchemeConfig& cfg, const Physics& physics);

/// Worker count for cloud propagation: hardware concurrency clamped to 8,
/// capped by the KGZ_THREADS environment variable and by the job count.
int worker_count(std::size_t jobs);

}  // namespace kgz
