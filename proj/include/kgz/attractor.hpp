#pragma once

#include <cstdint>
#include <vector>

#include "kgz/evolution.hpp"
#include "kgz/state.hpp"

namespace kgz {

/// Finite set of states approximating a pullback image or attractor section.
struct Cloud {
  std::vector<State> states;
  double label_t = 0.0;
  double window = 0.0;
  double eps = 0.0;
};

enum class CloudMetric { y0, regular };

/// M states with mode-k coefficients ~ lambda_k^{-s} uniform(-1,1) on each of
/// the four components, each state rescaled so ||W||_{Y0} <= r. Deterministic
/// under seed.
Cloud sample_ball(std::shared_ptr<const Domain> dom, double r, int M, double s,
                  std::uint64_t seed);

/// sup_{a in A} inf_{b in B} ||a - b|| in the chosen metric (brute force).
double hausdorff_semidistance(const Cloud& a, const Cloud& b,
                              CloudMetric metric = CloudMetric::y0);

/// { S(t*, t* - window) W0 : W0 in B }.
Cloud pullback_image(const Cloud& b, double t_star, double window, const SchemeConfig& cfg,
                     const Physics& physics);

struct PullbackSchedule {
  double t_star = 0.0;
  std::vector<double> windows = {5.0, 10.0, 20.0, 40.0};
  int samples = 12;
  double radius = 1.0;
  double decay = 1.5;
  std::uint64_t seed = 1;
  double tol_attr = 0.0;  // 0 means the default 1e-6 * radius

  double tolerance() const { return tol_attr > 0.0 ? tol_attr : 1e-6 * radius; }
};

struct WindowStats {
  double window = 0.0;
  double max_y0 = 0.0;
  double mean_y0 = 0.0;
  double max_reg = 0.0;
  double dh_forward = -1.0;   // d_H(image_k, image_{k-1}); -1 for the first window
  double dh_backward = -1.0;  // d_H(image_{k-1}, image_k)
};

struct PullbackReport {
  PullbackSchedule schedule;
  std::vector<WindowStats> per_window;
  std::vector<Cloud> images;
  bool converged = false;
  int converged_at = -1;  // index of the first window pair satisfying the tolerance
  Cloud attractor;        // deepest image; the A(t*) approximant
};

/// Iterates pullback images over the schedule windows; converged when both
/// one-sided semidistances between consecutive images drop below tolerance.
/// Non-convergence is reported, not thrown.
PullbackReport estimate_attractor(std::shared_ptr<const Domain> dom,
                                  const PullbackSchedule& schedule, const SchemeConfig& cfg,
                                  const Physics& physics);

struct RegularityReport {
  double max_reg_norm = 0.0;
  double mean_reg_norm = 0.0;
  std::vector<double> reg_norms;
};

/// Norm audit in X^1 x X^{1/2} x X^1 x X^{1/2}.
RegularityReport regularity_audit(const Cloud& cloud);

struct SemicontinuityEntry {
  double eps = 0.0;
  double sup_deviation = 0.0;     // ||a_eps - a_0||_inf
  double sup_trajectory_diff = 0.0;
  double dh_attractors = 0.0;     // d_H(A_eps(t*), A_0(t*))
  double ratio = 0.0;             // sup_trajectory_diff / sup_deviation
};

struct SemicontinuityReport {
  double tau = 0.0;
  double t_star = 0.0;
  std::vector<SemicontinuityEntry> entries;
  double c_bar = 0.0;        // fitted constant in diff <= e^{c_bar (t*-tau)} dev
  double ratio_spread = 1.0; // max ratio / min ratio over entries with dev > 0
};

/// For each eps: sup over W0 in B and sampled t of ||S_eps(t,tau)W0 -
/// S_0(t,tau)W0||_{Y0}, plus the semidistance between the estimated
/// attractors, reported against ||a_eps - a_0||_inf.
SemicontinuityReport semicontinuity_sweep(const std::vector<double>& eps_list, double t_star,
                                          double tau, const Cloud& b, const SchemeConfig& cfg,
                                          const Physics& base_physics,
                                          const PullbackSchedule& schedule,
                                          long sample_every = 10);

}  // namespace kgz
