#include "kgz/attractor.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "kgz/rng.hpp"

namespace kgz {

Cloud sample_ball(std::shared_ptr<const Domain> dom, double r, int M, double s,
                  std::uint64_t seed) {
  if (M < 1) throw std::invalid_argument("sample_ball: need M >= 1");
  if (r < 0.0) throw std::invalid_argument("sample_ball: radius must be nonnegative");
  SplitMix64 rng(seed);
  const Eigen::ArrayXd decay = dom->eigenvalues().pow(-s);
  Cloud cloud;
  cloud.states.reserve(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) {
    State w(dom);
    auto fill = [&](Eigen::ArrayXd& c) {
      for (Eigen::Index k = 0; k < c.size(); ++k) c[k] = decay[k] * rng.symmetric();
    };
    fill(w.u.coeffs);
    fill(w.ut.coeffs);
    fill(w.v.coeffs);
    fill(w.vt.coeffs);
    const double norm = y0_norm(w);
    const double target = r * rng.uniform();
    w *= norm > 0.0 ? target / norm : 0.0;
    cloud.states.push_back(std::move(w));
  }
  return cloud;
}

double hausdorff_semidistance(const Cloud& a, const Cloud& b, CloudMetric metric) {
  if (a.states.empty() || b.states.empty())
    throw std::invalid_argument("hausdorff_semidistance: empty cloud");
  auto dist = metric == CloudMetric::y0 ? y0_dist : reg_dist;
  double worst = 0.0;
  for (const State& x : a.states) {
    double best = std::numeric_limits<double>::infinity();
    for (const State& y : b.states) best = std::min(best, dist(x, y));
    worst = std::max(worst, best);
  }
  return worst;
}

Cloud pullback_image(const Cloud& b, double t_star, double window, const SchemeConfig& cfg,
                     const Physics& physics) {
  if (window < 0.0) throw std::invalid_argument("pullback_image: window must be nonnegative");
  Cloud image = b;
  image.label_t = t_star;
  image.window = window;
  image.eps = physics.eps;
  if (window > 0.0) evolve_cloud(image.states, t_star - window, t_star, cfg, physics);
  return image;
}

PullbackReport estimate_attractor(std::shared_ptr<const Domain> dom,
                                  const PullbackSchedule& schedule, const SchemeConfig& cfg,
                                  const Physics& physics) {
  if (schedule.windows.empty())
    throw std::invalid_argument("estimate_attractor: schedule has no windows");
  for (std::size_t i = 1; i < schedule.windows.size(); ++i)
    if (!(schedule.windows[i] > schedule.windows[i - 1]))
      throw std::invalid_argument("estimate_attractor: windows must be strictly increasing");
  if (!(schedule.radius > 0.0))
    throw std::invalid_argument("estimate_attractor: ball radius must be positive");
  if (schedule.samples < 2)
    throw std::invalid_argument("estimate_attractor: need at least 2 samples");

  const Cloud ball =
      sample_ball(dom, schedule.radius, schedule.samples, schedule.decay, schedule.seed);
  const double tol = schedule.tolerance();

  PullbackReport report;
  report.schedule = schedule;
  for (std::size_t k = 0; k < schedule.windows.size(); ++k) {
    Cloud image = pullback_image(ball, schedule.t_star, schedule.windows[k], cfg, physics);
    WindowStats stats;
    stats.window = schedule.windows[k];
    double sum = 0.0;
    for (const State& w : image.states) {
      const double n = y0_norm(w);
      stats.max_y0 = std::max(stats.max_y0, n);
      sum += n;
      stats.max_reg = std::max(stats.max_reg, std::sqrt(reg_norm_sq(w)));
    }
    stats.mean_y0 = sum / image.states.size();
    if (k > 0) {
      stats.dh_forward = hausdorff_semidistance(image, report.images[k - 1]);
      stats.dh_backward = hausdorff_semidistance(report.images[k - 1], image);
      if (!report.converged && stats.dh_forward < tol && stats.dh_backward < tol) {
        report.converged = true;
        report.converged_at = static_cast<int>(k);
      }
    }
    report.per_window.push_back(stats);
    report.images.push_back(std::move(image));
  }
  report.attractor = report.images.back();
  return report;
}

RegularityReport regularity_audit(const Cloud& cloud) {
  if (cloud.states.empty()) throw std::invalid_argument("regularity_audit: empty cloud");
  RegularityReport rep;
  double sum = 0.0;
  for (const State& w : cloud.states) {
    const double n = std::sqrt(reg_norm_sq(w));
    rep.reg_norms.push_back(n);
    rep.max_reg_norm = std::max(rep.max_reg_norm, n);
    sum += n;
  }
  rep.mean_reg_norm = sum / cloud.states.size();
  return rep;
}

namespace {

// sup over states and shared sample times of the Y0 distance between the
// eps-run and the reference run
double sup_trajectory_difference(const Cloud& b, double tau, double t_star,
                                 const SchemeConfig& cfg, const Physics& physics_eps,
                                 const Physics& physics_ref, long sample_every) {
  double sup = 0.0;
  for (const State& w0 : b.states) {
    Trajectory a = propagate(w0, tau, t_star, cfg, physics_eps, sample_every);
    Trajectory r = propagate(w0, tau, t_star, cfg, physics_ref, sample_every);
    for (std::size_t i = 0; i < a.states.size(); ++i)
      sup = std::max(sup, y0_dist(a.states[i], r.states[i]));
  }
  return sup;
}

}  // namespace

SemicontinuityReport semicontinuity_sweep(const std::vector<double>& eps_list, double t_star,
                                          double tau, const Cloud& b, const SchemeConfig& cfg,
                                          const Physics& base_physics,
                                          const PullbackSchedule& schedule,
                                          long sample_every) {
  if (b.states.empty()) throw std::invalid_argument("semicontinuity_sweep: empty sample cloud");
  if (!(t_star > tau)) throw std::invalid_argument("semicontinuity_sweep: need t_star > tau");

  Physics ref = base_physics;
  ref.eps = 0.0;
  auto dom = b.states.front().domain();
  const PullbackReport attr_ref = estimate_attractor(dom, schedule, cfg, ref);

  SemicontinuityReport report;
  report.tau = tau;
  report.t_star = t_star;

  double ratio_min = std::numeric_limits<double>::infinity();
  double ratio_max = 0.0;
  double c_bar = -std::numeric_limits<double>::infinity();
  for (double eps : eps_list) {
    Physics phys = base_physics;
    phys.eps = eps;
    SemicontinuityEntry entry;
    entry.eps = eps;
    entry.sup_deviation = base_physics.family.sup_deviation(eps);
    entry.sup_trajectory_diff =
        sup_trajectory_difference(b, tau, t_star, cfg, phys, ref, sample_every);
    PullbackSchedule sched_eps = schedule;
    const PullbackReport attr_eps = estimate_attractor(dom, sched_eps, cfg, phys);
    entry.dh_attractors =
        hausdorff_semidistance(attr_eps.attractor, attr_ref.attractor);
    if (entry.sup_deviation > 0.0) {
      entry.ratio = entry.sup_trajectory_diff / entry.sup_deviation;
      ratio_min = std::min(ratio_min, entry.ratio);
      ratio_max = std::max(ratio_max, entry.ratio);
      if (entry.sup_trajectory_diff > 0.0)
        c_bar = std::max(c_bar, std::log(entry.ratio) / (t_star - tau));
    }
    report.entries.push_back(entry);
  }
  report.c_bar = std::isfinite(c_bar) ? c_bar : 0.0;
  report.ratio_spread = (ratio_max > 0.0 && std::isfinite(ratio_min) && ratio_min > 0.0)
                            ? ratio_max / ratio_min
                            : 1.0;
  return report;
}

}  // namespace kgz
