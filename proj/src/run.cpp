#include "kgz/run.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "kgz/block.hpp"
#include "kgz/rng.hpp"

namespace kgz {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::filesystem::path ensure_out_dir(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output dir '" + cfg.output_dir + "': " + ec.message());
  return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

bool wants(const RunConfig& cfg, const std::string& format) {
  for (const auto& f : cfg.output_formats)
    if (f == format) return true;
  return false;
}

std::string energy_csv(const std::vector<EnergySample>& rows) {
  std::string out = "t,E,Lmod,diss,y0_norm2,reg_norm2,residual\n";
  for (const auto& r : rows) {
    out += fmt17(r.t) + "," + fmt17(r.E) + "," + fmt17(r.Lmod) + "," + fmt17(r.diss) + "," +
           fmt17(r.y0_norm2) + "," + fmt17(r.reg_norm2) + "," + fmt17(r.residual) + "\n";
  }
  return out;
}

json config_echo(const RunConfig& cfg) {
  json j;
  j["serialized"] = serialize_config(cfg);
  return j;
}

State initial_state(const RunConfig& cfg, const std::shared_ptr<const Domain>& dom) {
  return sample_ball(dom, cfg.pullback_radius, 1, cfg.pullback_decay, cfg.pullback_seed)
      .states.front();
}

// ---- simulate ----

int cmd_simulate(const RunConfig& cfg) {
  auto dom = domain_from_config(cfg);
  const Physics physics = physics_from_config(cfg);
  const SchemeConfig scheme = scheme_from_config(cfg);
  const State w0 = initial_state(cfg, dom);

  Trajectory traj =
      propagate(w0, cfg.time_t0, cfg.time_t1, scheme, physics, cfg.time_sample_every);
  const auto [a0, a1] = physics.family.bounds();
  const double gamma = default_gamma(*dom, physics.eta, a1);
  const auto rows = energy_series(traj, physics.f, physics.eta, gamma, gamma);

  const auto dir = ensure_out_dir(cfg);
  if (wants(cfg, "csv")) write_text(dir / "simulate_energy.csv", energy_csv(rows));
  if (wants(cfg, "json")) {
    json j;
    j["config"] = config_echo(cfg);
    j["samples"] = rows.size();
    j["t_final"] = traj.times.back();
    j["E_initial"] = rows.front().E;
    j["E_final"] = rows.back().E;
    j["y0_norm2_final"] = rows.back().y0_norm2;
    j["gamma"] = gamma;
    write_json(dir / "simulate_summary.json", j);
  }
  return kExitOk;
}

// ---- operator-audit ----

int cmd_operator_audit(const RunConfig& cfg) {
  auto dom = domain_from_config(cfg);
  const Physics physics = physics_from_config(cfg);
  SplitMix64 rng(cfg.pullback_seed);
  const auto [a_lo, a_hi] = physics.family.bounds();

  json j;
  bool all_pass = true;

  {  // determinant and closed-form inverse against a generic numeric inverse
    double worst_det = 0.0, worst_inv = 0.0;
    double det_lambda = 0, det_eta = 0, det_a = 0;
    for (int i = 0; i < 10000; ++i) {
      const double lambda = dom->lambda1() + rng.uniform() * 4000.0;
      const double eta = 0.1 + rng.uniform() * 2.9;
      const double a = 0.5 + rng.uniform() * 3.5;
      const Eigen::Matrix4d m = mode_block(lambda, eta, a);
      const double target = lambda * (lambda + 1.0);
      const double rel = std::abs(m.determinant() - target) / target;
      if (rel > worst_det) {
        worst_det = rel;
        det_lambda = lambda;
        det_eta = eta;
        det_a = a;
      }
      const Eigen::Matrix4d closed = mode_block_inverse(lambda, eta, a);
      const Eigen::Matrix4d numeric = m.inverse();
      worst_inv = std::max(worst_inv, (closed - numeric).cwiseAbs().maxCoeff() /
                                          numeric.cwiseAbs().maxCoeff());
    }
    const bool det_ok = worst_det <= 1e-12;
    const bool inv_ok = worst_inv <= 1e-11;
    j["determinant"] = {{"max_rel_residual", worst_det},
                        {"pass", det_ok},
                        {"worst", {{"lambda", det_lambda}, {"eta", det_eta}, {"a", det_a}}}};
    j["inverse"] = {{"max_rel_deviation", worst_inv}, {"pass", inv_ok}};
    all_pass = all_pass && det_ok && inv_ok;
  }

  {  // accretivity identity on random states and t draws
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const State x =
          sample_ball(dom, 1.0 + rng.uniform(), 1, 1.0, rng.next()).states.front();
      const double t = -10.0 + 20.0 * rng.uniform();
      const double a = physics.family.eval(physics.eps, t);
      const double n2 = y0_norm_sq(x);
      if (n2 == 0.0) continue;
      worst = std::max(worst, std::abs(accretivity_residual(x, physics.eta, a)) / n2);
    }
    const bool ok = worst <= 1e-12;
    j["accretivity"] = {{"max_residual_rel", worst}, {"pass", ok}};
    all_pass = all_pass && ok;
  }

  {  // spectral gap over the truncated mode set
    double max_re = -std::numeric_limits<double>::infinity();
    double at_lambda = 0, at_eta = 0, at_a = 0;
    for (double eta : {0.5, 1.0, 2.0}) {
      for (double a : {a_lo, a_hi}) {
        for (Eigen::Index k = 0; k < dom->num_modes(); ++k) {
          const auto roots = mode_spectrum(dom->eigenvalues()[k], eta, a);
          for (int r = 0; r < 4; ++r) {
            if (roots[r].real() > max_re) {
              max_re = roots[r].real();
              at_lambda = dom->eigenvalues()[k];
              at_eta = eta;
              at_a = a;
            }
          }
        }
      }
    }
    const bool ok = max_re < -1e-10;
    j["spectral_gap"] = {{"max_real_part", max_re},
                         {"pass", ok},
                         {"worst", {{"lambda", at_lambda}, {"eta", at_eta}, {"a", at_a}}}};
    all_pass = all_pass && ok;
  }

  {  // analyticity scan
    const double a_scan = physics.family.eval(physics.eps, 0.0);
    const auto betas = log_grid(1e-2, 1e4, 40);
    const AnalyticityScan scan = analyticity_scan(*dom, physics.eta, a_scan, betas);
    // flattening measured at exactly beta = 1e3 and 1e4
    auto profile_at = [&](double beta) {
      double worst = 0.0;
      for (Eigen::Index k = 0; k < dom->num_modes(); ++k)
        worst = std::max(worst,
                         beta * resolvent_norm(beta, dom->eigenvalues()[k], physics.eta, a_scan));
      return worst;
    };
    const double p_mid = profile_at(1e3);
    const double p_hi = profile_at(1e4);
    const double flattening = std::abs(p_hi - p_mid) / p_mid;
    const double spot =
        1e6 * resolvent_norm(1e6, dom->lambda1(), physics.eta, a_scan);
    const bool ok = std::isfinite(scan.sup) && flattening <= 0.10 && std::abs(spot - 1.0) <= 1e-3;
    j["analyticity"] = {{"sup", scan.sup},
                        {"beta_at_sup", scan.beta_at_sup},
                        {"lambda_at_sup", scan.lambda_at_sup},
                        {"profile_1e3", p_mid},
                        {"profile_1e4", p_hi},
                        {"flattening", flattening},
                        {"spot_beta1e6", spot},
                        {"pass", ok}};
    all_pass = all_pass && ok;
  }

  j["pass"] = all_pass;
  j["config"] = config_echo(cfg);
  const auto dir = ensure_out_dir(cfg);
  write_json(dir / "operator_audit.json", j);
  return all_pass ? kExitOk : kExitCheckFailed;
}

// ---- energy-audit ----

int cmd_energy_audit(const RunConfig& cfg) {
  auto dom = domain_from_config(cfg);
  const Physics physics = physics_from_config(cfg);
  const SchemeConfig scheme = scheme_from_config(cfg);
  const State w0 = initial_state(cfg, dom);

  // residual needs uniform sampling at the step size
  Trajectory traj = propagate(w0, cfg.time_t0, cfg.time_t1, scheme, physics, 1);
  const auto [a0, a1] = physics.family.bounds();
  const double gamma = default_gamma(*dom, physics.eta, a1);
  auto rows = energy_series(traj, physics.f, physics.eta, gamma, gamma);

  double e_max = 0.0;
  for (const auto& r : rows) e_max = std::max(e_max, std::abs(r.E));
  const double tol = 1e-5 * std::max(1.0, e_max);
  double worst = 0.0, worst_t = cfg.time_t0;
  for (const auto& r : rows) {
    if (std::abs(r.residual) > worst) {
      worst = std::abs(r.residual);
      worst_t = r.t;
    }
  }
  const bool ok = worst <= tol;

  const auto dir = ensure_out_dir(cfg);
  if (wants(cfg, "csv")) write_text(dir / "energy_audit.csv", energy_csv(rows));
  json j;
  j["config"] = config_echo(cfg);
  j["tolerance"] = tol;
  j["max_residual"] = worst;
  j["worst_t"] = worst_t;
  j["pass"] = ok;
  write_json(dir / "energy_audit.json", j);
  return ok ? kExitOk : kExitCheckFailed;
}

// ---- linear-decay ----

int cmd_linear_decay(const RunConfig& cfg) {
  auto dom = domain_from_config(cfg);
  Physics physics = physics_from_config(cfg).with_zero_f();
  const SchemeConfig scheme = scheme_from_config(cfg);

  Cloud ensemble = sample_ball(dom, cfg.pullback_radius, cfg.pullback_samples,
                               cfg.pullback_decay, cfg.pullback_seed);
  const double burn = cfg.time_t0 + 0.15 * (cfg.time_t1 - cfg.time_t0);

  json fits = json::array();
  bool all_ok = true;
  double max_rate = -std::numeric_limits<double>::infinity();
  std::vector<EnergySample> first_rows;
  for (std::size_t i = 0; i < ensemble.states.size(); ++i) {
    Trajectory traj = propagate(ensemble.states[i], cfg.time_t0, cfg.time_t1, scheme, physics,
                                cfg.time_sample_every);
    std::vector<double> y(traj.states.size());
    for (std::size_t s = 0; s < traj.states.size(); ++s) y[s] = y0_norm_sq(traj.states[s]);
    const FitResult fit = fit_exponential(traj.times, y, burn, cfg.time_t1);
    fits.push_back({{"rate", fit.rate}, {"r2", fit.r2}});
    all_ok = all_ok && fit.r2 > 0.99 && fit.rate < 0.0;
    max_rate = std::max(max_rate, fit.rate);
    if (i == 0) first_rows = energy_series(traj, physics.f, physics.eta, 0.0, 0.0);
  }
  const double zeta0 = -max_rate;

  const auto dir = ensure_out_dir(cfg);
  if (wants(cfg, "csv")) write_text(dir / "linear_decay.csv", energy_csv(first_rows));
  json j;
  j["config"] = config_echo(cfg);
  j["fits"] = fits;
  j["zeta0"] = zeta0;
  j["fit_window"] = {{"t_begin", burn}, {"t_end", cfg.time_t1}};
  j["pass"] = all_ok && zeta0 > 0.0;
  write_json(dir / "linear_decay.json", j);
  return (all_ok && zeta0 > 0.0) ? kExitOk : kExitCheckFailed;
}

// ---- pullback ----

json window_stats_json(const PullbackReport& report) {
  json arr = json::array();
  for (const auto& w : report.per_window) {
    json e = {{"window", w.window},
              {"max_y0", w.max_y0},
              {"mean_y0", w.mean_y0},
              {"max_reg", w.max_reg}};
    if (w.dh_forward >= 0.0) {
      e["dh_forward"] = w.dh_forward;
      e["dh_backward"] = w.dh_backward;
    }
    arr.push_back(e);
  }
  return arr;
}

int cmd_pullback(const RunConfig& cfg) {
  auto dom = domain_from_config(cfg);
  const Physics physics = physics_from_config(cfg);
  const SchemeConfig scheme = scheme_from_config(cfg);
  const PullbackSchedule schedule = schedule_from_config(cfg);

  const PullbackReport report = estimate_attractor(dom, schedule, scheme, physics);
  const RegularityReport reg = regularity_audit(report.attractor);

  const auto dir = ensure_out_dir(cfg);
  if (wants(cfg, "csv")) {
    std::string csv = "window,state_index,y0_norm2,reg_norm2\n";
    for (std::size_t k = 0; k < report.images.size(); ++k) {
      const Cloud& c = report.images[k];
      for (std::size_t i = 0; i < c.states.size(); ++i) {
        csv += fmt17(report.schedule.windows[k]) + "," + std::to_string(i) + "," +
               fmt17(y0_norm_sq(c.states[i])) + "," + fmt17(reg_norm_sq(c.states[i])) + "\n";
      }
    }
    write_text(dir / "pullback_norms.csv", csv);
  }
  json j;
  j["config"] = config_echo(cfg);
  j["tolerance"] = schedule.tolerance();
  j["windows"] = window_stats_json(report);
  j["converged"] = report.converged;
  j["converged_at_window"] =
      report.converged ? json(report.schedule.windows[report.converged_at]) : json(nullptr);
  j["attractor"] = {{"states", report.attractor.states.size()},
                    {"max_y0", report.per_window.back().max_y0},
                    {"max_reg_norm", reg.max_reg_norm},
                    {"mean_reg_norm", reg.mean_reg_norm}};
  write_json(dir / "pullback.json", j);
  return report.converged ? kExitOk : kExitCheckFailed;
}

// ---- semicontinuity ----

int cmd_semicontinuity(const RunConfig& cfg) {
  auto dom = domain_from_config(cfg);
  const Physics physics = physics_from_config(cfg);
  const SchemeConfig scheme = scheme_from_config(cfg);
  const PullbackSchedule schedule = schedule_from_config(cfg);

  const Cloud b = sample_ball(dom, cfg.pullback_radius, cfg.pullback_samples,
                              cfg.pullback_decay, cfg.pullback_seed);
  const SemicontinuityReport report =
      semicontinuity_sweep(cfg.sweep_epsilons, cfg.time_t1, cfg.time_t0, b, scheme, physics,
                           schedule, cfg.time_sample_every);

  bool ok = true;
  json entries = json::array();
  double prev_dh = std::numeric_limits<double>::infinity();
  const double tol = schedule.tolerance();
  for (const auto& e : report.entries) {
    entries.push_back({{"eps", e.eps},
                       {"sup_deviation", e.sup_deviation},
                       {"sup_trajectory_diff", e.sup_trajectory_diff},
                       {"dh_attractors", e.dh_attractors},
                       {"ratio", e.ratio}});
    if (e.eps == 0.0 && e.sup_trajectory_diff != 0.0) ok = false;
  }
  // monotone decrease of the attractor distance along decreasing eps, up to tol
  std::vector<SemicontinuityEntry> sorted = report.entries;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& x, const auto& y) { return x.eps > y.eps; });
  for (const auto& e : sorted) {
    if (e.dh_attractors > prev_dh + tol) ok = false;
    prev_dh = e.dh_attractors;
  }
  if (report.ratio_spread > 2.0) ok = false;

  const auto dir = ensure_out_dir(cfg);
  json j;
  j["config"] = config_echo(cfg);
  j["tau"] = report.tau;
  j["t_star"] = report.t_star;
  j["entries"] = entries;
  j["c_bar"] = report.c_bar;
  j["ratio_spread"] = report.ratio_spread;
  j["pass"] = ok;
  write_json(dir / "semicontinuity.json", j);
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

std::shared_ptr<const Domain> domain_from_config(const RunConfig& cfg) {
  return make_domain(cfg.domain_n, cfg.domain_modes, cfg.domain_length);
}

Physics physics_from_config(const RunConfig& cfg) {
  Physics p;
  p.eta = cfg.physics_eta;
  p.f = Nonlinearity::from_name(cfg.physics_f, cfg.physics_rho);
  p.family = CoefficientFamily::from_name(cfg.coefficient_family, cfg.coefficient_a_star,
                                          cfg.coefficient_amplitude, cfg.coefficient_table);
  p.eps = cfg.coefficient_epsilon;
  return p;
}

SchemeConfig scheme_from_config(const RunConfig& cfg) {
  SchemeConfig s;
  s.dt = cfg.time_dt;
  s.scheme = cfg.time_scheme == "strang" ? Scheme::strang : Scheme::rk4_monolithic;
  s.dealias = cfg.dealias_effective();
  return s;
}

PullbackSchedule schedule_from_config(const RunConfig& cfg) {
  PullbackSchedule s;
  s.t_star = cfg.pullback_t_star;
  s.windows = cfg.pullback_windows;
  s.samples = cfg.pullback_samples;
  s.radius = cfg.pullback_radius;
  s.decay = cfg.pullback_decay;
  s.seed = cfg.pullback_seed;
  s.tol_attr = cfg.pullback_tol_attr;
  return s;
}

int run_subcommand(const std::string& name, const RunConfig& cfg) {
  if (name == "simulate") return cmd_simulate(cfg);
  if (name == "operator-audit") return cmd_operator_audit(cfg);
  if (name == "energy-audit") return cmd_energy_audit(cfg);
  if (name == "linear-decay") return cmd_linear_decay(cfg);
  if (name == "pullback") return cmd_pullback(cfg);
  if (name == "semicontinuity") return cmd_semicontinuity(cfg);
  throw std::invalid_argument("unknown subcommand: " + name);
}

}  // namespace kgz
