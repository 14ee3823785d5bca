#include <doctest.h>

#include <cmath>

#include "kgz/energy.hpp"
#include "support/benchmark.hpp"
#include "support/oracles.hpp"

using namespace kgz;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("energy of simple states") {
  auto dom = make_domain(1, 16);

  SUBCASE("zero state") {
    CHECK(energy(zero_state(dom), Nonlinearity::zero()) == 0.0);
  }
  SUBCASE("unit mode with f = 0: E = 1/2 + 1/2") {
    State w(dom);
    w.u = unit_mode(dom, {1});
    CHECK(energy(w, Nonlinearity::zero()) == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("unit mode with damped power rho=2 against a quadrature oracle") {
    // E = 1 + (1/3) int |u|^3 with u(x) = sqrt(2/pi) sin x
    State w(dom);
    w.u = unit_mode(dom, {1});
    const double c = std::sqrt(2.0 / kPi);
    const double oracle = 1.0 + (1.0 / 3.0) * test::simpson([&](double x) {
                            return std::pow(std::abs(c * std::sin(x)), 3.0);
                          }, 0.0, kPi, 65536);
    // analytic kernel: int_0^pi sin^3 = 4/3
    CHECK(oracle == doctest::Approx(1.0 + std::pow(c, 3.0) * 4.0 / 9.0).epsilon(1e-12));
    CHECK(energy(w, Nonlinearity::damped_power(2.0)) == doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("modified energy") {
  auto dom = make_domain(1, 16);
  State w = test::benchmark_state(test::benchmark_domain());
  auto f = Nonlinearity::damped_power(2.0);

  SUBCASE("gamma = 0 reduces to the energy") {
    CHECK(modified_energy(w, f, 0.0, 0.0) == energy(w, f));
  }
  SUBCASE("zero velocities make the cross terms vanish") {
    State q(dom);
    q.u = unit_mode(dom, {2}, 0.8);
    q.v = unit_mode(dom, {3}, -0.5);
    CHECK(modified_energy(q, f, 0.3, 0.4) == doctest::Approx(energy(q, f)).epsilon(1e-14));
  }
}

TEST_CASE("squeeze inequality on random states") {
  auto dom = test::benchmark_domain();
  const double lam1 = dom->lambda1();
  auto f = Nonlinearity::damped_power(2.0);
  const double gamma = default_gamma(*dom, 1.0, 3.0);
  REQUIRE(gamma < 0.5);
  REQUIRE(gamma < 0.5 * lam1);

  SplitMix64 rng(123);
  for (int trial = 0; trial < 1000; ++trial) {
    const State w = sample_ball(dom, 0.5 + 2.0 * rng.uniform(), 1, 1.0, rng.next()).states.front();
    const double n2 = y0_norm_sq(w);
    const double quad = integrate_composed(w.u, [&](double s) { return f.primitive(s); });
    const double mid = modified_energy(w, f, gamma, gamma) + quad;
    CHECK(mid - 0.25 * n2 >= -1e-12 * std::max(1.0, n2));
    CHECK(0.75 * (1.0 + 1.0 / lam1) * n2 - mid >= -1e-12 * std::max(1.0, n2));
  }
}

TEST_CASE("dissipation rate") {
  auto dom = make_domain(1, 16);

  SUBCASE("zero velocities") {
    State w(dom);
    w.u = unit_mode(dom, {4}, 2.0);
    CHECK(dissipation_rate(w, 1.0) == 0.0);
  }
  SUBCASE("unit velocity mode, eta = 1 gives -1") {
    State w(dom);
    w.ut = unit_mode(dom, {1});
    CHECK(dissipation_rate(w, 1.0) == doctest::Approx(-1.0).epsilon(1e-14));
  }
  SUBCASE("linear in eta") {
    State w = test::benchmark_state(test::benchmark_domain());
    CHECK(dissipation_rate(w, 2.0) == doctest::Approx(2.0 * dissipation_rate(w, 1.0)));
  }
}

TEST_CASE("energy identity audit on the nonlinear benchmark") {
  // N = 32 so that the interpolation aliasing of the pseudo-spectral kick
  // sits well below the O(dt^2) + O(h^2) residual being measured
  auto dom = make_domain(1, 32);
  Physics phys = test::benchmark_physics();
  State w0 = sample_ball(dom, 1.2, 1, 2.0, 7).states.front();

  auto max_residual = [&](double dt, const Physics& p) {
    SchemeConfig cfg;
    cfg.dt = dt;
    Trajectory traj = propagate(w0, 0.0, 1.0, cfg, p, 1);
    const auto r = audit_identity(traj, p.f, p.eta);
    double worst = 0.0;
    for (double x : r) worst = std::max(worst, std::abs(x));
    return worst;
  };

  const double r1 = max_residual(1e-3, phys);
  double e_scale = std::max(1.0, std::abs(energy(w0, phys.f)));
  CHECK(r1 <= 1e-5 * e_scale);

  SUBCASE("refinement ratio is quadratic") {
    const double r2 = max_residual(5e-4, phys);
    CHECK(r1 / r2 > 3.2);
    CHECK(r1 / r2 < 4.8);
  }
  SUBCASE("identity is independent of the coefficient family") {
    Physics frozen = phys;
    frozen.family = CoefficientFamily::constant(2.0);
    frozen.eps = 0.0;
    const double r_const = max_residual(1e-3, frozen);
    CHECK(r_const <= 1e-5 * e_scale);
  }
  SUBCASE("f = 0 from zero data gives an identically zero residual") {
    SchemeConfig cfg;
    Trajectory traj = propagate(zero_state(dom), 0.0, 0.05, cfg, phys.with_zero_f(), 1);
    for (double r : audit_identity(traj, Nonlinearity::zero(), phys.eta)) CHECK(r == 0.0);
  }
}

TEST_CASE("energy is monotone along trajectories") {
  auto dom = test::benchmark_domain();
  Physics phys = test::benchmark_physics();
  SchemeConfig cfg;
  cfg.dt = 1e-3;
  SplitMix64 rng(321);
  for (int run = 0; run < 10; ++run) {
    const State w0 = sample_ball(dom, 1.0, 1, 2.0, rng.next()).states.front();
    Trajectory traj = propagate(w0, 0.0, 1.0, cfg, phys, 25);
    double prev = std::numeric_limits<double>::infinity();
    for (const State& w : traj.states) {
      const double e = energy(w, phys.f);
      CHECK(e <= prev + 1e-9 * std::max(1.0, std::abs(prev)));
      prev = e;
    }
  }
}

TEST_CASE("a-priori bound from the global existence argument") {
  // ||W(t)||^2 <= 4 (E(tau) + C_{lambda_1/4})
  auto dom = test::benchmark_domain();
  Physics phys = test::benchmark_physics();
  SchemeConfig cfg;
  cfg.dt = 1e-3;
  const double c_delta = dissipativity_bound(phys.f, dom->lambda1() / 4.0, *dom);
  SplitMix64 rng(99);
  for (int run = 0; run < 5; ++run) {
    const State w0 = sample_ball(dom, 1.5, 1, 2.0, rng.next()).states.front();
    const double bound = 4.0 * (energy(w0, phys.f) + c_delta);
    Trajectory traj = propagate(w0, 0.0, 2.0, cfg, phys, 100);
    for (const State& w : traj.states) CHECK(y0_norm_sq(w) <= bound * (1.0 + 1e-9));
  }
}

TEST_CASE("exponential fits") {
  SUBCASE("pure exponential recovers the rate exactly") {
    std::vector<double> t, y;
    for (int i = 0; i <= 100; ++i) {
      t.push_back(0.05 * i);
      y.push_back(std::exp(-2.0 * t.back()));
    }
    const FitResult fit = fit_exponential(t, y);
    CHECK(fit.rate == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("constant series has zero rate") {
    std::vector<double> t, y;
    for (int i = 0; i <= 50; ++i) {
      t.push_back(0.1 * i);
      y.push_back(3.5);
    }
    const FitResult fit = fit_exponential(t, y);
    CHECK(fit.rate == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("nonpositive values are rejected") {
    CHECK_THROWS_AS(fit_exponential({0.0, 1.0}, {1.0, 0.0}), std::invalid_argument);
  }
  SUBCASE("linear-process norm series fits with high r2") {
    auto dom = test::benchmark_domain();
    Physics phys = test::benchmark_physics();
    SchemeConfig cfg;
    cfg.dt = 2e-3;
    Trajectory traj = propagate(test::benchmark_state(dom), 0.0, 40.0, cfg,
                                phys.with_zero_f(), 50);
    std::vector<double> y(traj.states.size());
    for (std::size_t i = 0; i < traj.states.size(); ++i) y[i] = y0_norm_sq(traj.states[i]);
    const FitResult fit = fit_exponential(traj.times, y, 6.0, 40.0);
    CHECK(fit.rate < 0.0);
    CHECK(fit.r2 > 0.99);
  }
}

TEST_CASE("exponential domination of the benchmark norm") {
  auto dom = test::benchmark_domain();
  Physics phys = test::benchmark_physics();
  SchemeConfig cfg;
  cfg.dt = 1e-3;
  Trajectory traj = propagate(test::benchmark_state(dom), 0.0, 12.0, cfg, phys, 20);
  std::vector<double> y(traj.states.size());
  for (std::size_t i = 0; i < traj.states.size(); ++i) y[i] = y0_norm_sq(traj.states[i]);
  const DominationFit fit = fit_domination(traj.times, y);
  CHECK(fit.sigma > 0.0);
  CHECK(fit.K1 > 0.0);
  CHECK(fit.min_slack >= -1e-6);
}

TEST_CASE("default gamma honors the three caps") {
  auto dom = make_domain(1, 16);  // lambda_1 = 1
  const double g = default_gamma(*dom, 1.0, 3.0);
  // eta/(4 c^2) min(1/9, (1+1/2)^{-1}) = (1/4)(1/9)
  CHECK(g == doctest::Approx(0.9 / 36.0).epsilon(1e-12));
  // large eta: the (1 + eta^2/2)^{-1} branch binds
  const double g2 = default_gamma(*dom, 100.0, 0.01);
  CHECK(g2 == doctest::Approx(0.9 * 25.0 / 5001.0).epsilon(1e-12));
  // small box constant: lambda_1/2 binds
  auto wide = make_domain(1, 16, 8.0 * 3.14159265358979323846);  // lambda_1 = 1/64
  const double g3 = default_gamma(*wide, 2.0, 1.0);
  CHECK(g3 == doctest::Approx(0.9 / 128.0).epsilon(1e-12));
  // squeeze preconditions hold for every returned value
  for (double gg : {g, g2, g3}) CHECK(gg < 0.5);
  CHECK(g3 < 0.5 * wide->lambda1());
}
