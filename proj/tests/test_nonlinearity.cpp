#include <doctest.h>

#include <cmath>

#include "kgz/nonlinearity.hpp"
#include "kgz/rng.hpp"
#include "support/oracles.hpp"

using namespace kgz;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("catalogue point values") {
  SUBCASE("damped_power rho=2") {
    auto f = Nonlinearity::damped_power(2.0);
    CHECK(f.eval(2.0) == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK(f.derivative(2.0) == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK(f.primitive(2.0) == doctest::Approx(-8.0 / 3.0).epsilon(1e-14));
  }
  SUBCASE("sine") {
    auto f = Nonlinearity::sine();
    CHECK(f.eval(0.0) == 0.0);
    CHECK(f.derivative(0.0) == 1.0);
  }
  SUBCASE("zero") {
    auto f = Nonlinearity::zero();
    for (double s : {-3.0, 0.0, 7.5}) CHECK(f.primitive(s) == 0.0);
  }
  SUBCASE("unknown id") {
    CHECK_THROWS_AS(Nonlinearity::from_name("cubic", 2.0), std::invalid_argument);
  }
}

TEST_CASE("primitive matches numeric integration of eval") {
  for (auto f : {Nonlinearity::damped_power(2.0), Nonlinearity::damped_power(1.5),
                 Nonlinearity::sine(), Nonlinearity::zero()}) {
    for (double s : {-5.0, -1.3, 0.4, 2.0, 5.0}) {
      const double numeric =
          test::simpson([&](double x) { return f.eval(x); }, 0.0, s, 4000);
      CHECK(f.primitive(s) == doctest::Approx(numeric).epsilon(1e-10));
    }
  }
}

TEST_CASE("nemitskii trivial cases") {
  auto dom = make_domain(1, 16);
  SplitMix64 rng(7);
  SpectralField u(dom);
  for (Eigen::Index i = 0; i < u.coeffs.size(); ++i) u.coeffs[i] = rng.symmetric();

  SUBCASE("f = zero maps everything to the zero field") {
    CHECK(nemitskii(Nonlinearity::zero(), u, false).coeffs.abs().maxCoeff() == 0.0);
  }
  SUBCASE("f = sine maps zero to zero") {
    CHECK(nemitskii(Nonlinearity::sine(), zero_field(dom), false).coeffs.abs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("nemitskii against a fine-grid projection oracle") {
  // u = single mode k=1 with a positive amplitude; f(u) = -|u|u. The true
  // projection coefficients are computed by Simpson quadrature; at a large
  // truncation with dealiasing the interpolant coefficients must match.
  const int N = 4096;
  auto dom = make_domain(1, N);
  const double amp = 0.8;
  SpectralField u = unit_mode(dom, {1}, amp);
  auto f = Nonlinearity::damped_power(2.0);
  SpectralField fu = nemitskii(f, u, true);

  const double c = amp * std::sqrt(2.0 / kPi);  // u(x) = c sin x
  for (int k : {1, 2, 3, 5, 7, 9}) {
    const double oracle = test::simpson(
        [&](double x) {
          const double ux = c * std::sin(x);
          return -std::abs(ux) * ux * std::sqrt(2.0 / kPi) * std::sin(k * x);
        },
        0.0, kPi, 131072);
    CHECK(fu.coeffs[k - 1] == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("dealiasing zeroes the top third of modes") {
  auto dom = make_domain(1, 9);
  SpectralField u(dom);
  u.coeffs.setOnes();
  dealias_inplace(u);
  for (int k = 1; k <= 9; ++k) CHECK(u.coeffs[k - 1] == (k <= 6 ? 1.0 : 0.0));
}

TEST_CASE("dissipativity bounds") {
  auto dom = make_domain(1, 8);  // |Omega| = pi
  CHECK(dissipativity_bound(Nonlinearity::damped_power(2.0), 0.3, *dom) == 0.0);
  CHECK(dissipativity_bound(Nonlinearity::zero(), 1.0, *dom) == 0.0);
  CHECK(dissipativity_bound(Nonlinearity::sine(), 0.5, *dom) ==
        doctest::Approx(kPi / 2.0).epsilon(1e-14));
}

TEST_CASE("dissipativity inequality on random fields") {
  // int f(u) u dx <= C_delta + delta ||u||_X^2 with delta = lambda_1 / 8
  auto dom = make_domain(1, 16);
  const double delta = dom->lambda1() / 8.0;
  SplitMix64 rng(99);
  for (auto f : {Nonlinearity::damped_power(2.0), Nonlinearity::sine(), Nonlinearity::zero()}) {
    const double c_delta = dissipativity_bound(f, delta, *dom);
    for (int trial = 0; trial < 100; ++trial) {
      SpectralField u(dom);
      for (Eigen::Index i = 0; i < u.coeffs.size(); ++i)
        u.coeffs[i] = 2.0 * rng.symmetric() / ((i + 1.0));
      const double lhs =
          integrate_composed(u, [&](double s) { return f.eval(s) * s; });
      const double rhs = c_delta + delta * norm_alpha_sq(u, 0.0);
      CHECK(rhs - lhs >= -1e-9);
    }
  }
}

TEST_CASE("growth validation") {
  SUBCASE("damped_power rho=2 passes with c = 2 on [-10,10]") {
    auto rep = validate_growth(Nonlinearity::damped_power(2.0), -10.0, 10.0, 1000);
    CHECK(rep.pass);
    // sup of 2|s|/(1+|s|) on the range, attained at the endpoints
    CHECK(rep.c_fit == doctest::Approx(20.0 / 11.0).epsilon(1e-12));
    CHECK(rep.c_fit <= 2.0);
  }
  SUBCASE("sine passes with c = 1") {
    auto rep = validate_growth(Nonlinearity::sine(), -10.0, 10.0, 1000);
    CHECK(rep.pass);
    CHECK(rep.c_fit <= 1.0 + 1e-12);
  }
  SUBCASE("adversarial cubic declared rho=2 fails") {
    auto rep = validate_growth([](double s) { return 3.0 * s * s; }, -10.0, 10.0, 1000, 1.0, 2.0);
    CHECK_FALSE(rep.pass);
  }
}

TEST_CASE("pointwise growth of f itself (catalogue declaration)") {
  // |f(s)| <= c (1 + |s|^rho) on a sampled range
  for (auto f : {Nonlinearity::damped_power(2.0), Nonlinearity::damped_power(2.5),
                 Nonlinearity::sine()}) {
    for (int i = 0; i <= 2000; ++i) {
      const double s = -20.0 + 40.0 * i / 2000.0;
      CHECK(std::abs(f.eval(s)) <=
            f.growth_c() * (1.0 + std::pow(std::abs(s), f.rho())) * (1.0 + 1e-12));
    }
  }
}
