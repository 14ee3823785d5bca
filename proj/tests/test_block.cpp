#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "kgz/attractor.hpp"
#include "kgz/block.hpp"
#include "kgz/rng.hpp"

using namespace kgz;

TEST_CASE("mode block entries, determinant and trace") {
  SUBCASE("lambda = eta = a = 1") {
    Eigen::Matrix4d expected;
    expected << 0, -1, 0, 0, 2, 1, 0, 1, 0, 0, 0, -1, 0, -1, 1, 1;
    const Eigen::Matrix4d m = mode_block(1.0, 1.0, 1.0);
    CHECK((m - expected).cwiseAbs().maxCoeff() == 0.0);
    CHECK(m.determinant() == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("a -> 0 decouples into two damped oscillators") {
    // the coupling entries (1,3) and (3,1) carry the only a dependence
    const Eigen::Matrix4d m = mode_block(4.0, 1.0, 1e-30);
    CHECK(m.block<2, 2>(0, 2).cwiseAbs().maxCoeff() <= 2e-30);
    CHECK(m.block<2, 2>(2, 0).cwiseAbs().maxCoeff() <= 2e-30);
    Eigen::Matrix2d osc_u, osc_v;
    osc_u << 0, -1, 5, 2;  // x'' + eta s x' + (lambda+1) x written first order
    osc_v << 0, -1, 4, 2;
    CHECK((m.block<2, 2>(0, 0) - osc_u).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((m.block<2, 2>(2, 2) - osc_v).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("trace = 2 eta sqrt(lambda)") {
    CHECK(mode_block(4.0, 1.0, 2.0).trace() == doctest::Approx(4.0).epsilon(1e-14));
  }
  SUBCASE("nonpositive parameters are rejected") {
    CHECK_THROWS_AS(mode_block(0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(mode_block(1.0, -1.0, 1.0), std::invalid_argument);
  }
}

TEST_CASE("determinant identity over random draws") {
  SplitMix64 rng(5);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double lambda = 0.5 + 4000.0 * rng.uniform();
    const double eta = 0.1 + 3.0 * rng.uniform();
    const double a = 0.2 + 4.0 * rng.uniform();
    const double target = lambda * (lambda + 1.0);
    worst = std::max(worst,
                     std::abs(mode_block(lambda, eta, a).determinant() - target) / target);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("closed-form inverse") {
  SUBCASE("lambda = eta = a = 1 matches the specialized matrix") {
    Eigen::Matrix4d expected;
    expected << 0.5, 0.5, 0.5, 0, -1, 0, 0, 0, -1, 0, 1, 1, 0, 0, -1, 0;
    CHECK((mode_block_inverse(1.0, 1.0, 1.0) - expected).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("M * M^{-1} = I") {
    const Eigen::Matrix4d m = mode_block(7.3, 0.9, 2.2);
    const Eigen::Matrix4d prod = m * mode_block_inverse(7.3, 0.9, 2.2);
    CHECK((prod - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-13);
  }
  SUBCASE("matches a generic numeric inversion across draws") {
    SplitMix64 rng(6);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const double lambda = 0.5 + 2000.0 * rng.uniform();
      const double eta = 0.1 + 3.0 * rng.uniform();
      const double a = 0.2 + 4.0 * rng.uniform();
      const Eigen::Matrix4d closed = mode_block_inverse(lambda, eta, a);
      const Eigen::Matrix4d numeric = mode_block(lambda, eta, a).inverse();
      worst = std::max(worst, (closed - numeric).cwiseAbs().maxCoeff() /
                                  numeric.cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-11);
  }
}

TEST_CASE("mode spectrum") {
  SUBCASE("eigenvalue sum = -trace") {
    const auto roots = mode_spectrum(4.0, 1.0, 1.0);
    CHECK(roots.sum().real() == doctest::Approx(-4.0).epsilon(1e-12));
    CHECK(roots.sum().imag() == doctest::Approx(0.0));
  }
  SUBCASE("eigenvalue product = det = lambda (lambda + 1)") {
    const auto roots = mode_spectrum(1.0, 1.0, 1.0);
    const std::complex<double> prod = roots[0] * roots[1] * roots[2] * roots[3];
    CHECK(prod.real() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(prod.imag()) < 1e-12);
  }
  SUBCASE("all real parts strictly negative") {
    const auto roots = mode_spectrum(1.0, 1.0, 1.0);
    for (int i = 0; i < 4; ++i) CHECK(roots[i].real() < 0.0);
  }
  SUBCASE("matches a direct eigensolve of -M (independent oracle)") {
    SplitMix64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
      const double lambda = 0.5 + 100.0 * rng.uniform();
      const double eta = 0.2 + 2.0 * rng.uniform();
      const double a = 0.2 + 3.0 * rng.uniform();
      auto companion_roots = mode_spectrum(lambda, eta, a);
      Eigen::EigenSolver<Eigen::Matrix4d> direct(-mode_block(lambda, eta, a), false);
      Eigen::Vector4cd d = direct.eigenvalues();
      std::sort(d.data(), d.data() + 4, [](auto x, auto y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
      });
      const double scale = d.cwiseAbs().maxCoeff();
      CHECK((companion_roots - d).cwiseAbs().maxCoeff() < 1e-8 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("resolvent norm") {
  SUBCASE("|beta| * norm -> 1 as beta -> infinity") {
    const double prod = 1e6 * resolvent_norm(1e6, 1.0, 1.0, 1.0);
    CHECK(std::abs(prod - 1.0) < 1e-3);
  }
  SUBCASE("beta = 0 gives the weighted norm of M^{-1}, finite") {
    const double v = resolvent_norm(0.0, 1.0, 1.0, 1.0);
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
  }
  SUBCASE("matches an independent eigendecomposition oracle") {
    // largest singular value via the Hermitian eigensolve of K^H K
    const double beta = 1.0, lambda = 1.0, eta = 1.0, a = 1.0;
    const double value = resolvent_norm(beta, lambda, eta, a);
    Eigen::Matrix4cd c = mode_block(lambda, eta, a).cast<std::complex<double>>();
    c.diagonal().array() += std::complex<double>(0.0, beta);
    const double s = std::sqrt(lambda);
    Eigen::Vector4d d(s, 1.0, s, 1.0);
    Eigen::Matrix4cd k = d.asDiagonal() * c.inverse() * d.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(k.adjoint() * k);
    const double oracle = std::sqrt(es.eigenvalues().maxCoeff());
    CHECK(value == doctest::Approx(oracle).epsilon(1e-10));
  }
  SUBCASE("negative beta by conjugate symmetry") {
    CHECK(resolvent_norm(-3.0, 2.0, 1.0, 1.5) ==
          doctest::Approx(resolvent_norm(3.0, 2.0, 1.0, 1.5)).epsilon(1e-12));
  }
}

TEST_CASE("analyticity scan") {
  auto dom = make_domain(1, 32);
  const auto betas = log_grid(1e-2, 1e4, 40);
  auto profile_at = [&](const Domain& d, double eta, double a, double beta) {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < d.num_modes(); ++k)
      worst = std::max(worst, beta * resolvent_norm(beta, d.eigenvalues()[k], eta, a));
    return worst;
  };

  SUBCASE("finite sup and flattening profile, a in [1,3]") {
    for (double a : {1.0, 2.0, 3.0}) {
      const auto scan = analyticity_scan(*dom, 1.0, a, betas);
      CHECK(std::isfinite(scan.sup));
      const double p_mid = profile_at(*dom, 1.0, a, 1e3);
      const double p_hi = profile_at(*dom, 1.0, a, 1e4);
      CHECK(std::abs(p_hi - p_mid) / p_mid <= 0.10);
    }
  }
  SUBCASE("truncation stability: doubling N moves the sup by < 5%") {
    auto dom64 = make_domain(1, 64);
    const auto s32 = analyticity_scan(*dom, 1.0, 2.0, betas);
    const auto s64 = analyticity_scan(*dom64, 1.0, 2.0, betas);
    CHECK(std::abs(s64.sup - s32.sup) / s32.sup < 0.05);
  }
  SUBCASE("decoupled scan equals the scan of the 2x2 sub-blocks") {
    // at a ~ 0 the block is block-diagonal; the norm is the max of the
    // two oscillator resolvents, computed here directly
    const double lambda = 9.0, eta = 1.0, beta = 3.0;
    const double whole = resolvent_norm(beta, lambda, eta, 1e-14);
    const double s = std::sqrt(lambda);
    auto sub_norm = [&](double stiff) {
      Eigen::Matrix2cd m;
      m << 0.0, -1.0, stiff, eta * s;
      m.diagonal().array() += std::complex<double>(0.0, beta);
      Eigen::Vector2d d(s, 1.0);
      Eigen::Matrix2cd k = d.asDiagonal() * m.inverse() * d.cwiseInverse().asDiagonal();
      return k.jacobiSvd().singularValues()(0);
    };
    const double oracle = std::max(sub_norm(lambda + 1.0), sub_norm(lambda));
    CHECK(whole == doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("accretivity") {
  auto dom = make_domain(1, 16);

  SUBCASE("single mode, eta = 2, x = (0,1,0,1)") {
    State x(dom);
    x.ut = unit_mode(dom, {1});
    x.vt = unit_mode(dom, {1});
    CHECK(accretivity_form(x, 2.0, 1.3) == doctest::Approx(4.0).epsilon(1e-14));
  }
  SUBCASE("zero velocities give a vanishing form") {
    State x(dom);
    x.u = unit_mode(dom, {3}, 2.0);
    x.v = unit_mode(dom, {5}, -1.0);
    CHECK(accretivity_form(x, 1.0, 2.0) == doctest::Approx(0.0));
  }
  SUBCASE("residual vanishes on random states") {
    SplitMix64 rng(17);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      Cloud c = sample_ball(dom, 1.0 + rng.uniform(), 1, 1.0, rng.next());
      const State& x = c.states.front();
      const double n2 = y0_norm_sq(x);
      if (n2 == 0.0) continue;
      const double a = 1.0 + 2.0 * rng.uniform();
      const double eta = 0.3 + 2.0 * rng.uniform();
      worst = std::max(worst, std::abs(accretivity_residual(x, eta, a)) / n2);
    }
    CHECK(worst <= 1e-12);
  }
}
