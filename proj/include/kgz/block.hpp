#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "kgz/coefficient.hpp"
#include "kgz/state.hpp"

namespace kgz {

/// Restriction of the full operator to the eigenmode with eigenvalue lambda:
/// with s = sqrt(lambda),
///   [ 0        -1       0       0      ]
///   [ lambda+1  eta s   0       a s    ]
///   [ 0         0       0      -1      ]
///   [ 0        -a s     lambda  eta s  ]
/// det = lambda (lambda + 1), trace = 2 eta s.
Eigen::Matrix4d mode_block(double lambda, double eta, double a);

/// Closed-form inverse of mode_block (exists for every lambda > 0).
Eigen::Matrix4d mode_block_inverse(double lambda, double eta, double a);

/// Monic characteristic polynomial of -M, x^4 + c3 x^3 + c2 x^2 + c1 x + c0:
///   (x^2 + eta s x + lambda + 1)(x^2 + eta s x + lambda) + a^2 lambda x^2.
Eigen::Vector4d mode_char_poly(double lambda, double eta, double a);

/// Eigenvalues of -M via a companion-matrix solve, sorted by real part.
Eigen::Vector4cd mode_spectrum(double lambda, double eta, double a);

/// || D (i beta I + M)^{-1} D^{-1} ||_2 with D = diag(s, 1, s, 1), the
/// per-mode operator norm induced by the Y_0 weighting.
double resolvent_norm(double beta, double lambda, double eta, double a);

struct AnalyticityScan {
  std::vector<double> betas;
  std::vector<double> profile;   // sup over modes of |beta| * resolvent norm, per beta
  double sup = 0.0;
  double beta_at_sup = 0.0;
  double lambda_at_sup = 0.0;
};

/// Scans |beta| * resolvent norm over the truncated mode set; a finite,
/// flattening profile is the numerical analyticity criterion.
AnalyticityScan analyticity_scan(const Domain& domain, double eta, double a,
                                 const std::vector<double>& beta_grid);

/// Log-spaced grid in [lo, hi].
std::vector<double> log_grid(double lo, double hi, int points);

/// Re<A(t)x, x> - eta (||A^{1/4} u_t||^2 + ||A^{1/4} v_t||^2), summed over
/// modes. The inner product weights the u-slot by (lambda+1) and the v-slot
/// by lambda, which is the pairing that makes the skew part cancel exactly;
/// the contract is a residual of zero up to roundoff.
double accretivity_residual(const State& x, double eta, double a);

/// Re<A(t)x, x> in the same pairing (the damping quadratic form itself).
double accretivity_form(const State& x, double eta, double a);

}  // namespace kgz
