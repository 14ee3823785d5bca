#pragma once

#include "kgz/field.hpp"

namespace kgz {

/// Phase-space point (u, u_t, v, v_t) in Y_0 = X^{1/2} x X x X^{1/2} x X.
/// All four fields share one domain.
struct State {
  SpectralField u, ut, v, vt;

  State() = default;
  explicit State(std::shared_ptr<const Domain> dom)
      : u(dom), ut(dom), v(dom), vt(std::move(dom)) {}

  const std::shared_ptr<const Domain>& domain() const { return u.domain; }

  State& operator+=(const State& o);
  State& operator-=(const State& o);
  State& operator*=(double s);
  bool all_finite() const;
};

State operator+(State a, const State& b);
State operator-(State a, const State& b);
State operator*(double s, State a);

/// Squared Y_0 norm, ||u||_{X^{1/2}}^2 + ||u_t||_X^2 + ||v||_{X^{1/2}}^2 + ||v_t||_X^2.
double y0_norm_sq(const State& w);
double y0_norm(const State& w);

/// Squared norm in X^1 x X^{1/2} x X^1 x X^{1/2}.
double reg_norm_sq(const State& w);

double y0_dist(const State& a, const State& b);
double reg_dist(const State& a, const State& b);

State zero_state(std::shared_ptr<const Domain> dom);

}  // namespace kgz
