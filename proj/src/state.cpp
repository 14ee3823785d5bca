#include "kgz/state.hpp"

namespace kgz {

State& State::operator+=(const State& o) {
  u.coeffs += o.u.coeffs;
  ut.coeffs += o.ut.coeffs;
  v.coeffs += o.v.coeffs;
  vt.coeffs += o.vt.coeffs;
  return *this;
}

State& State::operator-=(const State& o) {
  u.coeffs -= o.u.coeffs;
  ut.coeffs -= o.ut.coeffs;
  v.coeffs -= o.v.coeffs;
  vt.coeffs -= o.vt.coeffs;
  return *this;
}

State& State::operator*=(double s) {
  u.coeffs *= s;
  ut.coeffs *= s;
  v.coeffs *= s;
  vt.coeffs *= s;
  return *this;
}

bool State::all_finite() const {
  return u.coeffs.allFinite() && ut.coeffs.allFinite() && v.coeffs.allFinite() &&
         vt.coeffs.allFinite();
}

State operator+(State a, const State& b) { return a += b; }
State operator-(State a, const State& b) { return a -= b; }
State operator*(double s, State a) { return a *= s; }

double y0_norm_sq(const State& w) {
  const Eigen::ArrayXd& lam = w.domain()->eigenvalues();
  return (w.u.coeffs.square() * lam).sum() + w.ut.coeffs.square().sum() +
         (w.v.coeffs.square() * lam).sum() + w.vt.coeffs.square().sum();
}

double y0_norm(const State& w) { return std::sqrt(y0_norm_sq(w)); }

double reg_norm_sq(const State& w) {
  const Eigen::ArrayXd& lam = w.domain()->eigenvalues();
  return (w.u.coeffs.square() * lam * lam).sum() + (w.ut.coeffs.square() * lam).sum() +
         (w.v.coeffs.square() * lam * lam).sum() + (w.vt.coeffs.square() * lam).sum();
}

double y0_dist(const State& a, const State& b) {
  const Eigen::ArrayXd& lam = a.domain()->eigenvalues();
  return std::sqrt(((a.u.coeffs - b.u.coeffs).square() * lam).sum() +
                   (a.ut.coeffs - b.ut.coeffs).square().sum() +
                   ((a.v.coeffs - b.v.coeffs).square() * lam).sum() +
                   (a.vt.coeffs - b.vt.coeffs).square().sum());
}

double reg_dist(const State& a, const State& b) {
  const Eigen::ArrayXd& lam = a.domain()->eigenvalues();
  return std::sqrt(((a.u.coeffs - b.u.coeffs).square() * lam * lam).sum() +
                   ((a.ut.coeffs - b.ut.coeffs).square() * lam).sum() +
                   ((a.v.coeffs - b.v.coeffs).square() * lam * lam).sum() +
                   ((a.vt.coeffs - b.vt.coeffs).square() * lam).sum());
}

State zero_state(std::shared_ptr<const Domain> dom) { return State(std::move(dom)); }

}  // namespace kgz
