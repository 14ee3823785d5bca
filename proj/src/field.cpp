#include "kgz/field.hpp"

#include <cmath>
#include <stdexcept>

namespace kgz {

SpectralField::SpectralField(std::shared_ptr<const Domain> dom, Eigen::ArrayXd c)
    : domain(std::move(dom)), coeffs(std::move(c)) {
  if (coeffs.size() != domain->num_modes())
    throw std::invalid_argument("SpectralField: coefficient count does not match domain");
}

SpectralField zero_field(std::shared_ptr<const Domain> dom) { return SpectralField(std::move(dom)); }

SpectralField unit_mode(std::shared_ptr<const Domain> dom, const std::vector<int>& k,
                        double amplitude) {
  SpectralField f(dom);
  f.coeffs[dom->flat_index(k)] = amplitude;
  return f;
}

Eigen::ArrayXd to_grid(const SpectralField& f) { return f.domain->synthesize(f.coeffs); }

SpectralField to_coeff(const std::shared_ptr<const Domain>& dom, const Eigen::ArrayXd& grid) {
  return SpectralField(dom, dom->analyze(grid));
}

SpectralField apply_fractional(const SpectralField& f, double alpha) {
  if (alpha == 0.0) return f;
  SpectralField out = f;
  const Eigen::ArrayXd& lam = f.domain->eigenvalues();
  if (alpha == 0.5) {
    out.coeffs *= f.domain->sqrt_eigenvalues();
  } else if (alpha == 1.0) {
    out.coeffs *= lam;
  } else if (alpha == -0.5) {
    out.coeffs /= f.domain->sqrt_eigenvalues();
  } else if (alpha == -1.0) {
    out.coeffs /= lam;
  } else {
    out.coeffs *= lam.pow(alpha);
  }
  return out;
}

double norm_alpha_sq(const SpectralField& f, double alpha) {
  const Eigen::ArrayXd& lam = f.domain->eigenvalues();
  const Eigen::ArrayXd c2 = f.coeffs.square();
  const double e = 2.0 * alpha;
  if (e == 0.0) return c2.sum();
  if (e == 0.5) return (c2 * f.domain->sqrt_eigenvalues()).sum();
  if (e == 1.0) return (c2 * lam).sum();
  if (e == 2.0) return (c2 * lam * lam).sum();
  return (c2 * lam.pow(e)).sum();
}

double norm_alpha(const SpectralField& f, double alpha) {
  return std::sqrt(norm_alpha_sq(f, alpha));
}

double inner_X(const SpectralField& a, const SpectralField& b) {
  require_same_domain(a, b);
  return (a.coeffs * b.coeffs).sum();
}

double grid_inner(const SpectralField& a, const SpectralField& b) {
  require_same_domain(a, b);
  return a.domain->quad_weight() * (to_grid(a) * to_grid(b)).sum();
}

void require_same_domain(const SpectralField& a, const SpectralField& b) {
  if (a.domain.get() == b.domain.get()) return;
  if (!a.domain || !b.domain || !a.domain->same_box(*b.domain))
    throw std::invalid_argument("fields live on different domains");
}

}  // namespace kgz
