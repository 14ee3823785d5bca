#include "kgz/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

namespace kgz {

Nonlinearity Nonlinearity::zero() { return Nonlinearity(Kind::zero, 2.0, 0.0); }

Nonlinearity Nonlinearity::damped_power(double rho) {
  if (!(rho > 1.0 && rho < 3.0))
    throw std::invalid_argument("damped_power: rho must lie in (1,3)");
  // |f'(s)| = rho |s|^{rho-1} <= rho (1 + |s|^{rho-1})
  return Nonlinearity(Kind::damped_power, rho, rho);
}

Nonlinearity Nonlinearity::sine() { return Nonlinearity(Kind::sine, 2.0, 1.0); }

Nonlinearity Nonlinearity::from_name(const std::string& name, double rho) {
  if (name == "zero") return zero();
  if (name == "damped_power") return damped_power(rho);
  if (name == "sine") return sine();
  throw std::invalid_argument("unknown nonlinearity id: " + name);
}

std::string Nonlinearity::name() const {
  switch (kind_) {
    case Kind::zero: return "zero";
    case Kind::damped_power: return "damped_power";
    case Kind::sine: return "sine";
  }
  return "?";
}

double Nonlinearity::eval(double s) const {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::damped_power: return -std::pow(std::abs(s), rho_ - 1.0) * s;
    case Kind::sine: return std::sin(s);
  }
  return 0.0;
}

double Nonlinearity::derivative(double s) const {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::damped_power: return -rho_ * std::pow(std::abs(s), rho_ - 1.0);
    case Kind::sine: return std::cos(s);
  }
  return 0.0;
}

double Nonlinearity::primitive(double s) const {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::damped_power: return -std::pow(std::abs(s), rho_ + 1.0) / (rho_ + 1.0);
    case Kind::sine: return 1.0 - std::cos(s);
  }
  return 0.0;
}

void dealias_inplace(SpectralField& u) {
  const Domain& dom = *u.domain;
  const int keep = (2 * dom.modes_per_axis()) / 3;
  const Eigen::Index total = dom.num_modes();
  const int n = dom.dim();
  const int N = dom.modes_per_axis();
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    Eigen::Index rest = idx;
    for (int a = n - 1; a >= 0; --a) {
      int k = static_cast<int>(rest % N) + 1;
      rest /= N;
      if (k > keep) {
        u.coeffs[idx] = 0.0;
        break;
      }
    }
  }
}

SpectralField nemitskii(const Nonlinearity& f, const SpectralField& u, bool dealias) {
  if (f.is_zero()) return zero_field(u.domain);
  SpectralField input = u;
  if (dealias) dealias_inplace(input);
  Eigen::ArrayXd vals = to_grid(input);
  for (Eigen::Index i = 0; i < vals.size(); ++i) vals[i] = f.eval(vals[i]);
  SpectralField out = to_coeff(u.domain, vals);
  if (dealias) dealias_inplace(out);
  return out;
}

double dissipativity_bound(const Nonlinearity& f, double delta, const Domain& domain) {
  if (!(delta > 0.0)) throw std::invalid_argument("dissipativity_bound: delta must be positive");
  switch (f.kind()) {
    case Nonlinearity::Kind::zero: return 0.0;
    // f(s) s = -|s|^{rho+1} <= 0 and F(s) = -|s|^{rho+1}/(rho+1) <= 0
    case Nonlinearity::Kind::damped_power: return 0.0;
    // sin(s) s <= |s| <= delta s^2 + 1/(4 delta), F(s) = 1-cos(s) <= min(2, s^2/2)
    case Nonlinearity::Kind::sine: return domain.volume() / (4.0 * delta);
  }
  return 0.0;
}

GrowthReport validate_growth(const std::function<double(double)>& fprime, double lo, double hi,
                             int samples, double c_declared, double rho) {
  if (samples < 2) throw std::invalid_argument("validate_growth: need at least 2 samples");
  double c_fit = 0.0;
  for (int i = 0; i < samples; ++i) {
    double s = lo + (hi - lo) * i / (samples - 1);
    double envelope = 1.0 + std::pow(std::abs(s), rho - 1.0);
    c_fit = std::max(c_fit, std::abs(fprime(s)) / envelope);
  }
  return GrowthReport{c_fit, rho, c_fit <= c_declared * (1.0 + 1e-12)};
}

GrowthReport validate_growth(const Nonlinearity& f, double lo, double hi, int samples) {
  return validate_growth([&f](double s) { return f.derivative(s); }, lo, hi, samples,
                         f.growth_c(), f.rho());
}

double integrate_composed(const SpectralField& u, const std::function<double(double)>& h,
                          int oversample) {
  auto fine = u.domain->refined(oversample);
  SpectralField padded(fine);
  const Domain& coarse = *u.domain;
  const Eigen::Index total = coarse.num_modes();
  for (Eigen::Index idx = 0; idx < total; ++idx)
    padded.coeffs[fine->flat_index(coarse.multi_index(idx))] = u.coeffs[idx];
  Eigen::ArrayXd vals = fine->synthesize(padded.coeffs);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i) acc += h(vals[i]);
  return acc * fine->quad_weight();
}

}  // namespace kgz
