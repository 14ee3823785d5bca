#pragma once

#include <functional>
#include <string>

#include "kgz/field.hpp"

namespace kgz {

/// Catalogue of admissible nonlinearities f: each member satisfies the
/// dissipativeness condition limsup f(s)/s <= 0 and the subcritical growth
/// bound |f'(s)| <= c (1 + |s|^{rho-1}).
class Nonlinearity {
 public:
  enum class Kind { zero, damped_power, sine };

  static Nonlinearity zero();
  /// f(s) = -|s|^{rho-1} s, rho in (1,3).
  static Nonlinearity damped_power(double rho);
  static Nonlinearity sine();
  static Nonlinearity from_name(const std::string& name, double rho);

  Kind kind() const { return kind_; }
  double rho() const { return rho_; }
  /// Declared growth constant c.
  double growth_c() const { return c_; }
  bool is_zero() const { return kind_ == Kind::zero; }
  /// Catalogue default for the 2/3-rule dealiasing flag.
  bool default_dealias() const { return kind_ == Kind::damped_power; }
  std::string name() const;

  double eval(double s) const;
  double derivative(double s) const;
  /// Exact antiderivative with primitive(0) = 0.
  double primitive(double s) const;

 private:
  Nonlinearity(Kind k, double rho, double c) : kind_(k), rho_(rho), c_(c) {}
  Kind kind_;
  double rho_;
  double c_;
};

/// Nemitskii operator: to_coeff(f o to_grid(u)), optionally zeroing the top
/// third of modes per axis before and after (2/3 rule).
SpectralField nemitskii(const Nonlinearity& f, const SpectralField& u, bool dealias);

/// Zero all coefficients with any k_i > floor(2N/3).
void dealias_inplace(SpectralField& u);

/// Explicit C_delta with  int f(u) u dx <= C_delta + delta ||u||_X^2  and the
/// same bound for int F(u) dx; analytic per catalogue member.
double dissipativity_bound(const Nonlinearity& f, double delta, const Domain& domain);

struct GrowthReport {
  double c_fit;   // smallest admissible c on the sampled range
  double rho;
  bool pass;
};

/// Checks |fprime(s)| <= c (1 + |s|^{rho-1}) by dense sampling.
GrowthReport validate_growth(const std::function<double(double)>& fprime, double lo, double hi,
                             int samples, double c_declared, double rho);
GrowthReport validate_growth(const Nonlinearity& f, double lo, double hi, int samples);

/// Quadrature of h(u(x)) over the box on an oversampled grid (the field is
/// synthesized exactly on the finer grid, so the only error is the
/// quadrature of the composed non-polynomial).
double integrate_composed(const SpectralField& u, const std::function<double(double)>& h,
                          int oversample = 8);

}  // namespace kgz
