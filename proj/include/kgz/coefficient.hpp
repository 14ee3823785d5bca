#pragma once

#include <string>
#include <utility>
#include <vector>

namespace kgz {

/// Time-dependent coupling coefficient a_eps(t). Members are built to satisfy
/// the standing hypotheses: positive bounds a_0 <= a_eps(t) <= a_1, bounded
/// derivative, and Hoelder continuity, uniformly in eps in [0,1].
class CoefficientFamily {
 public:
  enum class Kind { constant, sinusoidal, tabulated };

  static CoefficientFamily constant(double a_star);
  /// a_eps(t) = a_star + eps * amplitude * sin(t).
  static CoefficientFamily sinusoidal(double a_star, double amplitude = 1.0);
  /// Piecewise-linear interpolation of (t, a) pairs; no eps dependence.
  static CoefficientFamily tabulated(std::vector<std::pair<double, double>> table);
  static CoefficientFamily tabulated_from_csv(const std::string& path);
  static CoefficientFamily from_name(const std::string& name, double a_star, double amplitude,
                                     const std::string& table_path);

  Kind kind() const { return kind_; }
  double a_star() const { return a_star_; }
  double amplitude() const { return amplitude_; }
  std::string name() const;

  double eval(double eps, double t) const;
  double derivative(double eps, double t) const;

  /// Analytic bounds [a_0, a_1] valid for all t and eps in [0,1].
  std::pair<double, double> bounds() const;

  /// sup_t |a_eps(t) - a_0(t)|; exact per member (eps * |amplitude| for the
  /// sinusoidal family, 0 otherwise).
  double sup_deviation(double eps) const;

  bool derivative_is_exact() const { return kind_ != Kind::tabulated; }

 private:
  CoefficientFamily(Kind k, double a_star, double amplitude)
      : kind_(k), a_star_(a_star), amplitude_(amplitude) {}
  double interp(double t) const;
  double interp_slope(double t) const;

  Kind kind_;
  double a_star_ = 0.0;
  double amplitude_ = 0.0;
  std::vector<std::pair<double, double>> table_;
};

struct BoundsReport {
  double a0, a1;        // empirical extrema over the sampled (t, eps) grid
  double b0;            // max |a'| (NaN when the derivative is not checkable)
  double beta;          // Hoelder exponent used for the quotient sweep
  double holder_C;      // max quotient |a(t)-a(s)|/|t-s|^beta at the finest sweep
  bool derivative_checked;
  bool pass;
};

/// Empirical check of the coefficient hypotheses on a sampled window. The
/// Hoelder quotient is swept at two resolutions; a diverging quotient
/// (jump in a tabulated family) fails the report.
BoundsReport validate_bounds(const CoefficientFamily& family, double t_lo, double t_hi,
                             const std::vector<double>& eps_grid, int samples,
                             double beta = 1.0);

}  // namespace kgz
