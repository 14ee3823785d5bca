#include "kgz/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace kgz {

namespace {
void require_eps(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("coefficient family: eps must lie in [0,1]");
}
}  // namespace

CoefficientFamily CoefficientFamily::constant(double a_star) {
  if (!(a_star > 0.0)) throw std::invalid_argument("constant family: a_star must be positive");
  return CoefficientFamily(Kind::constant, a_star, 0.0);
}

CoefficientFamily CoefficientFamily::sinusoidal(double a_star, double amplitude) {
  if (!(a_star - std::abs(amplitude) > 0.0))
    throw std::invalid_argument("sinusoidal family: a_star - |amplitude| must stay positive");
  return CoefficientFamily(Kind::sinusoidal, a_star, amplitude);
}

CoefficientFamily CoefficientFamily::tabulated(std::vector<std::pair<double, double>> table) {
  if (table.size() < 2) throw std::invalid_argument("tabulated family: need at least 2 rows");
  std::sort(table.begin(), table.end());
  for (std::size_t i = 0; i + 1 < table.size(); ++i)
    if (table[i].first == table[i + 1].first)
      throw std::invalid_argument("tabulated family: duplicate abscissa");
  for (const auto& [t, a] : table)
    if (!(a > 0.0)) throw std::invalid_argument("tabulated family: values must be positive");
  CoefficientFamily f(Kind::tabulated, table.front().second, 0.0);
  f.table_ = std::move(table);
  return f;
}

CoefficientFamily CoefficientFamily::tabulated_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open coefficient table: " + path);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double t, a;
    if (!(ss >> t >> a))
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected two numeric columns");
    rows.emplace_back(t, a);
  }
  return tabulated(std::move(rows));
}

CoefficientFamily CoefficientFamily::from_name(const std::string& name, double a_star,
                                               double amplitude, const std::string& table_path) {
  if (name == "constant") return constant(a_star);
  if (name == "sinusoidal") return sinusoidal(a_star, amplitude);
  if (name == "tabulated" || name == "custom_tabulated") return tabulated_from_csv(table_path);
  throw std::invalid_argument("unknown coefficient family id: " + name);
}

std::string CoefficientFamily::name() const {
  switch (kind_) {
    case Kind::constant: return "constant";
    case Kind::sinusoidal: return "sinusoidal";
    case Kind::tabulated: return "tabulated";
  }
  return "?";
}

double CoefficientFamily::interp(double t) const {
  if (t <= table_.front().first) return table_.front().second;
  if (t >= table_.back().first) return table_.back().second;
  auto it = std::upper_bound(table_.begin(), table_.end(), std::make_pair(t, std::numeric_limits<double>::lowest()));
  auto lo = std::prev(it);
  double w = (t - lo->first) / (it->first - lo->first);
  return (1.0 - w) * lo->second + w * it->second;
}

double CoefficientFamily::interp_slope(double t) const {
  if (t <= table_.front().first || t >= table_.back().first) return 0.0;
  auto it = std::upper_bound(table_.begin(), table_.end(), std::make_pair(t, std::numeric_limits<double>::lowest()));
  auto lo = std::prev(it);
  return (it->second - lo->second) / (it->first - lo->first);
}

double CoefficientFamily::eval(double eps, double t) const {
  require_eps(eps);
  switch (kind_) {
    case Kind::constant: return a_star_;
    case Kind::sinusoidal: return a_star_ + eps * amplitude_ * std::sin(t);
    case Kind::tabulated: return interp(t);
  }
  return a_star_;
}

double CoefficientFamily::derivative(double eps, double t) const {
  require_eps(eps);
  switch (kind_) {
    case Kind::constant: return 0.0;
    case Kind::sinusoidal: return eps * amplitude_ * std::cos(t);
    case Kind::tabulated: return interp_slope(t);
  }
  return 0.0;
}

std::pair<double, double> CoefficientFamily::bounds() const {
  switch (kind_) {
    case Kind::constant: return {a_star_, a_star_};
    case Kind::sinusoidal: return {a_star_ - std::abs(amplitude_), a_star_ + std::abs(amplitude_)};
    case Kind::tabulated: {
      double lo = table_.front().second, hi = lo;
      for (const auto& [t, a] : table_) {
        lo = std::min(lo, a);
        hi = std::max(hi, a);
      }
      return {lo, hi};
    }
  }
  return {a_star_, a_star_};
}

double CoefficientFamily::sup_deviation(double eps) const {
  require_eps(eps);
  return kind_ == Kind::sinusoidal ? eps * std::abs(amplitude_) : 0.0;
}

BoundsReport validate_bounds(const CoefficientFamily& family, double t_lo, double t_hi,
                             const std::vector<double>& eps_grid, int samples, double beta) {
  if (samples < 2) throw std::invalid_argument("validate_bounds: samples must be >= 2");
  if (!(t_hi > t_lo)) throw std::invalid_argument("validate_bounds: empty window");
  BoundsReport rep{};
  rep.beta = beta;
  rep.a0 = std::numeric_limits<double>::infinity();
  rep.a1 = -rep.a0;
  rep.b0 = 0.0;
  rep.derivative_checked = family.derivative_is_exact();
  if (!rep.derivative_checked) rep.b0 = std::numeric_limits<double>::quiet_NaN();

  auto quotient_sweep = [&](int m) {
    double worst = 0.0;
    double h = (t_hi - t_lo) / (m - 1);
    for (double eps : eps_grid) {
      double prev = family.eval(eps, t_lo);
      for (int i = 1; i < m; ++i) {
        double t = t_lo + i * h;
        double cur = family.eval(eps, t);
        worst = std::max(worst, std::abs(cur - prev) / std::pow(h, beta));
        prev = cur;
      }
    }
    return worst;
  };

  for (double eps : eps_grid) {
    for (int i = 0; i < samples; ++i) {
      double t = t_lo + (t_hi - t_lo) * i / (samples - 1);
      double a = family.eval(eps, t);
      rep.a0 = std::min(rep.a0, a);
      rep.a1 = std::max(rep.a1, a);
      if (rep.derivative_checked)
        rep.b0 = std::max(rep.b0, std::abs(family.derivative(eps, t)));
    }
  }

  double q_coarse = quotient_sweep(samples);
  double q_fine = quotient_sweep(2 * samples);
  rep.holder_C = q_fine;
  // a genuine jump makes the adjacent-pair quotient scale like h^{-beta}
  bool diverging = q_fine > 1.5 * q_coarse + 1e-12;
  rep.pass = rep.a0 > 0.0 && std::isfinite(rep.holder_C) && !diverging;
  return rep;
}

}  // namespace kgz
