#include "kgz/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace kgz {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) fail(line, "expected a number, got '" + v + "'");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    fail(line, "expected a number, got '" + v + "'");
  }
}

long parse_long(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    long d = std::stol(v, &pos);
    if (pos != v.size()) fail(line, "expected an integer, got '" + v + "'");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    fail(line, "expected an integer, got '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    unsigned long long d = std::stoull(v, &pos);
    if (pos != v.size()) fail(line, "expected an unsigned integer, got '" + v + "'");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    fail(line, "expected an unsigned integer, got '" + v + "'");
  }
}

std::vector<double> parse_double_list(const std::string& v, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(line, "empty entry in list");
    out.push_back(parse_double(item, line));
  }
  if (out.empty()) fail(line, "empty list");
  return out;
}

std::vector<std::string> parse_string_list(const std::string& v, int line) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(line, "empty entry in list");
    out.push_back(item);
  }
  if (out.empty()) fail(line, "empty list");
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double d : v) s += (s.empty() ? "" : ",") + fmt17(d);
  return s;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& d : v) s += (s.empty() ? "" : ",") + d;
  return s;
}

}  // namespace

bool RunConfig::dealias_effective() const {
  if (physics_dealias == "on") return true;
  if (physics_dealias == "off") return false;
  return physics_f == "damped_power";
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, int> key_lines;  // for constraint messages
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected 'section.key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(lineno, "missing key");
    if (value.empty()) fail(lineno, "missing value for '" + key + "'");
    if (key_lines.count(key)) fail(lineno, "duplicate key '" + key + "'");
    key_lines[key] = lineno;

    if (key == "domain.n") cfg.domain_n = static_cast<int>(parse_long(value, lineno));
    else if (key == "domain.modes") cfg.domain_modes = static_cast<int>(parse_long(value, lineno));
    else if (key == "domain.length") cfg.domain_length = parse_double(value, lineno);
    else if (key == "physics.eta") cfg.physics_eta = parse_double(value, lineno);
    else if (key == "physics.f") cfg.physics_f = value;
    else if (key == "physics.rho") cfg.physics_rho = parse_double(value, lineno);
    else if (key == "physics.dealias") cfg.physics_dealias = value;
    else if (key == "coefficient.family") cfg.coefficient_family = value;
    else if (key == "coefficient.a_star") cfg.coefficient_a_star = parse_double(value, lineno);
    else if (key == "coefficient.amplitude") cfg.coefficient_amplitude = parse_double(value, lineno);
    else if (key == "coefficient.epsilon") cfg.coefficient_epsilon = parse_double(value, lineno);
    else if (key == "coefficient.table") cfg.coefficient_table = value;
    else if (key == "time.dt") cfg.time_dt = parse_double(value, lineno);
    else if (key == "time.t0") cfg.time_t0 = parse_double(value, lineno);
    else if (key == "time.t1") cfg.time_t1 = parse_double(value, lineno);
    else if (key == "time.sample_every") cfg.time_sample_every = parse_long(value, lineno);
    else if (key == "time.scheme") cfg.time_scheme = value;
    else if (key == "pullback.t_star") cfg.pullback_t_star = parse_double(value, lineno);
    else if (key == "pullback.windows") cfg.pullback_windows = parse_double_list(value, lineno);
    else if (key == "pullback.samples") cfg.pullback_samples = static_cast<int>(parse_long(value, lineno));
    else if (key == "pullback.radius") cfg.pullback_radius = parse_double(value, lineno);
    else if (key == "pullback.decay") cfg.pullback_decay = parse_double(value, lineno);
    else if (key == "pullback.seed") cfg.pullback_seed = parse_u64(value, lineno);
    else if (key == "pullback.tol_attr") cfg.pullback_tol_attr = parse_double(value, lineno);
    else if (key == "sweep.epsilons") cfg.sweep_epsilons = parse_double_list(value, lineno);
    else if (key == "output.dir") cfg.output_dir = value;
    else if (key == "output.formats") cfg.output_formats = parse_string_list(value, lineno);
    else fail(lineno, "unknown key '" + key + "'");
  }

  auto line_of = [&key_lines](const std::string& key) {
    auto it = key_lines.find(key);
    return it == key_lines.end() ? 0 : it->second;  // 0: defaulted key
  };
  auto constraint = [&](const std::string& key, const std::string& what) {
    int line = line_of(key);
    std::string where = line > 0 ? "config line " + std::to_string(line) : "config default";
    throw ConfigError(where + " (" + key + "): " + what);
  };

  if (cfg.domain_n < 1 || cfg.domain_n > 3) constraint("domain.n", "n must be 1, 2 or 3");
  if (cfg.domain_modes < 1) constraint("domain.modes", "modes must be >= 1");
  if (!(cfg.domain_length > 0.0)) constraint("domain.length", "length must be positive");
  if (!(cfg.physics_eta > 0.0)) constraint("physics.eta", "eta must be positive");
  if (cfg.physics_f != "zero" && cfg.physics_f != "damped_power" && cfg.physics_f != "sine")
    constraint("physics.f", "unknown nonlinearity '" + cfg.physics_f + "'");
  {
    // subcriticality: 1 < rho < n/(n-2); below n = 3 the bound is vacuous and
    // the n = 3 value is enforced instead
    const int n_eff = std::max(cfg.domain_n, 3);
    const double rho_max = static_cast<double>(n_eff) / (n_eff - 2);
    if (!(cfg.physics_rho > 1.0 && cfg.physics_rho < rho_max))
      constraint("physics.rho", "subcriticality requires 1 < rho < n/(n-2) = " +
                                    fmt17(rho_max) + " (n taken as max(domain.n, 3))");
  }
  if (cfg.physics_dealias != "auto" && cfg.physics_dealias != "on" && cfg.physics_dealias != "off")
    constraint("physics.dealias", "expected auto, on or off");
  if (cfg.coefficient_family != "constant" && cfg.coefficient_family != "sinusoidal" &&
      cfg.coefficient_family != "tabulated")
    constraint("coefficient.family", "unknown family '" + cfg.coefficient_family + "'");
  if (!(cfg.coefficient_a_star > 0.0)) constraint("coefficient.a_star", "a_star must be positive");
  if (cfg.coefficient_family == "sinusoidal" &&
      !(cfg.coefficient_a_star - std::abs(cfg.coefficient_amplitude) > 0.0))
    constraint("coefficient.amplitude", "a_star - |amplitude| must stay positive");
  if (!(cfg.coefficient_epsilon >= 0.0 && cfg.coefficient_epsilon <= 1.0))
    constraint("coefficient.epsilon", "epsilon must lie in [0,1]");
  if (cfg.coefficient_family == "tabulated" && cfg.coefficient_table.empty())
    constraint("coefficient.table", "tabulated family needs a CSV path");
  if (!(cfg.time_dt > 0.0)) constraint("time.dt", "dt must be positive");
  if (!(cfg.time_t1 >= cfg.time_t0)) constraint("time.t1", "t1 must be >= t0");
  if (cfg.time_sample_every < 1) constraint("time.sample_every", "sample_every must be >= 1");
  if (cfg.time_scheme != "strang" && cfg.time_scheme != "rk4_monolithic")
    constraint("time.scheme", "expected strang or rk4_monolithic");
  if (cfg.pullback_windows.empty()) constraint("pullback.windows", "need at least one window");
  for (std::size_t i = 0; i < cfg.pullback_windows.size(); ++i) {
    if (!(cfg.pullback_windows[i] > 0.0))
      constraint("pullback.windows", "windows must be positive");
    if (i > 0 && !(cfg.pullback_windows[i] > cfg.pullback_windows[i - 1]))
      constraint("pullback.windows", "windows must be strictly increasing");
  }
  if (cfg.pullback_samples < 2) constraint("pullback.samples", "samples must be >= 2");
  if (!(cfg.pullback_radius >= 0.0)) constraint("pullback.radius", "radius must be nonnegative");
  if (!(cfg.pullback_decay > 0.5))
    constraint("pullback.decay", "decay must exceed 1/2 for finite regular norms");
  if (cfg.pullback_tol_attr < 0.0) constraint("pullback.tol_attr", "tolerance must be nonnegative");
  for (double e : cfg.sweep_epsilons)
    if (!(e >= 0.0 && e <= 1.0)) constraint("sweep.epsilons", "epsilons must lie in [0,1]");
  for (const auto& f : cfg.output_formats)
    if (f != "csv" && f != "json") constraint("output.formats", "unknown format '" + f + "'");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "domain.n = " << c.domain_n << "\n";
  out << "domain.modes = " << c.domain_modes << "\n";
  out << "domain.length = " << fmt17(c.domain_length) << "\n";
  out << "physics.eta = " << fmt17(c.physics_eta) << "\n";
  out << "physics.f = " << c.physics_f << "\n";
  out << "physics.rho = " << fmt17(c.physics_rho) << "\n";
  out << "physics.dealias = " << c.physics_dealias << "\n";
  out << "coefficient.family = " << c.coefficient_family << "\n";
  out << "coefficient.a_star = " << fmt17(c.coefficient_a_star) << "\n";
  out << "coefficient.amplitude = " << fmt17(c.coefficient_amplitude) << "\n";
  out << "coefficient.epsilon = " << fmt17(c.coefficient_epsilon) << "\n";
  if (!c.coefficient_table.empty()) out << "coefficient.table = " << c.coefficient_table << "\n";
  out << "time.dt = " << fmt17(c.time_dt) << "\n";
  out << "time.t0 = " << fmt17(c.time_t0) << "\n";
  out << "time.t1 = " << fmt17(c.time_t1) << "\n";
  out << "time.sample_every = " << c.time_sample_every << "\n";
  out << "time.scheme = " << c.time_scheme << "\n";
  out << "pullback.t_star = " << fmt17(c.pullback_t_star) << "\n";
  out << "pullback.windows = " << join(c.pullback_windows) << "\n";
  out << "pullback.samples = " << c.pullback_samples << "\n";
  out << "pullback.radius = " << fmt17(c.pullback_radius) << "\n";
  out << "pullback.decay = " << fmt17(c.pullback_decay) << "\n";
  out << "pullback.seed = " << c.pullback_seed << "\n";
  out << "pullback.tol_attr = " << fmt17(c.pullback_tol_attr) << "\n";
  out << "sweep.epsilons = " << join(c.sweep_epsilons) << "\n";
  out << "output.dir = " << c.output_dir << "\n";
  out << "output.formats = " << join(c.output_formats) << "\n";
  return out.str();
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return serialize_config(a) == serialize_config(b);
}

}  // namespace kgz
