#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kgz {

/// Raised on any config problem; message carries the offending line.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat "section.key = value" run configuration with documented defaults.
struct RunConfig {
  // domain
  int domain_n = 1;
  int domain_modes = 16;
  double domain_length = 3.14159265358979323846;
  // physics
  double physics_eta = 1.0;
  std::string physics_f = "damped_power";
  double physics_rho = 2.0;
  std::string physics_dealias = "auto";  // auto | on | off
  // coefficient
  std::string coefficient_family = "sinusoidal";
  double coefficient_a_star = 2.0;
  double coefficient_amplitude = 1.0;
  double coefficient_epsilon = 0.1;
  std::string coefficient_table;  // CSV path for the tabulated family
  // time
  double time_dt = 1e-3;
  double time_t0 = 0.0;
  double time_t1 = 1.0;
  long time_sample_every = 10;
  std::string time_scheme = "strang";  // strang | rk4_monolithic
  // pullback
  double pullback_t_star = 0.0;
  std::vector<double> pullback_windows = {5.0, 10.0, 20.0, 40.0};
  int pullback_samples = 12;
  double pullback_radius = 1.0;
  double pullback_decay = 1.5;
  std::uint64_t pullback_seed = 1;
  double pullback_tol_attr = 0.0;  // 0: default 1e-6 * radius
  // sweep
  std::vector<double> sweep_epsilons = {0.1, 0.05, 0.025};
  // output
  std::string output_dir = "out";
  std::vector<std::string> output_formats = {"csv", "json"};

  bool dealias_effective() const;
};

/// Parses and validates; unknown keys, type mismatches and constraint
/// violations throw ConfigError naming the offending line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical serialization; parse(serialize(cfg)) == cfg.
std::string serialize_config(const RunConfig& cfg);

bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace kgz
