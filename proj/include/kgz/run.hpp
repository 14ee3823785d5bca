#pragma once

#include <memory>
#include <string>

#include "kgz/attractor.hpp"
#include "kgz/config.hpp"
#include "kgz/energy.hpp"
#include "kgz/evolution.hpp"

namespace kgz {

/// Exit codes: 0 success, 2 failed validation / usage, 3 failed scientific
/// checks inside audits.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitCheckFailed = 3;

std::shared_ptr<const Domain> domain_from_config(const RunConfig& cfg);
Physics physics_from_config(const RunConfig& cfg);
SchemeConfig scheme_from_config(const RunConfig& cfg);
PullbackSchedule schedule_from_config(const RunConfig& cfg);

/// Dispatches one of: simulate, operator-audit, energy-audit, linear-decay,
/// pullback, semicontinuity. Writes CSV/JSON artifacts into cfg.output_dir.
int run_subcommand(const std::string& name, const RunConfig& cfg);

}  // namespace kgz
