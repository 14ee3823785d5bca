#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "kgz/config.hpp"
#include "kgz/run.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_subcommand(CLI::App& app, const std::string& name, const std::string& desc,
                    CommonOptions& opts, int& exit_code) {
  CLI::App* sub = app.add_subcommand(name, desc);
  sub->add_option("--config", opts.config_path, "run configuration file")->required();
  sub->add_option("--out", opts.out_dir, "output directory (overrides output.dir)");
  sub->add_option("--seed", opts.seed, "seed override (overrides pullback.seed)");
  sub->callback([&opts, sub, name, &exit_code]() {
    kgz::RunConfig cfg = kgz::load_config(opts.config_path);
    if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
    if (sub->count("--seed") > 0) cfg.pullback_seed = opts.seed;
    exit_code = kgz::run_subcommand(name, cfg);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral Galerkin simulator and verification toolkit for a "
               "non-autonomous damped Klein-Gordon-Zakharov system"};
  app.require_subcommand(1);

  CommonOptions opts;
  int exit_code = kgz::kExitOk;
  add_subcommand(app, "simulate", "integrate and write the energy ledger", opts, exit_code);
  add_subcommand(app, "operator-audit", "operator identities, spectrum and resolvent scan", opts,
                 exit_code);
  add_subcommand(app, "energy-audit", "dissipation-identity residual audit", opts, exit_code);
  add_subcommand(app, "linear-decay", "exponential decay fits of the linear process", opts,
                 exit_code);
  add_subcommand(app, "pullback", "pullback attractor estimation", opts, exit_code);
  add_subcommand(app, "semicontinuity", "eps -> 0 convergence experiment", opts, exit_code);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kgz::kExitValidation;
  } catch (const kgz::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kgz::kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kgz::kExitValidation;
  }
  return exit_code;
}
