#include <CLI11.hpp>

#include "ddpo/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ddpo: driven/damped parametric oscillator dynamics toolkit"};
  app.require_subcommand(1);

  ddpo::CliOptions opt;

  auto add_common = [&](CLI::App* sub, bool needs_grid_flags) {
    sub->add_option("--config", opt.config_path, "path to the JSON config")->required();
    sub->add_option("--out", opt.out_dir, "output directory (overrides the config)");
    if (needs_grid_flags) {
      sub->add_flag("--oracle", opt.oracle, "also run the direct solver and emit oracle.csv");
      sub->add_flag("--pgm", opt.pgm, "emit a density heatmap as PGM");
    }
    sub->add_flag("--strict", opt.strict, "exit nonzero when a divergence truncates the run");
  };

  auto* classical = app.add_subcommand("classical", "closed-form oscillator trajectories, spectra and response sweeps");
  add_common(classical, false);

  auto* evolve = app.add_subcommand("evolve", "full quantum scenario: flows + wavefunction reconstruction");
  add_common(evolve, true);

  auto* params = app.add_subcommand("params", "parameter flows only (no grid work)");
  add_common(params, false);

  auto* sweep = app.add_subcommand("sweep", "run a list of scenarios (parallel with --jobs)");
  add_common(sweep, true);
  sweep->add_option("--jobs", opt.jobs, "worker threads")->default_val(1);

  auto* verify = app.add_subcommand("verify", "reconstruction vs direct solver check with pass/fail verdict");
  add_common(verify, false);

  CLI11_PARSE(app, argc, argv);

  if (classical->parsed()) return ddpo::cmd_classical(opt);
  if (evolve->parsed()) return ddpo::cmd_evolve(opt);
  if (params->parsed()) return ddpo::cmd_params(opt);
  if (sweep->parsed()) return ddpo::cmd_sweep(opt);
  if (verify->parsed()) return ddpo::cmd_verify(opt);
  return 1;
}
