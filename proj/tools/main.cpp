#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace hmpp::cli;
  CLI::App app{"Hybrid marked point process simulator"};
  app.require_subcommand(1);
  const unsigned env_workers = default_workers();

  SimulateOptions sim;
  sim.workers = env_workers;
  auto* simulate = app.add_subcommand("simulate", "Simulate one trace per seed");
  simulate->add_option("config", sim.config, "Model configuration (JSON)")->required()->check(CLI::ExistingFile);
  simulate->add_option("--seeds", sim.seeds, "Seed, list (1,2,3) or inclusive range (1..100)");
  simulate->add_option("--horizon", sim.horizon, "Override run.horizon");
  simulate->add_option("-o,--output", sim.output, "Trace file for a single seed");
  simulate->add_option("--out-dir", sim.out_dir, "Directory for sweep traces");
  simulate->add_option("-j,--workers", sim.workers, "Worker threads (default: HMPP_WORKERS or 1)");
  simulate->add_flag("--json", sim.json, "Machine-readable summary");

  CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "Report which assumptions hold");
  check_cmd->add_option("config", check.config)->required()->check(CLI::ExistingFile);
  check_cmd->add_option("--horizon", check.horizon, "Horizon for the initial-condition grid");
  check_cmd->add_flag("--json", check.json);

  ValidateOptions val;
  auto* validate = app.add_subcommand("validate", "Goodness-of-fit tests for traces");
  validate->add_option("config", val.config)->required()->check(CLI::ExistingFile);
  validate->add_option("traces", val.traces)->required()->check(CLI::ExistingFile);
  validate->add_option("--alpha", val.alpha, "Override validate.alpha");
  validate->add_flag("--json", val.json);

  CoupleOptions couple;
  couple.workers = env_workers;
  auto* couple_cmd = app.add_subcommand("couple", "Run a model coupled under a dominating model");
  couple_cmd->add_option("config", couple.config, "Dominated model")->required()->check(CLI::ExistingFile);
  couple_cmd->add_option("dominating", couple.dominating, "Dominating model")
      ->required()
      ->check(CLI::ExistingFile);
  couple_cmd->add_option("--seeds", couple.seeds);
  couple_cmd->add_option("--horizon", couple.horizon);
  couple_cmd->add_option("-j,--workers", couple.workers);
  couple_cmd->add_flag("--json", couple.json);

  IntensityPathOptions path;
  auto* path_cmd = app.add_subcommand("intensity-path", "Event intensities on a time grid, as CSV");
  path_cmd->add_option("config", path.config)->required()->check(CLI::ExistingFile);
  path_cmd->add_option("trace", path.trace)->required()->check(CLI::ExistingFile);
  path_cmd->add_option("--points", path.points, "Grid points on (0, horizon]");
  path_cmd->add_option("-o,--output", path.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (*simulate) return cmd_simulate(sim, std::cout, std::cerr);
  if (*check_cmd) return cmd_check(check, std::cout, std::cerr);
  if (*validate) return cmd_validate(val, std::cout, std::cerr);
  if (*couple_cmd) return cmd_couple(couple, std::cout, std::cerr);
  return cmd_intensity_path(path, std::cout, std::cerr);
}
