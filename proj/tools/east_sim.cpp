// east-sim: command-line front end for the EAST power-control simulator.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "east/cli.hpp"

namespace {

void add_common(CLI::App* cmd, east::cli::Invocation& inv, std::string& config) {
  cmd->add_option("-c,--config", config, "config file (key = value lines)");
  cmd->add_option("-o,--out", inv.out_dir, "output directory");
  cmd->add_option("-s,--set", inv.overrides, "override a config key, KEY=VALUE (repeatable)");
  cmd->add_option("--seed", inv.seed, "root seed (overrides EAST_SEED and the config)");
  cmd->add_option("--figure-round", inv.figure_round, "round used for per-node figure series");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temperature-aware transmission power control simulator"};
  app.require_subcommand(1);

  east::cli::Invocation inv;
  std::string config;
  std::filesystem::path report_dir;

  auto* run = app.add_subcommand("run", "run one simulation and write CSV outputs");
  add_common(run, inv, config);

  auto* compare = app.add_subcommand("compare", "run EAST and the classical baseline side by side");
  add_common(compare, inv, config);
  compare->add_option("--east-set", inv.east_overrides, "override applied to the EAST run only");
  compare->add_option("--classical-set", inv.classical_overrides,
                      "override applied to the classical run only");

  auto* sweep = app.add_subcommand("sweep", "one run per value of a numeric config key");
  add_common(sweep, inv, config);
  sweep->add_option("-k,--key", inv.sweep_key, "config key to sweep")->required();
  sweep->add_option("-v,--values", inv.sweep_values, "values, comma separated")
      ->required()
      ->delimiter(',');
  sweep->add_option("-j,--jobs", inv.jobs, "parallel runs");

  auto* report = app.add_subcommand("report", "render summary.csv of a run as a table");
  report->add_option("dir", report_dir, "run output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : east::cli::kConfigError;
  }
  if (!config.empty()) inv.config_path = config;

  if (*run) return east::cli::cmd_run(inv, std::cout, std::cerr);
  if (*compare) return east::cli::cmd_compare(inv, std::cout, std::cerr);
  if (*sweep) return east::cli::cmd_sweep(inv, std::cout, std::cerr);
  return east::cli::cmd_report(report_dir, std::cout, std::cerr);
}
