#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sigmaflow_cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace sigmaflow::cli;
  CLI::App app{"sigmaflow: inverse sigma_k quotient flow on flat complex tori"};
  app.require_subcommand(1);

  std::string config, out, snapshot;
  std::uint64_t seed = 42;
  std::size_t trials = 10000;
  bool corrupt = false;

  auto* run = app.add_subcommand("run", "integrate the flow and write CSV/JSON/snapshot");
  run->add_option("--config", config, "configuration file")->required();
  run->add_option("--out", out, "output directory");

  auto* cone = app.add_subcommand("check-cone", "cone margin of chi0");
  cone->add_option("--config", config, "configuration file")->required();

  auto* self = app.add_subcommand("selftest", "randomized inequality suite");
  self->add_option("--seed", seed, "suite seed")->capture_default_str();
  self->add_option("--trials", trials, "trials per check")->capture_default_str();
  self->add_option("--out", out, "write the JSON report here");
  self->add_flag("--debug-corrupt-tolerance", corrupt)->group("");

  auto* func = app.add_subcommand("functional", "evaluate energy functionals on a snapshot");
  func->add_option("--config", config, "configuration file")->required();
  func->add_option("--snapshot", snapshot, "potential snapshot (default: config key)");
  func->add_option("--out", out, "write the JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  if (*run) return cmd_run(config, out, std::cout, std::cerr);
  if (*cone) return cmd_check_cone(config, std::cout, std::cerr);
  if (*self) return cmd_selftest(seed, trials, out, corrupt, std::cout, std::cerr);
  return cmd_functional(config, snapshot, out, std::cout, std::cerr);
}
