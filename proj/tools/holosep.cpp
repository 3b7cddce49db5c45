#include <iostream>

#include <CLI11.hpp>

#include "holosep/cli.hpp"
#include "holosep/errors.hpp"

int main(int argc, char** argv) {
  using namespace holosep;
  CLI::App app{"Holonomic/dynamical decomposition of subspace time evolution"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string case_name;
  std::uint64_t seed = 0;
  cli::Overrides overrides;
  cli::DemoOptions demo;

  auto add_grid_flags = [&](CLI::App* sub) {
    sub->add_option("--steps", overrides.steps, "Number of time steps (overrides config)");
    sub->add_option("--tau", overrides.tau, "Final time (overrides config)");
  };

  auto* decompose = app.add_subcommand("decompose", "Write the decomposition report as JSON");
  decompose->add_option("--config", config_path, "Run configuration (JSON)")->required();
  decompose->add_option("--out", out_path, "Report path (stdout when omitted)");
  decompose->add_option("--seed", overrides.seed, "Seed for randomized descriptors");
  add_grid_flags(decompose);

  auto* demo_cmd = app.add_subcommand("demo", "Compare a Lambda-system case with its closed form");
  demo_cmd->add_option("--case", case_name, "Case: i, ii or iii")->required();
  demo_cmd->add_option("--steps", demo.steps, "Number of time steps");
  demo_cmd->add_option("--tau", demo.tau, "Pulse duration");
  demo_cmd->add_option("--delta", demo.delta, "Detuning");
  demo_cmd->add_option("--omega0", demo.omega0, "Rabi amplitude");
  demo_cmd->add_option("--eta", demo.eta, "Case (iii) mixing angle");

  auto* separability = app.add_subcommand("separability", "Classify separability; exit 1 if not separable");
  separability->add_option("--config", config_path, "Run configuration (JSON)")->required();
  separability->add_option("--seed", overrides.seed, "Seed for randomized descriptors");
  add_grid_flags(separability);

  auto* export_cmd = app.add_subcommand("export", "Write A, K, W, O trajectories as CSV");
  export_cmd->add_option("--config", config_path, "Run configuration (JSON)")->required();
  export_cmd->add_option("--out", out_path, "CSV path")->required();
  export_cmd->add_option("--seed", overrides.seed, "Seed for randomized descriptors");
  add_grid_flags(export_cmd);

  auto* gauge = app.add_subcommand("gauge-check", "Rerun under a random closed gauge and compare");
  gauge->add_option("--config", config_path, "Run configuration (JSON)")->required();
  gauge->add_option("--seed", seed, "Seed of the random gauge");
  add_grid_flags(gauge);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;
  }

  if (decompose->parsed()) {
    return cli::cmd_decompose(config_path, out_path, overrides, std::cout, std::cerr);
  }
  if (demo_cmd->parsed()) {
    try {
      return cli::cmd_demo(cli::parse_case(case_name), demo, std::cout, std::cerr);
    } catch (const Error& e) {
      std::cerr << e.what() << "\n";
      return cli::kExitConfig;
    }
  }
  if (separability->parsed()) {
    return cli::cmd_separability(config_path, overrides, std::cout, std::cerr);
  }
  if (export_cmd->parsed()) {
    return cli::cmd_export(config_path, out_path, overrides, std::cout, std::cerr);
  }
  return cli::cmd_gauge_check(config_path, seed, overrides, std::cout, std::cerr);
}
