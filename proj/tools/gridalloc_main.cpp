#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gridalloc/cli.hpp"

namespace {

int emit(const gridalloc::RunOutcome& outcome, const std::string& out_path) {
  if (!outcome.error.empty()) std::cerr << outcome.error << "\n";
  if (!outcome.document.empty()) {
    if (out_path.empty()) {
      std::cout << outcome.document;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) {
        std::cerr << "cannot write output file: " << out_path << "\n";
        return 3;
      }
      out << outcome.document;
    }
  }
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-minimizing allocation of divisible workloads to grid processors"};
  app.require_subcommand(1);

  gridalloc::RunConfig cfg;
  std::string method = "bnb";
  std::string mode = "integer";
  std::uint64_t seed = 0;
  std::int64_t max_units = 0;

  CLI::App* solve = app.add_subcommand("solve", "Compute an allocation for an instance");
  solve->add_option("instance", cfg.instance_path, "Instance document")->required();
  solve->add_option("--method", method, "bnb | greedy | lp-relax")
      ->check(CLI::IsMember({"bnb", "greedy", "lp-relax"}));
  solve->add_option("--mode", mode, "integer | continuous")
      ->check(CLI::IsMember({"integer", "continuous"}));
  solve->add_flag("--strict-eq6", cfg.strict_eq6, "Literal one-source-per-processor rule");
  solve->add_option("--out", cfg.output_path, "Write the report here instead of stdout");

  CLI::App* validate = app.add_subcommand("validate", "Replay an allocation against an instance");
  validate->add_option("instance", cfg.instance_path, "Instance document")->required();
  validate->add_option("allocation", cfg.allocation_path, "Allocation document")->required();
  validate->add_option("--mode", mode, "integer | continuous")
      ->check(CLI::IsMember({"integer", "continuous"}));
  validate->add_flag("--strict-eq6", cfg.strict_eq6, "Literal one-source-per-processor rule");
  validate->add_option("--out", cfg.output_path, "Write the report here instead of stdout");

  CLI::App* oracle = app.add_subcommand("oracle", "Brute-force optimum for a small instance");
  oracle->add_option("instance", cfg.instance_path, "Instance document");
  CLI::Option* seed_opt =
      oracle->add_option("--seed", seed, "Generate and solve the seeded random instance");
  CLI::Option* max_units_opt =
      oracle->add_option("--max-units", max_units, "Total-unit limit (default 24)");
  oracle->add_option("--out", cfg.output_path, "Write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;  // usage problems are input errors
  }

  cfg.mode = mode == "continuous" ? gridalloc::ArithmeticMode::Continuous
                                  : gridalloc::ArithmeticMode::Integer;
  if (method == "greedy") {
    cfg.method = gridalloc::SolveMethod::Greedy;
  } else if (method == "lp-relax") {
    cfg.method = gridalloc::SolveMethod::LpRelax;
  } else {
    cfg.method = gridalloc::SolveMethod::BranchAndBound;
  }

  if (solve->parsed()) {
    cfg.command = gridalloc::Command::Solve;
    return emit(gridalloc::run_solve(cfg), cfg.output_path);
  }
  if (validate->parsed()) {
    cfg.command = gridalloc::Command::Validate;
    return emit(gridalloc::run_validate(cfg), cfg.output_path);
  }
  cfg.command = gridalloc::Command::Oracle;
  if (seed_opt->count() > 0) cfg.seed = seed;
  if (max_units_opt->count() > 0) cfg.oracle_max_units = max_units;
  return emit(gridalloc::run_oracle(cfg), cfg.output_path);
}
