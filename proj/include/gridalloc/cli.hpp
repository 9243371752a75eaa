#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gridalloc/validator.hpp"

namespace gridalloc {

enum class Command { Solve, Validate, Oracle };
enum class SolveMethod { BranchAndBound, Greedy, LpRelax };

struct RunConfig {
  Command command = Command::Solve;
  std::string instance_path;
  std::string allocation_path;  // validate only
  SolveMethod method = SolveMethod::BranchAndBound;
  ArithmeticMode mode = ArithmeticMode::Integer;
  bool strict_eq6 = false;
  std::string output_path;  // empty = stdout
  std::optional<std::uint64_t> seed;            // oracle: generate instead of reading a file
  std::optional<std::int64_t> oracle_max_units; // oracle: override the unit limit
};

// Exit codes are part of the public contract:
//   0 optimal/feasible, 2 infeasible, 3 input error, 4 limit exceeded.
struct RunOutcome {
  int exit_code = 0;
  std::string document;  // report JSON (empty on input errors)
  std::string error;     // human-readable message for stderr
};

RunOutcome run_solve(const RunConfig& cfg);
RunOutcome run_validate(const RunConfig& cfg);
RunOutcome run_oracle(const RunConfig& cfg);

}  // namespace gridalloc
