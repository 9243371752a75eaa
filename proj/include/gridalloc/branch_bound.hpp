#pragma once

#include <optional>

#include "gridalloc/milp.hpp"
#include "gridalloc/simplex.hpp"

namespace gridalloc {

struct SearchStats {
  long nodes_explored = 0;
  long incumbent_updates = 0;
  double best_bound = 0.0;  // global lower bound at termination
  bool proven_optimal = false;
};

struct BnbOptions {
  long node_limit = 500'000;
};

struct BnbResult {
  MilpSolution solution;
  SearchStats stats;
};

// Depth-first branch-and-bound over the LP relaxation: branch on the most
// fractional alpha variable first, then fractional x, ties to the lowest
// (source, processor) index, up-branch explored first. Integral candidates
// are rounded and re-validated in exact arithmetic before they may become the
// incumbent, so an Optimal result always replays cleanly. Deterministic for a
// fixed model. On node-limit exhaustion the best incumbent is returned with
// proven_optimal = false (status NodeLimit when there is none).
BnbResult solve_milp(const MilpModel& model, const ProblemInstance& inst,
                     const std::optional<Allocation>& warm_start = std::nullopt,
                     const BnbOptions& options = {});

// Reads the alpha block of an Optimal solution back into matrix form.
// Throws std::logic_error if a value is further than 1e-6 from an integer
// while the model is in integer mode.
Allocation extract_allocation(const MilpSolution& sol, const ProblemInstance& inst,
                              ArithmeticMode mode = ArithmeticMode::Integer);

// Feasibility heuristic used to seed the incumbent: sources in ascending
// deadline order; for each source, processors in ascending (cost, time, id)
// order; each processor receives the largest unit count that still lets the
// rest of the workload finish on the remaining processors both time-wise
// (fastest-first fill) and money-wise (cheapest-first fill). Returns nullopt
// when a source cannot be fully placed or the result fails exact validation.
std::optional<Allocation> greedy_allocate(const ProblemInstance& inst);

}  // namespace gridalloc
