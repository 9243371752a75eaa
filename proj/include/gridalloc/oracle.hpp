#pragma once

#include <cstdint>
#include <optional>

#include "gridalloc/instance.hpp"

namespace gridalloc {

struct OracleLimits {
  std::int64_t max_total_units = 24;
  std::size_t max_processors = 5;
  long node_budget = 20'000'000;
};

enum class OracleStatus { Optimal, Infeasible, LimitExceeded };

struct OracleResult {
  OracleStatus status = OracleStatus::Infeasible;
  Rational objective;
  Allocation allocation;
  long nodes = 0;
};

// Exhaustive depth-first enumeration of integer allocations in (source,
// processor) index order. Prunes only on (a) constraint violations of the
// partial assignment and (b) committed cost plus the cheapest-fill completion
// bound reaching the best known cost. Exists to certify the main solver, so
// it shares nothing with the simplex/branch-and-bound path beyond the domain
// types and the validator.
OracleResult oracle_solve(const ProblemInstance& inst, const OracleLimits& limits = {});

// Fill the total demand with unit capacities sorted by cost, ignoring
// deadlines and budgets; a valid lower bound on any feasible allocation's
// cost. nullopt when total capacity cannot cover the demand (no feasible
// allocation exists at all).
std::optional<Rational> cost_lower_bound(const ProblemInstance& inst);

// Deterministic generator for the solver-equivalence suite: m in [1,3],
// n in [1,4], integer t,c in [1,5], z in {0,1}, s in [5,40], workloads in
// [3,10] redrawn until their sum is at most 20, deadline and budget in
// [w, 6w]. The same seed always yields the same instance.
ProblemInstance random_instance(std::uint64_t seed);

}  // namespace gridalloc
