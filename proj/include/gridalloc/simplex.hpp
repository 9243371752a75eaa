#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridalloc/milp.hpp"

namespace gridalloc {

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

const char* lp_status_name(LpStatus status);

// Basis certificate in the standard form the checker can rebuild from the
// model alone: columns 0..n-1 are the model variables, column n+r is the
// slack of constraint row r (+1 for <= and =, -1 for >=). Artificial columns
// never appear in a returned optimal basis for independent rows; if one does
// (redundant row), it is encoded as n+R+row and check_certificate rejects it.
struct LpBasis {
  std::vector<int> basic;                    // one column id per row
  std::vector<std::uint8_t> at_upper;        // per standard column, nonbasic rest position
};

struct LpSolution {
  LpStatus status = LpStatus::NumericalFailure;
  std::vector<double> values;  // model variables only
  double objective = 0.0;
  double phase1_infeasibility = 0.0;  // >= 0; zero iff the model is feasible
  long iterations = 0;
  LpBasis basis;
};

// Feasibility / reduced-cost tolerance (absolute). Instance data are small
// integers and decimals, so this sits far below unit granularity.
inline constexpr double kLpTolerance = 1e-9;

// Two-phase bounded-variable primal simplex on a dense tableau. Dantzig
// pricing, switching permanently to Bland's rule after 50 iterations without
// objective improvement; deterministic tie-breaks throughout. Requires every
// variable continuous with a finite lower bound.
LpSolution solve_lp(const MilpModel& model);

// Same engine with per-variable bound overrides; variable kinds are ignored
// (used for branch-and-bound subproblems).
LpSolution solve_lp_with_bounds(const MilpModel& model, const std::vector<double>& lower,
                                const std::vector<double>& upper);

struct CertificateCheck {
  bool ok = false;
  std::string reason;  // empty when ok; otherwise names the violated row/variable
};

// Independent optimality audit of an Optimal solution: every constraint and
// bound within tolerance, objective consistent, and the dual prices implied
// by the returned basis give reduced costs with the right signs (which is
// complementary slackness in bounded form). Rebuilds everything from the
// model; shares no state with the solver.
CertificateCheck check_certificate(const MilpModel& model, const LpSolution& sol);

}  // namespace gridalloc
