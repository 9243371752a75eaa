// Acceptance suite: one criterion per invocation (argv[1] = 1..7), or all in
// sequence with no arguments. Prints exactly one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridalloc/branch_bound.hpp"
#include "gridalloc/cli.hpp"
#include "gridalloc/instance.hpp"
#include "gridalloc/milp.hpp"
#include "gridalloc/oracle.hpp"
#include "gridalloc/simplex.hpp"
#include "gridalloc/validator.hpp"
#include "test_util.hpp"

using namespace gridalloc;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

struct Checker {
  bool ok = true;
  std::ostringstream detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      detail << (detail.tellp() > 0 ? "; " : "") << what;
    }
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

RunConfig solve_config(SolveMethod method) {
  RunConfig cfg;
  cfg.command = Command::Solve;
  cfg.instance_path = testutil::fixture_path("reference5x3.json");
  cfg.method = method;
  return cfg;
}

// 1. Golden replay of the published allocation: completion times
//    (100, 129, 174), per-source costs (112, 134, 156), total 402, feasible.
//    Exact match, under one second.
bool criterion1(Checker& c) {
  auto start = Clock::now();
  ProblemInstance inst = testutil::reference_instance();
  Allocation alloc = testutil::reference_allocation(inst);
  FeasibilityReport report = evaluate(inst, alloc);
  c.require(report.feasible, "published allocation must be feasible");
  c.require(report.completion_times ==
                std::vector<Rational>{Rational(100), Rational(129), Rational(174)},
            "completion times must be exactly (100, 129, 174)");
  c.require(report.source_costs ==
                std::vector<Rational>{Rational(112), Rational(134), Rational(156)},
            "per-source costs must be exactly (112, 134, 156)");
  c.require(report.total_cost == Rational(402), "total cost must be exactly 402");
  c.require(seconds_since(start) < 1.0, "must replay in under 1 s");
  return c.ok;
}

// 2. The originally reported headline total (Rs.1457) contradicts the tables;
//    the repository's model-notes document must record the discrepancy and
//    the replayed value 402 must be the ground truth.
bool criterion2(Checker& c) {
  std::string notes;
  try {
    notes = testutil::read_file(std::string(GRIDALLOC_DOCS_DIR) + "/model-notes.md");
  } catch (const std::exception& e) {
    c.require(false, e.what());
    return c.ok;
  }
  c.require(notes.find("1457") != std::string::npos,
            "model notes must mention the reported 1457");
  c.require(notes.find("402") != std::string::npos,
            "model notes must state the derived total 402");
  ProblemInstance inst = testutil::reference_instance();
  Allocation alloc = testutil::reference_allocation(inst);
  c.require(evaluate(inst, alloc).total_cost == Rational(402),
            "replayed total must be 402, not 1457");
  return c.ok;
}

// 3. solve --method bnb on the reference instance: objective exactly 398,
//    proven optimal, under ten seconds; strictly better than the published
//    402.
bool criterion3(Checker& c) {
  auto start = Clock::now();
  RunOutcome outcome = run_solve(solve_config(SolveMethod::BranchAndBound));
  double elapsed = seconds_since(start);
  c.require(outcome.exit_code == 0, "exit code must be 0");
  if (outcome.document.empty()) {
    c.require(false, "no report produced");
    return c.ok;
  }
  json doc = json::parse(outcome.document);
  c.require(doc["status"] == "Optimal", "status must be Optimal");
  c.require(doc["objective"].is_number_integer() && doc["objective"] == 398,
            "objective must be exactly the integer 398");
  c.require(doc["search_stats"]["proven_optimal"] == true, "optimality must be proven");
  c.require(398 < 402, "strictly better than the published allocation");
  c.require(elapsed < 10.0, "must solve in under 10 s");
  return c.ok;
}

// 4. solve --method lp-relax on the reference instance: objective 398 within
//    1e-6, under one second.
bool criterion4(Checker& c) {
  auto start = Clock::now();
  RunOutcome outcome = run_solve(solve_config(SolveMethod::LpRelax));
  double elapsed = seconds_since(start);
  c.require(outcome.exit_code == 0, "exit code must be 0");
  if (outcome.document.empty()) {
    c.require(false, "no report produced");
    return c.ok;
  }
  json doc = json::parse(outcome.document);
  double objective = doc["objective"].get<double>();
  std::ostringstream msg;
  msg << "relaxation objective must be 398 within 1e-6 (solver returned " << objective
      << "; the relaxation's true optimum is 397: the 398 cheapest-fill bound uses "
         "floored unit capacities, which the continuous model is not bound by)";
  c.require(std::abs(objective - 398.0) <= 1e-6, msg.str());
  c.require(elapsed < 1.0, "must solve in under 1 s");
  return c.ok;
}

// 5. On 100 seeded random instances the solver and the independent oracle
//    agree on feasibility and, when feasible, on the exact objective; under
//    60 seconds total.
bool criterion5(Checker& c) {
  auto start = Clock::now();
  int feasible = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    ProblemInstance inst = random_instance(seed);
    OracleResult reference = oracle_solve(inst);
    if (reference.status == OracleStatus::LimitExceeded) {
      c.require(false, "oracle exceeded limits on seed " + std::to_string(seed));
      return c.ok;
    }
    MilpModel model = build_milp(inst, ArithmeticMode::Integer);
    BnbResult solver = solve_milp(model, inst, greedy_allocate(inst));
    if (reference.status == OracleStatus::Optimal) {
      ++feasible;
      if (solver.solution.status != MilpStatus::Optimal ||
          solver.solution.objective_value != reference.objective) {
        c.require(false, "disagreement on seed " + std::to_string(seed));
        return c.ok;
      }
    } else if (solver.solution.status != MilpStatus::Infeasible) {
      c.require(false, "solver missed infeasibility on seed " + std::to_string(seed));
      return c.ok;
    }
  }
  c.require(feasible > 0, "suite must contain feasible instances");
  c.require(seconds_since(start) < 60.0, "equivalence suite must finish in under 60 s");
  return c.ok;
}

// 6. Strict one-source-per-processor mode reports the published allocation
//    infeasible with a violation on P5 (it serves S1, S2 and S3).
bool criterion6(Checker& c) {
  RunConfig cfg;
  cfg.command = Command::Validate;
  cfg.instance_path = testutil::fixture_path("reference5x3.json");
  cfg.allocation_path = testutil::fixture_path("reference5x3-allocation.json");
  cfg.strict_eq6 = true;
  RunOutcome outcome = run_validate(cfg);
  c.require(outcome.exit_code == 2, "exit code must be 2");
  json doc = json::parse(outcome.document);
  c.require(doc["feasible"] == false, "must be infeasible under the strict rule");
  bool p5 = false;
  for (const auto& v : doc["violations"]) p5 = p5 || v["constraint"] == "assignment:P5";
  c.require(p5, "violations must name assignment:P5");
  return c.ok;
}

// 7. Property bundle: mutation detection, LP certificates at 1e-9, the
//    lp-relax <= bnb <= greedy bound chain, cost-scaling argmin invariance,
//    and byte-identical repeated reports.
bool criterion7(Checker& c) {
  ProblemInstance inst = testutil::reference_instance();
  Allocation published = testutil::reference_allocation(inst);

  {  // constraint-mutation detection with correct labels
    Allocation a = published;
    a.amounts[0][0] = Rational(19);
    FeasibilityReport r = evaluate(inst, a);
    bool conservation = false;
    bool deadline = false;
    for (const Violation& v : r.violations) {
      conservation = conservation || v.constraint == "conservation:S1";
      deadline = deadline || v.constraint == "deadline:S1";
    }
    c.require(!r.feasible && conservation && deadline, "mutation detection (conservation+deadline)");

    Allocation b = published;
    b.amounts[1][4] = Rational(19);
    b.amounts[1][3] = Rational(9);
    FeasibilityReport rb = evaluate(inst, b);
    c.require(!rb.feasible && rb.violations.size() == 1 &&
                  rb.violations[0].constraint == "budget:S2",
              "mutation detection (budget)");

    Allocation d = published;
    d.amounts[2][1] = Rational(6);  // P2 busy becomes 64 > 60
    d.amounts[2][2] = Rational(8);
    FeasibilityReport rd = evaluate(inst, d);
    bool availability = false;
    for (const Violation& v : rd.violations) {
      availability = availability || v.constraint == "availability:P2";
    }
    c.require(!rd.feasible && availability, "mutation detection (availability)");
  }

  {  // LP certificate at tau = 1e-9
    MilpModel relaxed = lp_relaxation(build_milp(inst, ArithmeticMode::Integer));
    LpSolution sol = solve_lp(relaxed);
    c.require(sol.status == LpStatus::Optimal, "relaxation must solve");
    c.require(check_certificate(relaxed, sol).ok, "certificate must pass");
    LpSolution lied = sol;
    lied.objective += 1.0;
    c.require(check_certificate(relaxed, lied).reason == "ObjectiveMismatch",
              "misreported objective must be caught");
    LpSolution bent = sol;
    if (!bent.values.empty()) bent.values[0] += 1e-5;
    c.require(!check_certificate(relaxed, bent).ok, "perturbed solution must be rejected");
  }

  {  // bound chain on the reference instance and random feasible ones
    MilpModel model = build_milp(inst, ArithmeticMode::Integer);
    LpSolution relax = solve_lp(lp_relaxation(model));
    BnbResult exact = solve_milp(model, inst, greedy_allocate(inst));
    c.require(relax.status == LpStatus::Optimal && exact.solution.status == MilpStatus::Optimal,
              "reference must solve");
    c.require(relax.objective <= exact.solution.objective_value.to_double() + 1e-6,
              "lp-relax <= bnb on the reference");
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      ProblemInstance rnd = random_instance(seed);
      MilpModel rnd_model = build_milp(rnd, ArithmeticMode::Integer);
      std::optional<Allocation> heuristic = greedy_allocate(rnd);
      BnbResult bnb = solve_milp(rnd_model, rnd, heuristic);
      if (bnb.solution.status != MilpStatus::Optimal) continue;
      LpSolution lp = solve_lp(lp_relaxation(rnd_model));
      c.require(lp.status == LpStatus::Optimal, "relaxation of feasible instance must solve");
      c.require(lp.objective <= bnb.solution.objective_value.to_double() + 1e-6,
                "lp-relax <= bnb on seed " + std::to_string(seed));
      if (heuristic) {
        c.require(bnb.solution.objective_value <= evaluate(rnd, *heuristic).total_cost,
                  "bnb <= greedy on seed " + std::to_string(seed));
      }
    }
  }

  {  // cost scaling: objective scales by k, argmin unchanged (budgets are in
     // the same currency and scale along, keeping the feasible set fixed)
    MilpModel model = build_milp(inst, ArithmeticMode::Integer);
    BnbResult base = solve_milp(model, inst, greedy_allocate(inst));
    ProblemInstance scaled = inst;
    for (ProcessorSpec& p : scaled.processors) p.cost_per_unit *= Rational(3);
    for (SourceSpec& s : scaled.sources) s.budget *= Rational(3);
    MilpModel scaled_model = build_milp(scaled, ArithmeticMode::Integer);
    BnbResult tripled = solve_milp(scaled_model, scaled, greedy_allocate(scaled));
    c.require(tripled.solution.status == MilpStatus::Optimal &&
                  tripled.solution.objective_value == Rational(3) * base.solution.objective_value,
              "objective must scale exactly by 3");
    // Argmin-set invariance via cross-membership (optima are not unique).
    Allocation base_alloc = extract_allocation(base.solution, inst);
    Allocation tri_alloc = extract_allocation(tripled.solution, scaled);
    c.require(evaluate(inst, tri_alloc).feasible &&
                  evaluate(inst, tri_alloc).total_cost == base.solution.objective_value,
              "scaled optimum must stay optimal in the unscaled problem");
    c.require(evaluate(scaled, base_alloc).feasible &&
                  evaluate(scaled, base_alloc).total_cost == tripled.solution.objective_value,
              "unscaled optimum must stay optimal in the scaled problem");
  }

  {  // byte-identical reports
    RunOutcome a = run_solve(solve_config(SolveMethod::BranchAndBound));
    RunOutcome b = run_solve(solve_config(SolveMethod::BranchAndBound));
    c.require(a.document == b.document, "solve reports must be byte-identical");
    RunConfig vcfg;
    vcfg.command = Command::Validate;
    vcfg.instance_path = testutil::fixture_path("reference5x3.json");
    vcfg.allocation_path = testutil::fixture_path("reference5x3-allocation.json");
    c.require(run_validate(vcfg).document == run_validate(vcfg).document,
              "validate reports must be byte-identical");
  }
  return c.ok;
}

const char* kDescriptions[] = {
    "golden replay of the published allocation (times 100/129/174, costs 112/134/156, total 402)",
    "reported-total discrepancy (1457 vs 402) documented in model notes",
    "branch-and-bound proves objective 398 on the reference instance (< 10 s)",
    "lp relaxation objective equals 398 within 1e-6 (< 1 s)",
    "solver/oracle equivalence on 100 seeded instances (< 60 s)",
    "strict assignment mode rejects the published allocation on P5",
    "property suites: mutation detection, certificates, bound chain, scaling, byte-stable reports",
};

bool run_criterion(int number) {
  using Fn = bool (*)(Checker&);
  static const Fn fns[] = {criterion1, criterion2, criterion3, criterion4,
                           criterion5, criterion6, criterion7};
  Checker checker;
  auto start = Clock::now();
  bool ok = false;
  try {
    ok = fns[number - 1](checker);
  } catch (const std::exception& e) {
    checker.ok = false;
    checker.detail << "exception: " << e.what();
  }
  double elapsed = seconds_since(start);
  std::printf("%s: criterion %d — %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", number,
              kDescriptions[number - 1], elapsed, checker.detail.tellp() > 0 ? " — " : "",
              checker.detail.str().c_str());
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) {
    int number = std::atoi(argv[1]);
    if (number < 1 || number > 7) {
      std::fprintf(stderr, "usage: %s [criterion 1-7]\n", argv[0]);
      return 2;
    }
    return run_criterion(number) ? 0 : 1;
  }
  bool all_ok = true;
  for (int number = 1; number <= 7; ++number) all_ok = run_criterion(number) && all_ok;
  return all_ok ? 0 : 1;
}
