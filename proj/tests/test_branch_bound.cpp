#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gridalloc/branch_bound.hpp"
#include "gridalloc/oracle.hpp"
#include "gridalloc/simplex.hpp"
#include "gridalloc/validator.hpp"
#include "test_util.hpp"

using namespace gridalloc;

TEST_CASE("reference instance solves to the proven optimum 398") {
  ProblemInstance inst = testutil::reference_instance();
  MilpModel model = build_milp(inst, ArithmeticMode::Integer);

  // The incumbent heuristic must not affect the result either way.
  for (bool warm : {false, true}) {
    std::optional<Allocation> seed = warm ? greedy_allocate(inst) : std::nullopt;
    BnbResult result = solve_milp(model, inst, seed);
    REQUIRE(result.solution.status == MilpStatus::Optimal);
    CHECK(result.solution.objective_value == Rational(398));
    CHECK(result.stats.proven_optimal);
    CHECK(result.stats.best_bound == doctest::Approx(398.0));
    CHECK(result.stats.best_bound <= result.solution.objective_value.to_double() + 1e-9);

    Allocation alloc = extract_allocation(result.solution, inst);
    FeasibilityReport report = evaluate(inst, alloc);
    CHECK(report.feasible);
    CHECK(report.total_cost == Rational(398));
    // Conservation row sums.
    Rational sums[3] = {Rational(0), Rational(0), Rational(0)};
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 5; ++j) sums[i] += alloc.amounts[i][j];
    }
    CHECK(sums[0] == Rational(30));
    CHECK(sums[1] == Rational(35));
    CHECK(sums[2] == Rational(45));

    // x is one exactly where work is assigned.
    for (const LinkCell& cell : model.cells) {
      double x = result.solution.values[static_cast<std::size_t>(cell.x_var)];
      double a = result.solution.values[static_cast<std::size_t>(cell.alpha_var)];
      CHECK(x == (a > 1e-6 ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("trivial single-cell instance") {
  ProblemInstance inst = testutil::tiny_instance();
  MilpModel model = build_milp(inst, ArithmeticMode::Integer);
  BnbResult result = solve_milp(model, inst);
  REQUIRE(result.solution.status == MilpStatus::Optimal);
  CHECK(result.solution.objective_value == Rational(20));
  Allocation alloc = extract_allocation(result.solution, inst);
  CHECK(alloc.amounts[0][0] == Rational(10));
}

TEST_CASE("one missing rupee makes the trivial instance infeasible") {
  ProblemInstance inst = testutil::tiny_instance();
  inst.sources[0].budget = Rational(19);  // minimum possible cost is 20
  MilpModel model = build_milp(inst, ArithmeticMode::Integer);
  BnbResult result = solve_milp(model, inst);
  CHECK(result.solution.status == MilpStatus::Infeasible);
  CHECK(result.stats.proven_optimal == false);
}

TEST_CASE("strict assignment mode is a restriction: infeasible or no cheaper than 398") {
  ProblemInstance inst = testutil::reference_instance();
  MilpModel strict = build_milp(inst, ArithmeticMode::Integer, true);
  BnbResult result = solve_milp(strict, inst);
  if (result.solution.status == MilpStatus::Optimal) {
    CHECK(result.solution.objective_value >= Rational(398));
    CHECK(evaluate(inst, extract_allocation(result.solution, inst),
                   {ArithmeticMode::Integer, true})
              .feasible);
  } else {
    CHECK(result.solution.status == MilpStatus::Infeasible);
  }
  // The published allocation shares processors, so strict mode rejects it.
  Allocation published = testutil::reference_allocation(inst);
  CHECK(!evaluate(inst, published, {ArithmeticMode::Integer, true}).feasible);
}

TEST_CASE("node limit returns honestly unproven results") {
  ProblemInstance inst = testutil::reference_instance();
  MilpModel model = build_milp(inst, ArithmeticMode::Integer);
  BnbOptions tight;
  tight.node_limit = 1;

  BnbResult bare = solve_milp(model, inst, std::nullopt, tight);
  CHECK(bare.solution.status == MilpStatus::NodeLimit);
  CHECK(!bare.stats.proven_optimal);

  BnbResult seeded = solve_milp(model, inst, testutil::reference_allocation(inst), tight);
  REQUIRE(seeded.solution.status == MilpStatus::Optimal);
  CHECK(seeded.solution.objective_value == Rational(402));
  CHECK(!seeded.stats.proven_optimal);
  CHECK(seeded.stats.best_bound <= seeded.solution.objective_value.to_double() + 1e-9);
}

TEST_CASE("results are reproducible run to run") {
  ProblemInstance inst = testutil::reference_instance();
  MilpModel model = build_milp(inst, ArithmeticMode::Integer);
  BnbResult a = solve_milp(model, inst, greedy_allocate(inst));
  BnbResult b = solve_milp(model, inst, greedy_allocate(inst));
  CHECK(a.stats.nodes_explored == b.stats.nodes_explored);
  CHECK(a.stats.incumbent_updates == b.stats.incumbent_updates);
  CHECK(a.solution.values == b.solution.values);
  CHECK(serialize_allocation(inst, extract_allocation(a.solution, inst)) ==
        serialize_allocation(inst, extract_allocation(b.solution, inst)));
}

TEST_CASE("extract_allocation rejects non-integral values") {
  ProblemInstance inst = testutil::tiny_instance();
  MilpSolution sol;
  sol.status = MilpStatus::Optimal;
  sol.values = {9.5, 1.0};
  CHECK_THROWS_AS(extract_allocation(sol, inst), std::logic_error);
  sol.status = MilpStatus::Infeasible;
  CHECK_THROWS_AS(extract_allocation(sol, inst), std::logic_error);
}

TEST_CASE("continuous mode drops to the relaxation value on the reference instance") {
  ProblemInstance inst = testutil::reference_instance();
  MilpModel model = build_milp(inst, ArithmeticMode::Continuous);
  BnbResult result = solve_milp(model, inst);
  REQUIRE(result.solution.status == MilpStatus::Optimal);
  CHECK(std::abs(result.solution.objective_value.to_double() - 397.0) < 1e-6);
}

TEST_CASE("greedy fills the trivial instance completely") {
  auto alloc = greedy_allocate(testutil::tiny_instance());
  REQUIRE(alloc.has_value());
  CHECK(alloc->amounts[0][0] == Rational(10));
}

TEST_CASE("greedy fails when capacity cannot hold the workload") {
  ProblemInstance inst;
  inst.processors.push_back(testutil::processor("P1", 2, 1, 0, 4));  // 2 units max
  inst.sources.push_back(testutil::source("S1", 5, 5, 5));
  CHECK(!greedy_allocate(inst).has_value());
}

TEST_CASE("greedy splits across processors when lookahead requires it") {
  ProblemInstance inst;
  inst.processors.push_back(testutil::processor("A", 1, 1, 0, 2));
  inst.processors.push_back(testutil::processor("B", 1, 2, 0, 10));
  inst.sources.push_back(testutil::source("S1", 4, 100, 10));
  auto alloc = greedy_allocate(inst);
  REQUIRE(alloc.has_value());
  CHECK(alloc->amounts[0][0] == Rational(2));
  CHECK(alloc->amounts[0][1] == Rational(2));
  CHECK(evaluate(inst, *alloc).feasible);
}

TEST_CASE("greedy strands S2 on the reference instance and reports failure") {
  // Hand execution of the rule: S1 (deadline 100) takes P3:5, P1:20, P5:5,
  // leaving S2 at the final processor P5 needing 21 units costing 105 with
  // only 104 of its budget left. The heuristic therefore fails, and the
  // solver must not depend on it.
  ProblemInstance inst = testutil::reference_instance();
  CHECK(!greedy_allocate(inst).has_value());
}

TEST_CASE("bound chain holds across methods on random instances") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    ProblemInstance inst = random_instance(seed);
    MilpModel model = build_milp(inst, ArithmeticMode::Integer);
    LpSolution relax = solve_lp(lp_relaxation(model));
    BnbResult exact = solve_milp(model, inst, greedy_allocate(inst));
    std::optional<Allocation> heuristic = greedy_allocate(inst);

    if (heuristic) {
      REQUIRE(relax.status == LpStatus::Optimal);
      REQUIRE(exact.solution.status == MilpStatus::Optimal);
      Rational greedy_cost = evaluate(inst, *heuristic).total_cost;
      CHECK(relax.objective <= exact.solution.objective_value.to_double() + 1e-6);
      CHECK(exact.solution.objective_value <= greedy_cost);
    }
    if (exact.solution.status == MilpStatus::Optimal) {
      REQUIRE(relax.status == LpStatus::Optimal);
      CHECK(relax.objective <= exact.solution.objective_value.to_double() + 1e-6);
      // Solver output always replays cleanly.
      CHECK(evaluate(inst, extract_allocation(exact.solution, inst)).feasible);
      CHECK(exact.stats.proven_optimal);
    }
    if (relax.status == LpStatus::Infeasible) {
      CHECK(exact.solution.status == MilpStatus::Infeasible);
      CHECK(!heuristic.has_value());
    }
  }
}

TEST_CASE("cost scaling preserves the argmin and scales the objective") {
  ProblemInstance inst = testutil::reference_instance();
  MilpModel model = build_milp(inst, ArithmeticMode::Integer);
  BnbResult base = solve_milp(model, inst, greedy_allocate(inst));
  REQUIRE(base.solution.status == MilpStatus::Optimal);

  // Budgets are denominated in the same currency, so they scale along with
  // the unit costs; the feasible set is then literally unchanged.
  ProblemInstance scaled = inst;
  for (ProcessorSpec& p : scaled.processors) p.cost_per_unit *= Rational(3);
  for (SourceSpec& s : scaled.sources) s.budget *= Rational(3);
  MilpModel scaled_model = build_milp(scaled, ArithmeticMode::Integer);
  BnbResult tripled = solve_milp(scaled_model, scaled, greedy_allocate(scaled));
  REQUIRE(tripled.solution.status == MilpStatus::Optimal);

  CHECK(tripled.solution.objective_value == Rational(3) * base.solution.objective_value);

  // Argmin invariance: each optimum is optimal for the other problem too
  // (the optimum is not unique, so matrices need not be identical).
  Allocation base_alloc = extract_allocation(base.solution, inst);
  Allocation tripled_alloc = extract_allocation(tripled.solution, scaled);
  CHECK(evaluate(inst, tripled_alloc).feasible);
  CHECK(evaluate(inst, tripled_alloc).total_cost == base.solution.objective_value);
  CHECK(evaluate(scaled, base_alloc).feasible);
  CHECK(evaluate(scaled, base_alloc).total_cost == tripled.solution.objective_value);
}

TEST_CASE("removing a processor never helps; loosening budgets never hurts") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 40 && checked < 12; ++seed) {
    ProblemInstance inst = random_instance(seed);
    if (inst.num_processors() < 2) continue;
    OracleResult base = oracle_solve(inst);
    if (base.status != OracleStatus::Optimal) continue;
    ++checked;

    for (std::size_t drop = 0; drop < inst.num_processors(); ++drop) {
      ProblemInstance fewer = inst;
      fewer.processors.erase(fewer.processors.begin() + static_cast<std::ptrdiff_t>(drop));
      OracleResult r = oracle_solve(fewer);
      REQUIRE(r.status != OracleStatus::LimitExceeded);
      if (r.status == OracleStatus::Optimal) CHECK(r.objective >= base.objective);
    }
    for (std::size_t i = 0; i < inst.num_sources(); ++i) {
      ProblemInstance richer = inst;
      richer.sources[i].budget += Rational(5);
      OracleResult r = oracle_solve(richer);
      REQUIRE(r.status == OracleStatus::Optimal);
      CHECK(r.objective <= base.objective);

      ProblemInstance slower = inst;
      slower.sources[i].deadline += Rational(5);
      OracleResult r2 = oracle_solve(slower);
      REQUIRE(r2.status == OracleStatus::Optimal);
      CHECK(r2.objective <= base.objective);
    }
  }
  CHECK(checked >= 8);
}
