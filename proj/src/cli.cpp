#include "gridalloc/cli.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gridalloc/branch_bound.hpp"
#include "gridalloc/instance.hpp"
#include "gridalloc/milp.hpp"
#include "gridalloc/oracle.hpp"
#include "gridalloc/simplex.hpp"
#include "json_num.hpp"

namespace gridalloc {

using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitInputError = 3;
constexpr int kExitLimit = 4;

std::optional<std::string> read_file(const std::string& path, std::string& error) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    error = "cannot read file: " + path;
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Loads and fully validates an instance; fills `outcome` and returns nullopt
// on any input problem.
std::optional<ProblemInstance> load_instance(const std::string& path, RunOutcome& outcome) {
  std::string error;
  auto text = read_file(path, error);
  if (!text) {
    outcome = {kExitInputError, "", error};
    return std::nullopt;
  }
  ProblemInstance inst;
  try {
    inst = parse_instance(*text);
  } catch (const ParseError& e) {
    outcome = {kExitInputError, "", path + ": " + e.what()};
    return std::nullopt;
  }
  std::vector<InstanceDefect> defects = validate_instance(inst);
  if (!defects.empty()) {
    std::ostringstream msg;
    msg << path << ": invalid instance";
    for (const InstanceDefect& d : defects) {
      msg << "\n  " << defect_kind_name(d.kind) << " at " << d.location << ": " << d.message;
    }
    outcome = {kExitInputError, "", msg.str()};
    return std::nullopt;
  }
  return inst;
}

ordered_json allocation_json(const ProblemInstance& inst, const Allocation& alloc) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < inst.num_sources(); ++i) {
    ordered_json row;
    row["source"] = inst.sources[i].id;
    row["assignments"] = ordered_json::array();
    for (std::size_t j = 0; j < inst.num_processors(); ++j) {
      if (alloc.amounts[i][j].is_zero()) continue;
      ordered_json entry;
      entry["processor"] = inst.processors[j].id;
      entry["units"] = detail::rational_to_json(alloc.amounts[i][j]);
      row["assignments"].push_back(std::move(entry));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void append_replay_fields(ordered_json& doc, const ProblemInstance& inst,
                          const FeasibilityReport& report) {
  ordered_json times, costs, busy;
  for (std::size_t i = 0; i < inst.num_sources(); ++i) {
    times[inst.sources[i].id] = detail::rational_to_json(report.completion_times[i]);
    costs[inst.sources[i].id] = detail::rational_to_json(report.source_costs[i]);
  }
  for (std::size_t j = 0; j < inst.num_processors(); ++j) {
    busy[inst.processors[j].id] = detail::rational_to_json(report.processor_busy[j]);
  }
  doc["completion_times"] = std::move(times);
  doc["source_costs"] = std::move(costs);
  doc["processor_busy"] = std::move(busy);
  doc["total_cost"] = detail::rational_to_json(report.total_cost);
}

ordered_json instance_json(const ProblemInstance& inst) {
  // Reuse the canonical serialization so generated instances can be saved
  // and replayed as-is.
  return ordered_json::parse(serialize_instance(inst));
}

const char* method_name(SolveMethod method) {
  switch (method) {
    case SolveMethod::BranchAndBound: return "bnb";
    case SolveMethod::Greedy: return "greedy";
    case SolveMethod::LpRelax: return "lp-relax";
  }
  return "?";
}

std::string render(const ordered_json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

RunOutcome run_solve(const RunConfig& cfg) {
  RunOutcome outcome;
  auto inst = load_instance(cfg.instance_path, outcome);
  if (!inst) return outcome;

  ordered_json doc;
  doc["method"] = method_name(cfg.method);
  doc["mode"] = cfg.mode == ArithmeticMode::Integer ? "integer" : "continuous";
  doc["strict_eq6"] = cfg.strict_eq6;

  std::optional<Rational> lower_bound = cost_lower_bound(*inst);
  auto finish_with_allocation = [&](const char* status, const Allocation& alloc,
                                    const ordered_json& stats) {
    doc["status"] = status;
    FeasibilityReport report =
        evaluate(*inst, alloc, {cfg.mode, cfg.strict_eq6});
    doc["objective"] = detail::rational_to_json(report.total_cost);
    doc["cost_lower_bound"] =
        lower_bound ? detail::rational_to_json(*lower_bound) : ordered_json(nullptr);
    doc["allocation"] = allocation_json(*inst, alloc);
    append_replay_fields(doc, *inst, report);
    doc["search_stats"] = stats;
    outcome.exit_code = kExitOk;
    outcome.document = render(doc);
  };
  auto finish_without_solution = [&](const char* status, int exit_code, const ordered_json& stats) {
    doc["status"] = status;
    doc["objective"] = nullptr;
    doc["cost_lower_bound"] =
        lower_bound ? detail::rational_to_json(*lower_bound) : ordered_json(nullptr);
    doc["allocation"] = nullptr;
    doc["completion_times"] = nullptr;
    doc["source_costs"] = nullptr;
    doc["processor_busy"] = nullptr;
    doc["total_cost"] = nullptr;
    doc["search_stats"] = stats;
    outcome.exit_code = exit_code;
    outcome.document = render(doc);
  };

  switch (cfg.method) {
    case SolveMethod::BranchAndBound: {
      MilpModel model = build_milp(*inst, cfg.mode, cfg.strict_eq6);
      BnbResult result = solve_milp(model, *inst, greedy_allocate(*inst));
      ordered_json stats;
      stats["nodes_explored"] = result.stats.nodes_explored;
      stats["incumbent_updates"] = result.stats.incumbent_updates;
      stats["best_bound"] = std::isfinite(result.stats.best_bound)
                                ? detail::double_to_json(result.stats.best_bound)
                                : ordered_json(nullptr);
      stats["proven_optimal"] = result.stats.proven_optimal;
      if (result.solution.status == MilpStatus::Optimal) {
        Allocation alloc = extract_allocation(result.solution, *inst, cfg.mode);
        finish_with_allocation("Optimal", alloc, stats);
      } else if (result.solution.status == MilpStatus::Infeasible) {
        finish_without_solution("Infeasible", kExitInfeasible, stats);
      } else {
        finish_without_solution(milp_status_name(result.solution.status), kExitLimit, stats);
      }
      break;
    }
    case SolveMethod::Greedy: {
      std::optional<Allocation> alloc = greedy_allocate(*inst);
      if (alloc && cfg.strict_eq6 && !evaluate(*inst, *alloc, {cfg.mode, true}).feasible) {
        alloc.reset();  // heuristic output does not honor the strict rule
      }
      if (alloc) {
        finish_with_allocation("Feasible", *alloc, nullptr);
      } else {
        finish_without_solution("Failure", kExitInfeasible, nullptr);
      }
      break;
    }
    case SolveMethod::LpRelax: {
      MilpModel model = lp_relaxation(build_milp(*inst, cfg.mode, cfg.strict_eq6));
      LpSolution lp = solve_lp(model);
      if (lp.status == LpStatus::Optimal) {
        Allocation alloc = extract_allocation(
            MilpSolution{MilpStatus::Optimal, lp.values, Rational(0)}, *inst,
            ArithmeticMode::Continuous);
        doc["status"] = "Optimal";
        doc["objective"] = detail::double_to_json(lp.objective);
        doc["cost_lower_bound"] =
            lower_bound ? detail::rational_to_json(*lower_bound) : ordered_json(nullptr);
        doc["allocation"] = allocation_json(*inst, alloc);
        FeasibilityReport report = evaluate(*inst, alloc, {ArithmeticMode::Continuous, false});
        append_replay_fields(doc, *inst, report);
        doc["search_stats"] = nullptr;
        outcome.exit_code = kExitOk;
        outcome.document = render(doc);
      } else if (lp.status == LpStatus::Infeasible) {
        finish_without_solution("Infeasible", kExitInfeasible, nullptr);
      } else {
        finish_without_solution(lp_status_name(lp.status), kExitInputError, nullptr);
      }
      break;
    }
  }
  return outcome;
}

RunOutcome run_validate(const RunConfig& cfg) {
  RunOutcome outcome;
  auto inst = load_instance(cfg.instance_path, outcome);
  if (!inst) return outcome;

  std::string error;
  auto text = read_file(cfg.allocation_path, error);
  if (!text) return {kExitInputError, "", error};
  Allocation alloc;
  try {
    alloc = parse_allocation(*text, *inst);
  } catch (const ParseError& e) {
    return {kExitInputError, "", cfg.allocation_path + ": " + e.what()};
  }

  FeasibilityReport report = evaluate(*inst, alloc, {cfg.mode, cfg.strict_eq6});
  ordered_json doc;
  doc["feasible"] = report.feasible;
  doc["violations"] = ordered_json::array();
  for (const Violation& v : report.violations) {
    ordered_json entry;
    entry["constraint"] = v.constraint;
    entry["lhs"] = detail::rational_to_json(v.lhs);
    entry["rhs"] = detail::rational_to_json(v.rhs);
    doc["violations"].push_back(std::move(entry));
  }
  append_replay_fields(doc, *inst, report);
  outcome.exit_code = report.feasible ? kExitOk : kExitInfeasible;
  outcome.document = render(doc);
  return outcome;
}

RunOutcome run_oracle(const RunConfig& cfg) {
  RunOutcome outcome;
  if (cfg.seed && !cfg.instance_path.empty()) {
    return {kExitInputError, "", "oracle: give either an instance file or --seed, not both"};
  }
  if (!cfg.seed && cfg.instance_path.empty()) {
    return {kExitInputError, "", "oracle: an instance file or --seed is required"};
  }

  ProblemInstance inst;
  if (cfg.seed) {
    inst = random_instance(*cfg.seed);
  } else {
    auto loaded = load_instance(cfg.instance_path, outcome);
    if (!loaded) return outcome;
    inst = std::move(*loaded);
  }

  OracleLimits limits;
  if (cfg.oracle_max_units) limits.max_total_units = *cfg.oracle_max_units;
  OracleResult result = oracle_solve(inst, limits);

  ordered_json doc;
  if (cfg.seed) {
    doc["seed"] = *cfg.seed;
    doc["instance"] = instance_json(inst);
  }
  switch (result.status) {
    case OracleStatus::Optimal: {
      doc["status"] = "Optimal";
      doc["objective"] = detail::rational_to_json(result.objective);
      doc["allocation"] = allocation_json(inst, result.allocation);
      outcome.exit_code = kExitOk;
      break;
    }
    case OracleStatus::Infeasible:
      doc["status"] = "Infeasible";
      doc["objective"] = nullptr;
      doc["allocation"] = nullptr;
      outcome.exit_code = kExitInfeasible;
      break;
    case OracleStatus::LimitExceeded:
      doc["status"] = "LimitExceeded";
      doc["objective"] = nullptr;
      doc["allocation"] = nullptr;
      outcome.exit_code = kExitLimit;
      break;
  }
  doc["nodes_explored"] = result.nodes;
  outcome.document = render(doc);
  return outcome;
}

}  // namespace gridalloc
