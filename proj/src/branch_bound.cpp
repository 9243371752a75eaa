#include "gridalloc/branch_bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "gridalloc/validator.hpp"

namespace gridalloc {

namespace {

constexpr double kIntegralityTol = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_integral(double v) { return std::abs(v - std::nearbyint(v)) <= kIntegralityTol; }

// Continuous values keep their decimals, but sub-tolerance float dust is
// snapped to the nearest integer so exact conversion cannot overflow.
Rational continuous_amount(double v) {
  double nearest = std::nearbyint(v);
  if (std::abs(v - nearest) < 1e-9) return Rational(static_cast<std::int64_t>(nearest));
  return Rational::from_double(v);
}

struct Node {
  std::vector<double> lower, upper;
  double parent_bound;
};

struct Incumbent {
  bool present = false;
  Rational objective;
  Allocation allocation;
  std::vector<double> point;
};

// Rounds the alpha block, derives x from positive load, and (strict mode)
// leaves any solver-chosen zero-load assignments alone only if they are
// integral; the exact validator is the final word on acceptance.
std::optional<std::pair<Allocation, std::vector<double>>> integral_candidate(
    const MilpModel& model, const std::vector<double>& values) {
  Allocation alloc = Allocation::zeros(model.num_sources, model.num_processors);
  std::vector<double> point(model.variables.size(), 0.0);
  for (const LinkCell& cell : model.cells) {
    double a = values[static_cast<std::size_t>(cell.alpha_var)];
    if (model.mode == ArithmeticMode::Integer) {
      if (!is_integral(a)) return std::nullopt;
      a = std::nearbyint(a);
      alloc.amounts[cell.source_idx][cell.processor_idx] = Rational(static_cast<std::int64_t>(a));
    } else {
      alloc.amounts[cell.source_idx][cell.processor_idx] = continuous_amount(a);
    }
    point[static_cast<std::size_t>(cell.alpha_var)] = a;
    point[static_cast<std::size_t>(cell.x_var)] = a > kIntegralityTol ? 1.0 : 0.0;
  }
  if (model.strict_assignment) {
    // Keep the assignment rows satisfied: every processor needs exactly one
    // holder, so give idle processors a zero-load assignment to the first
    // source.
    for (std::size_t j = 0; j < model.num_processors; ++j) {
      bool any = false;
      for (std::size_t i = 0; i < model.num_sources && !any; ++i) {
        any = point[model.cells[i * model.num_processors + j].x_var] > 0.5;
      }
      if (!any && model.num_sources > 0) {
        point[model.cells[j].x_var] = 1.0;
      }
    }
  }
  return std::make_pair(std::move(alloc), std::move(point));
}

}  // namespace

BnbResult solve_milp(const MilpModel& model, const ProblemInstance& inst,
                     const std::optional<Allocation>& warm_start, const BnbOptions& options) {
  BnbResult result;
  Incumbent incumbent;
  EvaluateOptions eval_options{model.mode, model.strict_assignment};

  auto try_accept = [&](const Allocation& alloc, const std::vector<double>& point) {
    Rational objective;
    if (model.mode == ArithmeticMode::Integer) {
      // Rounded integral candidates must replay exactly.
      FeasibilityReport report = evaluate(inst, alloc, eval_options);
      if (!report.feasible) return false;
      objective = report.total_cost;
    } else {
      // Continuous candidates carry float dust; judge them against the model
      // at tolerance instead of demanding exact decimal replay.
      if (!point_feasible(model, point, 1e-7)) return false;
      objective = Rational::from_double(point_objective(model, point));
    }
    if (incumbent.present && !(objective < incumbent.objective)) return false;
    incumbent.present = true;
    incumbent.objective = objective;
    incumbent.allocation = alloc;
    incumbent.point = point;
    ++result.stats.incumbent_updates;
    return true;
  };

  if (warm_start) {
    std::vector<double> point = allocation_to_point(model, *warm_start);
    try_accept(*warm_start, point);
    if (incumbent.present) result.stats.incumbent_updates = 0;  // seed, not a search update
  }

  std::vector<double> root_lower, root_upper;
  for (const Variable& v : model.variables) {
    root_lower.push_back(v.lower);
    root_upper.push_back(v.upper);
  }
  std::vector<Node> stack;
  stack.push_back({std::move(root_lower), std::move(root_upper), -kInf});

  // With integral costs and integral alpha, every feasible objective is an
  // integer, so a node bound may be lifted to the next integer before the
  // incumbent comparison.
  bool integral_objective = model.mode == ArithmeticMode::Integer;
  for (double c : model.objective) {
    integral_objective = integral_objective && std::abs(c - std::nearbyint(c)) < 1e-12;
  }
  auto lift_bound = [integral_objective](double bound) {
    if (!integral_objective) return bound;
    double nearest = std::nearbyint(bound);
    return std::abs(bound - nearest) <= kIntegralityTol ? nearest : std::ceil(bound);
  };

  bool complete = true;
  double interrupted_bound = kInf;

  while (!stack.empty()) {
    if (result.stats.nodes_explored >= options.node_limit) {
      complete = false;
      break;
    }
    Node node = std::move(stack.back());
    stack.pop_back();
    ++result.stats.nodes_explored;

    LpSolution lp = solve_lp_with_bounds(model, node.lower, node.upper);
    if (lp.status == LpStatus::Infeasible) continue;
    if (lp.status != LpStatus::Optimal) {
      // Numerical trouble: never guess; give up on proving optimality.
      complete = false;
      interrupted_bound = std::min(interrupted_bound, node.parent_bound);
      continue;
    }
    if (incumbent.present &&
        lift_bound(lp.objective) >= incumbent.objective.to_double() - kLpTolerance) {
      continue;
    }

    // Branch variable: most fractional alpha, then most fractional x,
    // lowest index on ties.
    std::size_t branch_var = model.variables.size();
    double branch_value = 0.0;
    double best_frac = kIntegralityTol;
    auto consider = [&](std::size_t idx) {
      if (model.variables[idx].kind == VarKind::Continuous) return;
      double v = lp.values[idx];
      double frac = std::abs(v - std::nearbyint(v));
      if (frac > best_frac) {
        best_frac = frac;
        branch_var = idx;
        branch_value = v;
      }
    };
    for (const LinkCell& cell : model.cells) consider(static_cast<std::size_t>(cell.alpha_var));
    if (branch_var == model.variables.size()) {
      for (const LinkCell& cell : model.cells) consider(static_cast<std::size_t>(cell.x_var));
    }

    if (branch_var == model.variables.size() || best_frac <= kIntegralityTol) {
      if (auto candidate = integral_candidate(model, lp.values)) {
        if (try_accept(candidate->first, candidate->second)) continue;
      }
      if (branch_var == model.variables.size()) continue;  // nothing left to branch on
    }
    if (branch_var == model.variables.size()) continue;

    double down = std::floor(branch_value);
    Node up_child{node.lower, node.upper, lp.objective};
    up_child.lower[branch_var] = down + 1.0;
    Node down_child{std::move(node.lower), std::move(node.upper), lp.objective};
    down_child.upper[branch_var] = down;
    // Depth-first, up branch first: raising alpha floors reaches
    // conservation-feasible incumbents quickly.
    stack.push_back(std::move(down_child));
    stack.push_back(std::move(up_child));
  }

  if (!complete) {
    for (const Node& open : stack) interrupted_bound = std::min(interrupted_bound, open.parent_bound);
  }

  result.stats.proven_optimal = complete && incumbent.present;
  if (incumbent.present) {
    result.solution.status = MilpStatus::Optimal;
    result.solution.values = incumbent.point;
    result.solution.objective_value = incumbent.objective;
    result.stats.best_bound =
        complete ? incumbent.objective.to_double()
                 : std::min(interrupted_bound, incumbent.objective.to_double());
  } else {
    result.solution.status = complete ? MilpStatus::Infeasible : MilpStatus::NodeLimit;
    result.stats.best_bound = complete ? kInf : interrupted_bound;
  }
  return result;
}

Allocation extract_allocation(const MilpSolution& sol, const ProblemInstance& inst,
                              ArithmeticMode mode) {
  if (sol.status != MilpStatus::Optimal) {
    throw std::logic_error("extract_allocation requires an Optimal solution");
  }
  const std::size_t m = inst.num_sources();
  const std::size_t n = inst.num_processors();
  if (sol.values.size() < m * n) throw std::logic_error("solution does not match instance shape");
  Allocation alloc = Allocation::zeros(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double v = sol.values[i * n + j];
      if (mode == ArithmeticMode::Integer) {
        if (!is_integral(v)) {
          throw std::logic_error("non-integral allocation value for " + inst.sources[i].id + "," +
                                 inst.processors[j].id);
        }
        alloc.amounts[i][j] = Rational(static_cast<std::int64_t>(std::nearbyint(v)));
      } else {
        alloc.amounts[i][j] = continuous_amount(v);
      }
    }
  }
  return alloc;
}

namespace {

struct FillEntry {
  Rational per_unit_time;
  Rational per_unit_cost;
  std::int64_t capacity;
};

// Least total time achievable for `units` over the pool, fastest first;
// nullopt when the pool cannot hold them.
std::optional<Rational> fill_time(std::vector<FillEntry> pool, std::int64_t units) {
  std::stable_sort(pool.begin(), pool.end(), [](const FillEntry& a, const FillEntry& b) {
    return a.per_unit_time < b.per_unit_time;
  });
  Rational total(0);
  for (const FillEntry& e : pool) {
    if (units == 0) break;
    std::int64_t take = std::min(units, e.capacity);
    total += e.per_unit_time * Rational(take);
    units -= take;
  }
  if (units > 0) return std::nullopt;
  return total;
}

std::optional<Rational> fill_cost(std::vector<FillEntry> pool, std::int64_t units) {
  std::stable_sort(pool.begin(), pool.end(), [](const FillEntry& a, const FillEntry& b) {
    return a.per_unit_cost < b.per_unit_cost;
  });
  Rational total(0);
  for (const FillEntry& e : pool) {
    if (units == 0) break;
    std::int64_t take = std::min(units, e.capacity);
    total += e.per_unit_cost * Rational(take);
    units -= take;
  }
  if (units > 0) return std::nullopt;
  return total;
}

}  // namespace

std::optional<Allocation> greedy_allocate(const ProblemInstance& inst) {
  const std::size_t m = inst.num_sources();
  const std::size_t n = inst.num_processors();

  std::vector<std::size_t> source_order(m);
  std::iota(source_order.begin(), source_order.end(), 0);
  std::stable_sort(source_order.begin(), source_order.end(), [&inst](std::size_t a, std::size_t b) {
    return inst.sources[a].deadline < inst.sources[b].deadline;
  });
  std::vector<std::size_t> proc_order(n);
  std::iota(proc_order.begin(), proc_order.end(), 0);
  std::sort(proc_order.begin(), proc_order.end(), [&inst](std::size_t a, std::size_t b) {
    const ProcessorSpec& pa = inst.processors[a];
    const ProcessorSpec& pb = inst.processors[b];
    if (pa.cost_per_unit != pb.cost_per_unit) return pa.cost_per_unit < pb.cost_per_unit;
    if (pa.time_per_unit != pb.time_per_unit) return pa.time_per_unit < pb.time_per_unit;
    return pa.id < pb.id;
  });

  std::vector<Rational> busy(n, Rational(0));
  Allocation alloc = Allocation::zeros(m, n);

  auto capacity_units = [&](std::size_t j) -> std::int64_t {
    Rational left = inst.processors[j].available_time - busy[j];
    if (left < Rational(0)) return 0;
    return left.floor_div(inst.processors[j].minutes_per_unit());
  };

  for (std::size_t src_idx : source_order) {
    const SourceSpec& src = inst.sources[src_idx];
    std::int64_t remaining = src.workload;
    Rational time_budget = src.deadline;
    Rational money_budget = src.budget;

    for (std::size_t k = 0; k < n; ++k) {
      if (remaining == 0) break;
      std::size_t j = proc_order[k];
      const ProcessorSpec& proc = inst.processors[j];
      Rational per_unit = proc.minutes_per_unit();
      std::int64_t q_max = std::min(remaining, capacity_units(j));

      // Feasibility pool: processors still ahead in this pass.
      std::vector<FillEntry> pool;
      for (std::size_t k2 = k + 1; k2 < n; ++k2) {
        std::size_t j2 = proc_order[k2];
        pool.push_back({inst.processors[j2].minutes_per_unit(),
                        inst.processors[j2].cost_per_unit, capacity_units(j2)});
      }

      std::int64_t chosen = 0;
      for (std::int64_t q = q_max; q >= 0; --q) {
        std::int64_t rest = remaining - q;
        auto t = fill_time(pool, rest);
        if (!t || *t > time_budget - per_unit * Rational(q)) continue;
        auto c = fill_cost(pool, rest);
        if (!c || *c > money_budget - proc.cost_per_unit * Rational(q)) continue;
        chosen = q;
        break;
      }
      if (chosen == 0) continue;
      alloc.amounts[src_idx][j] += Rational(chosen);
      remaining -= chosen;
      time_budget -= per_unit * Rational(chosen);
      money_budget -= proc.cost_per_unit * Rational(chosen);
      busy[j] += per_unit * Rational(chosen);
    }
    if (remaining > 0) return std::nullopt;
  }

  if (!evaluate(inst, alloc).feasible) return std::nullopt;
  return alloc;
}

}  // namespace gridalloc
