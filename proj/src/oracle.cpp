#include "gridalloc/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "gridalloc/validator.hpp"

namespace gridalloc {

namespace {

struct SearchState {
  const ProblemInstance& inst;
  const OracleLimits& limits;
  std::vector<std::int64_t> assigned;        // flattened (i, j) units
  std::vector<Rational> busy;                // per processor minutes
  std::vector<std::int64_t> caps_sorted_idx; // processors by ascending cost
  long nodes = 0;
  bool out_of_budget = false;
  bool found = false;
  Rational best_cost;
  std::vector<std::int64_t> best_assigned;
};

// Remaining unit capacity of processor j at the current busy times.
std::int64_t remaining_units(const SearchState& s, std::size_t j) {
  const ProcessorSpec& p = s.inst.processors[j];
  Rational left = p.available_time - s.busy[j];
  if (left < Rational(0)) return 0;
  return left.floor_div(p.minutes_per_unit());
}

// Cheapest-fill completion bound for `units` more units at the current busy
// times, ignoring deadlines and budgets. nullopt when capacity is short.
std::optional<Rational> completion_bound(const SearchState& s, std::int64_t units) {
  Rational bound(0);
  for (std::int64_t j : s.caps_sorted_idx) {
    if (units == 0) break;
    std::int64_t take = remaining_units(s, static_cast<std::size_t>(j));
    if (take > units) take = units;
    bound += s.inst.processors[static_cast<std::size_t>(j)].cost_per_unit * Rational(take);
    units -= take;
  }
  if (units > 0) return std::nullopt;
  return bound;
}

void search(SearchState& s, std::size_t i, std::size_t j, std::int64_t rem_units,
            Rational time_used, Rational cost_used, Rational cost_committed) {
  if (s.out_of_budget) return;
  const std::size_t n = s.inst.num_processors();
  const std::size_t m = s.inst.num_sources();

  if (j == n) {
    if (rem_units != 0) return;  // conservation unreachable
    std::size_t next = i + 1;
    if (next == m) {
      // Complete assignment; culled candidates were already constraint-checked,
      // but confirm through the validator before accepting.
      if (!s.found || cost_committed < s.best_cost) {
        Allocation alloc = Allocation::zeros(m, n);
        for (std::size_t a = 0; a < m; ++a) {
          for (std::size_t b = 0; b < n; ++b) {
            alloc.amounts[a][b] = Rational(s.assigned[a * n + b]);
          }
        }
        if (evaluate(s.inst, alloc).feasible) {
          s.found = true;
          s.best_cost = cost_committed;
          s.best_assigned = s.assigned;
        }
      }
      return;
    }
    search(s, next, 0, s.inst.sources[next].workload, Rational(0), Rational(0), cost_committed);
    return;
  }

  if (++s.nodes > s.limits.node_budget) {
    s.out_of_budget = true;
    return;
  }

  // Bound prune: committed cost plus the cheapest completion of everything
  // still unassigned (rest of this source plus all later sources).
  std::int64_t outstanding = rem_units;
  for (std::size_t k = i + 1; k < m; ++k) outstanding += s.inst.sources[k].workload;
  std::optional<Rational> bound = completion_bound(s, outstanding);
  if (!bound) return;
  if (s.found && !(cost_committed + *bound < s.best_cost)) return;

  const SourceSpec& src = s.inst.sources[i];
  const ProcessorSpec& proc = s.inst.processors[j];
  Rational per_unit_time = proc.minutes_per_unit();

  std::int64_t q_max = std::min(rem_units, remaining_units(s, j));
  // Partial-violation pruning: q units must respect this source's deadline
  // and budget.
  Rational time_left = src.deadline - time_used;
  if (per_unit_time > Rational(0)) {
    std::int64_t by_time = time_left < Rational(0) ? 0 : time_left.floor_div(per_unit_time);
    q_max = std::min(q_max, by_time);
  }
  if (proc.cost_per_unit > Rational(0)) {
    Rational money_left = src.budget - cost_used;
    std::int64_t by_money = money_left < Rational(0) ? 0 : money_left.floor_div(proc.cost_per_unit);
    q_max = std::min(q_max, by_money);
  }
  if (q_max < 0) q_max = 0;

  for (std::int64_t q = 0; q <= q_max; ++q) {
    s.assigned[i * n + j] = q;
    s.busy[j] += per_unit_time * Rational(q);
    search(s, i, j + 1, rem_units - q, time_used + per_unit_time * Rational(q),
           cost_used + proc.cost_per_unit * Rational(q),
           cost_committed + proc.cost_per_unit * Rational(q));
    s.busy[j] -= per_unit_time * Rational(q);
    s.assigned[i * n + j] = 0;
    if (s.out_of_budget) return;
  }
}

}  // namespace

OracleResult oracle_solve(const ProblemInstance& inst, const OracleLimits& limits) {
  OracleResult result;
  std::int64_t total_units = 0;
  for (const SourceSpec& s : inst.sources) total_units += s.workload;
  if (total_units > limits.max_total_units || inst.num_processors() > limits.max_processors) {
    result.status = OracleStatus::LimitExceeded;
    return result;
  }

  SearchState state{inst, limits,
                    std::vector<std::int64_t>(inst.num_sources() * inst.num_processors(), 0),
                    std::vector<Rational>(inst.num_processors(), Rational(0)),
                    {},
                    0,
                    false,
                    false,
                    Rational(0),
                    {}};
  state.caps_sorted_idx.resize(inst.num_processors());
  std::iota(state.caps_sorted_idx.begin(), state.caps_sorted_idx.end(), 0);
  std::stable_sort(state.caps_sorted_idx.begin(), state.caps_sorted_idx.end(),
                   [&inst](std::int64_t a, std::int64_t b) {
                     return inst.processors[static_cast<std::size_t>(a)].cost_per_unit <
                            inst.processors[static_cast<std::size_t>(b)].cost_per_unit;
                   });

  if (inst.num_sources() > 0) {
    search(state, 0, 0, inst.sources[0].workload, Rational(0), Rational(0), Rational(0));
  }
  result.nodes = state.nodes;
  if (state.out_of_budget) {
    result.status = OracleStatus::LimitExceeded;
    return result;
  }
  if (!state.found) {
    result.status = OracleStatus::Infeasible;
    return result;
  }
  result.status = OracleStatus::Optimal;
  result.objective = state.best_cost;
  result.allocation = Allocation::zeros(inst.num_sources(), inst.num_processors());
  for (std::size_t i = 0; i < inst.num_sources(); ++i) {
    for (std::size_t j = 0; j < inst.num_processors(); ++j) {
      result.allocation.amounts[i][j] = Rational(state.best_assigned[i * inst.num_processors() + j]);
    }
  }
  return result;
}

std::optional<Rational> cost_lower_bound(const ProblemInstance& inst) {
  std::int64_t demand = 0;
  for (const SourceSpec& s : inst.sources) demand += s.workload;

  std::vector<std::size_t> order(inst.num_processors());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&inst](std::size_t a, std::size_t b) {
    return inst.processors[a].cost_per_unit < inst.processors[b].cost_per_unit;
  });

  Rational bound(0);
  for (std::size_t j : order) {
    if (demand == 0) break;
    const ProcessorSpec& p = inst.processors[j];
    std::int64_t capacity = p.available_time.floor_div(p.minutes_per_unit());
    std::int64_t take = std::min(capacity, demand);
    bound += p.cost_per_unit * Rational(take);
    demand -= take;
  }
  if (demand > 0) return std::nullopt;
  return bound;
}

namespace {

// splitmix64; fixed algorithm so seeds mean the same thing everywhere.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Uniform in [lo, hi]; modulo bias is irrelevant at these ranges.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

}  // namespace

ProblemInstance random_instance(std::uint64_t seed) {
  Rng rng(seed);
  std::size_t m = static_cast<std::size_t>(rng.range(1, 3));
  std::size_t n = static_cast<std::size_t>(rng.range(1, 4));

  ProblemInstance inst;
  for (std::size_t j = 0; j < n; ++j) {
    ProcessorSpec p;
    p.id = "P" + std::to_string(j + 1);
    p.time_per_unit = Rational(rng.range(1, 5));
    p.cost_per_unit = Rational(rng.range(1, 5));
    p.transfer_per_unit = Rational(rng.range(0, 1));
    p.available_time = Rational(rng.range(5, 40));
    inst.processors.push_back(std::move(p));
  }
  std::vector<std::int64_t> workloads(m);
  while (true) {
    std::int64_t total = 0;
    for (std::size_t i = 0; i < m; ++i) {
      workloads[i] = rng.range(3, 10);
      total += workloads[i];
    }
    if (total <= 20) break;
  }
  for (std::size_t i = 0; i < m; ++i) {
    SourceSpec s;
    s.id = "S" + std::to_string(i + 1);
    s.workload = workloads[i];
    s.deadline = Rational(rng.range(workloads[i], 6 * workloads[i]));
    s.budget = Rational(rng.range(workloads[i], 6 * workloads[i]));
    inst.sources.push_back(std::move(s));
  }
  return inst;
}

}  // namespace gridalloc
