#include "gridalloc/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gridalloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-10;
constexpr int kStallLimit = 50;

struct Tableau {
  // Columns: structural | one slack per row | artificials. The last column of
  // each row holds B^{-1}b.
  std::size_t num_struct = 0;
  std::size_t num_rows = 0;
  std::size_t num_cols = 0;  // without the b column
  std::vector<std::vector<double>> rows;
  std::vector<double> lower, upper;  // per column
  std::vector<double> cost;          // current phase objective
  std::vector<int> basis;            // basic column per row
  std::vector<std::uint8_t> at_upper;
  std::vector<std::uint8_t> is_basic;
  std::vector<int> artificial_row;  // per column, -1 unless artificial

  double nonbasic_value(std::size_t j) const { return at_upper[j] ? upper[j] : lower[j]; }
};

enum class PivotOutcome { Optimal, Unbounded, IterationLimit };

// Values of the basic variables for the current rest positions of the
// nonbasic ones. Recomputed from the tableau every iteration; at desk scale
// this is cheap and avoids incremental drift.
void basic_values(const Tableau& t, std::vector<double>& out) {
  out.assign(t.num_rows, 0.0);
  for (std::size_t r = 0; r < t.num_rows; ++r) {
    double v = t.rows[r][t.num_cols];
    for (std::size_t j = 0; j < t.num_cols; ++j) {
      if (t.is_basic[j]) continue;
      double xj = t.nonbasic_value(j);
      if (xj != 0.0) v -= t.rows[r][j] * xj;
    }
    out[r] = v;
  }
}

double current_objective(const Tableau& t, const std::vector<double>& xb) {
  double obj = 0.0;
  for (std::size_t j = 0; j < t.num_cols; ++j) {
    if (!t.is_basic[j] && t.cost[j] != 0.0) obj += t.cost[j] * t.nonbasic_value(j);
  }
  for (std::size_t r = 0; r < t.num_rows; ++r) {
    int b = t.basis[r];
    if (t.cost[static_cast<std::size_t>(b)] != 0.0) {
      obj += t.cost[static_cast<std::size_t>(b)] * xb[r];
    }
  }
  return obj;
}

void pivot(Tableau& t, std::size_t pivot_row, std::size_t entering) {
  std::vector<double>& pr = t.rows[pivot_row];
  double piv = pr[entering];
  for (double& v : pr) v /= piv;
  for (std::size_t r = 0; r < t.num_rows; ++r) {
    if (r == pivot_row) continue;
    double factor = t.rows[r][entering];
    if (factor == 0.0) continue;
    std::vector<double>& row = t.rows[r];
    for (std::size_t j = 0; j <= t.num_cols; ++j) row[j] -= factor * pr[j];
  }
}

void reduced_costs(const Tableau& t, std::vector<double>& out) {
  out.assign(t.num_cols, 0.0);
  for (std::size_t j = 0; j < t.num_cols; ++j) out[j] = t.cost[j];
  for (std::size_t r = 0; r < t.num_rows; ++r) {
    double cb = t.cost[static_cast<std::size_t>(t.basis[r])];
    if (cb == 0.0) continue;
    const std::vector<double>& row = t.rows[r];
    for (std::size_t j = 0; j < t.num_cols; ++j) out[j] -= cb * row[j];
  }
}

PivotOutcome run_phase(Tableau& t, long& iterations, long iteration_limit, bool& bland) {
  // Basic values, reduced costs and the objective are maintained
  // incrementally across pivots and refreshed periodically against drift.
  std::vector<double> xb;
  std::vector<double> reduced;
  basic_values(t, xb);
  reduced_costs(t, reduced);
  double obj = current_objective(t, xb);
  int stall = 0;
  double last_obj = kInf;
  long since_refresh = 0;

  while (true) {
    if (++iterations > iteration_limit) return PivotOutcome::IterationLimit;
    if (++since_refresh >= 64) {
      since_refresh = 0;
      basic_values(t, xb);
      reduced_costs(t, reduced);
      obj = current_objective(t, xb);
    }

    if (obj < last_obj - 1e-12) {
      stall = 0;
    } else if (++stall >= kStallLimit) {
      bland = true;  // degeneracy detected; Bland's rule guarantees termination
    }
    last_obj = obj;

    // Entering variable: from the lower bound with d < -tol, or from the
    // upper bound with d > tol. Fixed columns never move.
    std::size_t entering = t.num_cols;
    double best_violation = kLpTolerance;
    for (std::size_t j = 0; j < t.num_cols; ++j) {
      if (t.is_basic[j] || t.lower[j] == t.upper[j]) continue;
      double violation = 0.0;
      if (!t.at_upper[j] && reduced[j] < -kLpTolerance) {
        violation = -reduced[j];
      } else if (t.at_upper[j] && reduced[j] > kLpTolerance) {
        violation = reduced[j];
      } else {
        continue;
      }
      if (bland) {
        entering = j;
        break;
      }
      if (violation > best_violation) {
        best_violation = violation;
        entering = j;
      }
    }
    if (entering == t.num_cols) return PivotOutcome::Optimal;

    double direction = t.at_upper[entering] ? -1.0 : 1.0;
    double range = t.upper[entering] - t.lower[entering];  // may be +inf

    // Ratio test: how far the entering variable can move before a basic
    // variable hits one of its bounds.
    double best_t = range;
    std::ptrdiff_t leave_row = -1;
    bool leave_at_upper = false;
    for (std::size_t r = 0; r < t.num_rows; ++r) {
      double rate = -direction * t.rows[r][entering];
      int b = t.basis[r];
      double step;
      bool to_upper;
      if (rate < -kPivotTol) {
        step = (xb[r] - t.lower[static_cast<std::size_t>(b)]) / -rate;
        to_upper = false;
      } else if (rate > kPivotTol) {
        double ub = t.upper[static_cast<std::size_t>(b)];
        if (ub == kInf) continue;
        step = (ub - xb[r]) / rate;
        to_upper = true;
      } else {
        continue;
      }
      if (step < 0.0) step = 0.0;  // degenerate, slightly out-of-bound basics
      bool better = step < best_t - 1e-12;
      bool tied = !better && step <= best_t + 1e-12 && leave_row >= 0;
      if (tied) {
        if (bland) {
          better = b < t.basis[static_cast<std::size_t>(leave_row)];
        } else {
          // Prefer the numerically larger pivot, then the lowest basis index.
          double cur = std::abs(t.rows[static_cast<std::size_t>(leave_row)][entering]);
          double cand = std::abs(t.rows[r][entering]);
          better = cand > cur + 1e-12 ||
                   (cand >= cur - 1e-12 && b < t.basis[static_cast<std::size_t>(leave_row)]);
        }
      }
      if (better) {
        best_t = step;
        leave_row = static_cast<std::ptrdiff_t>(r);
        leave_at_upper = to_upper;
      }
    }

    if (best_t == kInf) return PivotOutcome::Unbounded;

    if (leave_row < 0 || range <= best_t) {
      // Bound flip: the entering variable crosses to its other bound.
      double delta = direction * range;
      for (std::size_t r = 0; r < t.num_rows; ++r) xb[r] -= delta * t.rows[r][entering];
      obj += reduced[entering] * delta;
      t.at_upper[entering] = !t.at_upper[entering];
      continue;
    }

    std::size_t pr = static_cast<std::size_t>(leave_row);
    int leaving = t.basis[pr];
    double delta = direction * best_t;
    double entering_value = t.nonbasic_value(entering) + delta;
    for (std::size_t r = 0; r < t.num_rows; ++r) {
      if (r != pr) xb[r] -= delta * t.rows[r][entering];
    }
    xb[pr] = entering_value;
    obj += reduced[entering] * delta;

    t.is_basic[static_cast<std::size_t>(leaving)] = 0;
    t.at_upper[static_cast<std::size_t>(leaving)] = leave_at_upper;
    t.basis[pr] = static_cast<int>(entering);
    t.is_basic[entering] = 1;
    double entering_reduced = reduced[entering];
    pivot(t, pr, entering);
    const std::vector<double>& pivot_row = t.rows[pr];
    for (std::size_t j = 0; j < t.num_cols; ++j) reduced[j] -= entering_reduced * pivot_row[j];
    reduced[entering] = 0.0;
  }
}

}  // namespace

const char* lp_status_name(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
    case LpStatus::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

LpSolution solve_lp(const MilpModel& model) {
  for (const Variable& v : model.variables) {
    if (v.kind != VarKind::Continuous) {
      throw std::invalid_argument("solve_lp requires a fully continuous model (relax it first)");
    }
  }
  std::vector<double> lower, upper;
  lower.reserve(model.variables.size());
  upper.reserve(model.variables.size());
  for (const Variable& v : model.variables) {
    lower.push_back(v.lower);
    upper.push_back(v.upper);
  }
  return solve_lp_with_bounds(model, lower, upper);
}

LpSolution solve_lp_with_bounds(const MilpModel& model, const std::vector<double>& lower,
                                const std::vector<double>& upper) {
  const std::size_t n = model.variables.size();
  const std::size_t num_rows = model.constraints.size();
  if (lower.size() != n || upper.size() != n) {
    throw std::invalid_argument("bound vectors do not match model variables");
  }
  LpSolution sol;
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(lower[j])) {
      throw std::invalid_argument("solve_lp requires finite lower bounds");
    }
    if (lower[j] > upper[j]) {
      sol.status = LpStatus::Infeasible;
      sol.phase1_infeasibility = lower[j] - upper[j];
      return sol;
    }
  }

  Tableau t;
  t.num_struct = n;
  t.num_rows = num_rows;
  t.num_cols = n + num_rows;  // artificials appended below
  t.lower = lower;
  t.upper = upper;
  t.lower.resize(t.num_cols, 0.0);
  t.upper.resize(t.num_cols, kInf);
  t.artificial_row.assign(t.num_cols, -1);

  t.rows.assign(num_rows, std::vector<double>(t.num_cols + 1, 0.0));
  for (std::size_t r = 0; r < num_rows; ++r) {
    const ConstraintRow& row = model.constraints[r];
    for (std::size_t j = 0; j < n; ++j) t.rows[r][j] = row.coeffs[j];
    std::size_t slack = n + r;
    switch (row.relation) {
      case Relation::LessEqual:
        t.rows[r][slack] = 1.0;
        break;
      case Relation::GreaterEqual:
        t.rows[r][slack] = -1.0;
        break;
      case Relation::Equal:
        t.rows[r][slack] = 1.0;
        t.upper[slack] = 0.0;  // fixed at zero
        break;
    }
    t.rows[r][t.num_cols] = row.rhs;
  }

  // Initial rest point: structural variables at their lower bounds. Rows whose
  // slack can absorb the residual start with the slack basic; the rest get an
  // artificial.
  t.basis.assign(num_rows, -1);
  std::vector<double> residual(num_rows);
  for (std::size_t r = 0; r < num_rows; ++r) {
    double acc = model.constraints[r].rhs;
    for (std::size_t j = 0; j < n; ++j) {
      if (t.lower[j] != 0.0) acc -= t.rows[r][j] * t.lower[j];
    }
    residual[r] = acc;
  }
  std::vector<std::pair<std::size_t, double>> artificials;  // row, sign
  for (std::size_t r = 0; r < num_rows; ++r) {
    std::size_t slack = n + r;
    Relation rel = model.constraints[r].relation;
    bool slack_ok = false;
    if (rel == Relation::LessEqual && residual[r] >= 0.0) slack_ok = true;
    if (rel == Relation::GreaterEqual && residual[r] <= 0.0) slack_ok = true;
    if (rel == Relation::Equal && residual[r] == 0.0) slack_ok = true;
    if (slack_ok) {
      t.basis[r] = static_cast<int>(slack);
    } else {
      artificials.emplace_back(r, residual[r] >= 0.0 ? 1.0 : -1.0);
    }
  }
  for (const auto& [r, sign] : artificials) {
    std::size_t col = t.num_cols;
    for (auto& row : t.rows) row.insert(row.end() - 1, 0.0);
    t.rows[r][col] = sign;
    t.lower.push_back(0.0);
    t.upper.push_back(kInf);
    t.artificial_row.push_back(static_cast<int>(r));
    t.basis[r] = static_cast<int>(col);
    ++t.num_cols;
  }
  t.at_upper.assign(t.num_cols, 0);
  t.is_basic.assign(t.num_cols, 0);
  for (std::size_t r = 0; r < num_rows; ++r) t.is_basic[static_cast<std::size_t>(t.basis[r])] = 1;

  // Normalize rows so the initial basis matrix is the identity.
  for (std::size_t r = 0; r < num_rows; ++r) {
    double diag = t.rows[r][static_cast<std::size_t>(t.basis[r])];
    if (diag != 1.0) {
      for (double& v : t.rows[r]) v /= diag;
    }
  }

  const long iteration_limit = 2000 + 200 * static_cast<long>(num_rows + t.num_cols);
  bool bland = false;

  // Phase 1: minimize the total artificial infeasibility.
  if (!artificials.empty()) {
    t.cost.assign(t.num_cols, 0.0);
    for (std::size_t j = n + num_rows; j < t.num_cols; ++j) t.cost[j] = 1.0;
    PivotOutcome outcome = run_phase(t, sol.iterations, iteration_limit, bland);
    if (outcome == PivotOutcome::IterationLimit || outcome == PivotOutcome::Unbounded) {
      sol.status = LpStatus::NumericalFailure;
      return sol;
    }
    std::vector<double> xb;
    basic_values(t, xb);
    double infeas = 0.0;
    for (std::size_t r = 0; r < num_rows; ++r) {
      if (t.artificial_row[static_cast<std::size_t>(t.basis[r])] >= 0) infeas += xb[r];
    }
    sol.phase1_infeasibility = infeas < 0.0 ? 0.0 : infeas;
    if (sol.phase1_infeasibility > 1e-7) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }
    // Drive zero-valued artificials out of the basis where possible.
    for (std::size_t r = 0; r < num_rows; ++r) {
      std::size_t b = static_cast<std::size_t>(t.basis[r]);
      if (t.artificial_row[b] < 0) continue;
      std::size_t target = t.num_cols;
      for (std::size_t j = 0; j < n + num_rows; ++j) {
        if (t.is_basic[j] || std::abs(t.rows[r][j]) <= kPivotTol) continue;
        if (target == t.num_cols || t.lower[j] != t.upper[j]) target = j;
        if (t.lower[j] != t.upper[j]) break;
      }
      if (target == t.num_cols) continue;  // redundant row; artificial stays at zero
      t.is_basic[b] = 0;
      t.at_upper[b] = 0;
      t.basis[r] = static_cast<int>(target);
      t.is_basic[target] = 1;
      pivot(t, r, target);
    }
    // Lock all artificials at zero for phase 2.
    for (std::size_t j = n + num_rows; j < t.num_cols; ++j) t.upper[j] = 0.0;
  }

  // Phase 2: the real objective.
  t.cost.assign(t.num_cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) t.cost[j] = model.objective[j];
  PivotOutcome outcome = run_phase(t, sol.iterations, iteration_limit, bland);
  if (outcome == PivotOutcome::IterationLimit) {
    sol.status = LpStatus::NumericalFailure;
    return sol;
  }
  if (outcome == PivotOutcome::Unbounded) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }

  std::vector<double> xb;
  basic_values(t, xb);
  sol.values.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (!t.is_basic[j]) sol.values[j] = t.nonbasic_value(j);
  }
  for (std::size_t r = 0; r < num_rows; ++r) {
    std::size_t b = static_cast<std::size_t>(t.basis[r]);
    if (b < n) sol.values[b] = xb[r];
  }
  sol.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective += model.objective[j] * sol.values[j];

  sol.basis.basic.assign(num_rows, 0);
  for (std::size_t r = 0; r < num_rows; ++r) {
    std::size_t b = static_cast<std::size_t>(t.basis[r]);
    int art_row = t.artificial_row[b];
    sol.basis.basic[r] = art_row >= 0 ? static_cast<int>(n + num_rows) + art_row
                                      : static_cast<int>(b);
  }
  sol.basis.at_upper.assign(n + num_rows, 0);
  for (std::size_t j = 0; j < n + num_rows; ++j) {
    sol.basis.at_upper[j] = !t.is_basic[j] && t.at_upper[j] ? 1 : 0;
  }
  sol.status = LpStatus::Optimal;
  return sol;
}

CertificateCheck check_certificate(const MilpModel& model, const LpSolution& sol) {
  CertificateCheck result;
  if (sol.status != LpStatus::Optimal) {
    result.reason = "certificate check requires an Optimal solution";
    return result;
  }
  const std::size_t n = model.variables.size();
  const std::size_t num_rows = model.constraints.size();
  if (sol.values.size() != n || sol.basis.basic.size() != num_rows) {
    result.reason = "solution shape does not match model";
    return result;
  }
  const double tol = kLpTolerance;

  for (std::size_t j = 0; j < n; ++j) {
    const Variable& v = model.variables[j];
    if (sol.values[j] < v.lower - tol || sol.values[j] > v.upper + tol) {
      result.reason = "bound violated: " + v.name;
      return result;
    }
  }

  // Standard-form point: structural values plus the implied slacks.
  std::vector<double> slack(num_rows, 0.0);
  for (std::size_t r = 0; r < num_rows; ++r) {
    const ConstraintRow& row = model.constraints[r];
    double lhs = 0.0;
    for (std::size_t j = 0; j < n; ++j) lhs += row.coeffs[j] * sol.values[j];
    switch (row.relation) {
      case Relation::LessEqual:
        if (lhs > row.rhs + tol) {
          result.reason = "constraint violated: " + row.label;
          return result;
        }
        slack[r] = row.rhs - lhs;
        break;
      case Relation::GreaterEqual:
        if (lhs < row.rhs - tol) {
          result.reason = "constraint violated: " + row.label;
          return result;
        }
        slack[r] = lhs - row.rhs;
        break;
      case Relation::Equal:
        if (std::abs(lhs - row.rhs) > tol) {
          result.reason = "constraint violated: " + row.label;
          return result;
        }
        slack[r] = row.rhs - lhs;
        break;
    }
  }

  double objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) objective += model.objective[j] * sol.values[j];
  if (std::abs(objective - sol.objective) > tol * (1.0 + std::abs(objective))) {
    result.reason = "ObjectiveMismatch";
    return result;
  }

  // Column access for the standard form. Ids in [n+R, n+2R) are artificials
  // kept basic on redundant rows; their column is the unit vector of that row
  // with cost zero, which pins the row's dual price to zero (a valid choice
  // for a dependent row).
  auto column = [&](int col, std::size_t r) -> double {
    std::size_t c = static_cast<std::size_t>(col);
    if (c < n) return model.constraints[r].coeffs[c];
    if (c < n + num_rows) {
      std::size_t row_of_slack = c - n;
      if (row_of_slack != r) return 0.0;
      return model.constraints[r].relation == Relation::GreaterEqual ? -1.0 : 1.0;
    }
    return c - n - num_rows == r ? 1.0 : 0.0;
  };
  auto cost_of = [&](int col) -> double {
    std::size_t c = static_cast<std::size_t>(col);
    return c < n ? model.objective[c] : 0.0;
  };

  std::vector<std::uint8_t> basic_flag(n + 2 * num_rows, 0);
  for (std::size_t r = 0; r < num_rows; ++r) {
    int col = sol.basis.basic[r];
    if (col < 0 || static_cast<std::size_t>(col) >= n + 2 * num_rows) {
      result.reason = "certificate basis column out of range";
      return result;
    }
    if (basic_flag[static_cast<std::size_t>(col)]) {
      result.reason = "certificate basis repeats a column";
      return result;
    }
    basic_flag[static_cast<std::size_t>(col)] = 1;
  }

  // Dual prices: solve B^T y = c_B by Gaussian elimination with partial
  // pivoting (independent of the solver's pivoting machinery).
  std::vector<std::vector<double>> bt(num_rows, std::vector<double>(num_rows + 1, 0.0));
  for (std::size_t r = 0; r < num_rows; ++r) {
    for (std::size_t k = 0; k < num_rows; ++k) bt[r][k] = column(sol.basis.basic[r], k);
    bt[r][num_rows] = cost_of(sol.basis.basic[r]);
  }
  for (std::size_t k = 0; k < num_rows; ++k) {
    std::size_t piv = k;
    for (std::size_t r = k + 1; r < num_rows; ++r) {
      if (std::abs(bt[r][k]) > std::abs(bt[piv][k])) piv = r;
    }
    if (std::abs(bt[piv][k]) < 1e-12) {
      result.reason = "certificate basis is singular";
      return result;
    }
    std::swap(bt[k], bt[piv]);
    for (std::size_t r = k + 1; r < num_rows; ++r) {
      double f = bt[r][k] / bt[k][k];
      if (f == 0.0) continue;
      for (std::size_t c = k; c <= num_rows; ++c) bt[r][c] -= f * bt[k][c];
    }
  }
  std::vector<double> y(num_rows, 0.0);
  for (std::size_t k = num_rows; k-- > 0;) {
    double acc = bt[k][num_rows];
    for (std::size_t c = k + 1; c < num_rows; ++c) acc -= bt[k][c] * y[c];
    y[k] = acc / bt[k][k];
  }
  double y_scale = 0.0;
  for (double v : y) y_scale = std::max(y_scale, std::abs(v));
  const double dual_tol = tol * (1.0 + y_scale);

  // Rest-position and reduced-cost sign conditions for every nonbasic
  // standard column; with primal feasibility this is exactly complementary
  // slackness for the bounded form. Fixed columns (equality slacks, pinned
  // variables) cannot move, so their reduced cost is unconstrained.
  for (std::size_t c = 0; c < n + num_rows; ++c) {
    if (basic_flag[c]) continue;
    double col_lower = c < n ? model.variables[c].lower : 0.0;
    double col_upper = c < n ? model.variables[c].upper
                      : model.constraints[c - n].relation == Relation::Equal
                          ? 0.0
                          : std::numeric_limits<double>::infinity();
    std::string name = c < n ? model.variables[c].name : "slack(" + model.constraints[c - n].label + ")";
    bool upper = sol.basis.at_upper[c] != 0;
    if (upper && std::isinf(col_upper)) {
      result.reason = "nonbasic column rests at an infinite bound: " + name;
      return result;
    }
    double value = c < n ? sol.values[c] : slack[c - n];
    double rest = upper ? col_upper : col_lower;
    if (std::abs(value - rest) > 1e-7 * (1.0 + std::abs(rest))) {
      result.reason = "nonbasic column is off its recorded bound: " + name;
      return result;
    }
    if (col_lower == col_upper) continue;
    double d = cost_of(static_cast<int>(c));
    for (std::size_t r = 0; r < num_rows; ++r) d -= y[r] * column(static_cast<int>(c), r);
    if (!upper && d < -dual_tol) {
      result.reason = "reduced cost negative at lower bound: " + name;
      return result;
    }
    if (upper && d > dual_tol) {
      result.reason = "reduced cost positive at upper bound: " + name;
      return result;
    }
  }

  result.ok = true;
  return result;
}

}  // namespace gridalloc
