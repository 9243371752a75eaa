#include "gridalloc/milp.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gridalloc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

const char* milp_status_name(MilpStatus status) {
  switch (status) {
    case MilpStatus::Optimal: return "Optimal";
    case MilpStatus::Infeasible: return "Infeasible";
    case MilpStatus::Unbounded: return "Unbounded";
    case MilpStatus::NodeLimit: return "NodeLimit";
  }
  return "Unknown";
}

MilpModel build_milp(const ProblemInstance& inst, ArithmeticMode mode, bool strict_eq6) {
  if (!validate_instance(inst).empty()) {
    throw std::invalid_argument("build_milp requires a defect-free instance");
  }
  const std::size_t m = inst.num_sources();
  const std::size_t n = inst.num_processors();

  MilpModel model;
  model.num_sources = m;
  model.num_processors = n;
  model.mode = mode;
  model.strict_assignment = strict_eq6;

  const std::size_t num_vars = 2 * m * n;
  auto alpha_var = [n](std::size_t i, std::size_t j) { return static_cast<int>(i * n + j); };
  auto x_var = [m, n](std::size_t i, std::size_t j) { return static_cast<int>(m * n + i * n + j); };

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::int64_t cap = big_m(inst, i, j);
      Variable v;
      v.name = "alpha[" + inst.sources[i].id + "," + inst.processors[j].id + "]";
      v.kind = mode == ArithmeticMode::Integer ? VarKind::Integer : VarKind::Continuous;
      v.lower = 0.0;
      v.upper = static_cast<double>(cap);
      model.variables.push_back(std::move(v));
      model.cells.push_back({i, j, alpha_var(i, j), x_var(i, j), cap});
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Variable v;
      v.name = "x[" + inst.sources[i].id + "," + inst.processors[j].id + "]";
      v.kind = VarKind::Binary;
      v.lower = 0.0;
      v.upper = 1.0;
      model.variables.push_back(std::move(v));
    }
  }

  model.objective.assign(num_vars, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      model.objective[static_cast<std::size_t>(alpha_var(i, j))] =
          inst.processors[j].cost_per_unit.to_double();
    }
  }

  auto new_row = [&num_vars](Relation rel, double rhs, std::string label) {
    ConstraintRow row;
    row.coeffs.assign(num_vars, 0.0);
    row.relation = rel;
    row.rhs = rhs;
    row.label = std::move(label);
    return row;
  };

  for (std::size_t i = 0; i < m; ++i) {
    ConstraintRow row = new_row(Relation::LessEqual, inst.sources[i].deadline.to_double(),
                                "deadline:" + inst.sources[i].id);
    for (std::size_t j = 0; j < n; ++j) {
      row.coeffs[static_cast<std::size_t>(alpha_var(i, j))] =
          inst.processors[j].minutes_per_unit().to_double();
    }
    model.constraints.push_back(std::move(row));
  }
  for (std::size_t j = 0; j < n; ++j) {
    ConstraintRow row = new_row(Relation::LessEqual, inst.processors[j].available_time.to_double(),
                                "availability:" + inst.processors[j].id);
    for (std::size_t i = 0; i < m; ++i) {
      row.coeffs[static_cast<std::size_t>(alpha_var(i, j))] =
          inst.processors[j].minutes_per_unit().to_double();
    }
    model.constraints.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < m; ++i) {
    ConstraintRow row = new_row(Relation::LessEqual, inst.sources[i].budget.to_double(),
                                "budget:" + inst.sources[i].id);
    for (std::size_t j = 0; j < n; ++j) {
      row.coeffs[static_cast<std::size_t>(alpha_var(i, j))] =
          inst.processors[j].cost_per_unit.to_double();
    }
    model.constraints.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < m; ++i) {
    ConstraintRow row = new_row(Relation::Equal, static_cast<double>(inst.sources[i].workload),
                                "conservation:" + inst.sources[i].id);
    for (std::size_t j = 0; j < n; ++j) {
      row.coeffs[static_cast<std::size_t>(alpha_var(i, j))] = 1.0;
    }
    model.constraints.push_back(std::move(row));
  }
  for (const LinkCell& cell : model.cells) {
    ConstraintRow row = new_row(
        Relation::LessEqual, 0.0,
        "linking:" + inst.sources[cell.source_idx].id + "," + inst.processors[cell.processor_idx].id);
    row.coeffs[static_cast<std::size_t>(cell.alpha_var)] = 1.0;
    row.coeffs[static_cast<std::size_t>(cell.x_var)] = -static_cast<double>(cell.big_m);
    model.constraints.push_back(std::move(row));
  }
  if (strict_eq6) {
    for (std::size_t j = 0; j < n; ++j) {
      ConstraintRow row = new_row(Relation::Equal, 1.0, "assignment:" + inst.processors[j].id);
      for (std::size_t i = 0; i < m; ++i) {
        row.coeffs[static_cast<std::size_t>(x_var(i, j))] = 1.0;
      }
      model.constraints.push_back(std::move(row));
    }
  }
  return model;
}

MilpModel lp_relaxation(const MilpModel& model) {
  MilpModel relaxed = model;
  for (Variable& v : relaxed.variables) v.kind = VarKind::Continuous;
  return relaxed;
}

std::string dump_model(const MilpModel& model) {
  std::ostringstream out;
  out << "minimize:";
  for (std::size_t j = 0; j < model.variables.size(); ++j) {
    if (model.objective[j] == 0.0) continue;
    out << " " << (model.objective[j] >= 0 ? "+" : "") << model.objective[j] << " "
        << model.variables[j].name;
  }
  out << "\n";
  for (const Variable& v : model.variables) {
    const char* kind = v.kind == VarKind::Continuous ? "continuous"
                       : v.kind == VarKind::Integer  ? "integer"
                                                     : "binary";
    out << "var " << v.name << ": " << kind << " in [" << v.lower << ", ";
    if (std::isinf(v.upper)) {
      out << "inf";
    } else {
      out << v.upper;
    }
    out << "]\n";
  }
  for (const ConstraintRow& row : model.constraints) {
    out << row.label << ":";
    for (std::size_t j = 0; j < row.coeffs.size(); ++j) {
      if (row.coeffs[j] == 0.0) continue;
      out << " " << (row.coeffs[j] >= 0 ? "+" : "") << row.coeffs[j] << " "
          << model.variables[j].name;
    }
    switch (row.relation) {
      case Relation::LessEqual: out << " <= "; break;
      case Relation::Equal: out << " = "; break;
      case Relation::GreaterEqual: out << " >= "; break;
    }
    out << row.rhs << "\n";
  }
  return out.str();
}

std::vector<double> allocation_to_point(const MilpModel& model, const Allocation& alloc) {
  if (alloc.rows() != model.num_sources || alloc.cols() != model.num_processors) {
    throw std::invalid_argument("allocation dimensions do not match model");
  }
  std::vector<double> point(model.variables.size(), 0.0);
  for (const LinkCell& cell : model.cells) {
    const Rational& a = alloc.amounts[cell.source_idx][cell.processor_idx];
    point[static_cast<std::size_t>(cell.alpha_var)] = a.to_double();
    point[static_cast<std::size_t>(cell.x_var)] = a > Rational(0) ? 1.0 : 0.0;
  }
  return point;
}

bool point_feasible(const MilpModel& model, const std::vector<double>& point, double tol) {
  if (point.size() != model.variables.size()) return false;
  for (std::size_t j = 0; j < point.size(); ++j) {
    if (point[j] < model.variables[j].lower - tol) return false;
    if (point[j] > model.variables[j].upper + tol) return false;
  }
  for (const ConstraintRow& row : model.constraints) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < point.size(); ++j) lhs += row.coeffs[j] * point[j];
    switch (row.relation) {
      case Relation::LessEqual:
        if (lhs > row.rhs + tol) return false;
        break;
      case Relation::Equal:
        if (std::abs(lhs - row.rhs) > tol) return false;
        break;
      case Relation::GreaterEqual:
        if (lhs < row.rhs - tol) return false;
        break;
    }
  }
  return true;
}

double point_objective(const MilpModel& model, const std::vector<double>& point) {
  double obj = 0.0;
  for (std::size_t j = 0; j < point.size(); ++j) obj += model.objective[j] * point[j];
  return obj;
}

}  // namespace gridalloc
