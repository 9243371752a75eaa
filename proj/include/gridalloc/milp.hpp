#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridalloc/instance.hpp"
#include "gridalloc/validator.hpp"

namespace gridalloc {

enum class VarKind { Continuous, Integer, Binary };

enum class Relation { LessEqual, Equal, GreaterEqual };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = 0.0;  // may be +infinity
};

struct ConstraintRow {
  std::vector<double> coeffs;  // dense, length == number of variables
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
  std::string label;  // names the constraint family and subject, e.g. "deadline:S1"
};

// alpha/x pairing for one (source, processor) cell, kept so solvers can map
// variable indices back to the allocation matrix without re-deriving layout.
struct LinkCell {
  std::size_t source_idx;
  std::size_t processor_idx;
  int alpha_var;
  int x_var;
  std::int64_t big_m;
};

struct MilpModel {
  std::vector<Variable> variables;
  std::vector<double> objective;  // minimize
  std::vector<ConstraintRow> constraints;

  std::size_t num_sources = 0;
  std::size_t num_processors = 0;
  ArithmeticMode mode = ArithmeticMode::Integer;
  bool strict_assignment = false;
  std::vector<LinkCell> cells;  // row-major over (source, processor)
};

enum class MilpStatus { Optimal, Infeasible, Unbounded, NodeLimit };

const char* milp_status_name(MilpStatus status);

struct MilpSolution {
  MilpStatus status = MilpStatus::Infeasible;
  std::vector<double> values;  // aligned with model.variables
  Rational objective_value;    // exact, recomputed from the rounded solution
};

// Realizes the cost-minimization program: variables alpha[i][j] in
// [0, big_m(i,j)] (integer in integer mode) and binary x[i][j]; objective
// sum c_j * alpha[i][j]; rows per source for deadline, budget and
// conservation, per processor for availability, and per cell the linking row
// alpha <= M*x. strict_eq6 additionally forces sum_i x[i][j] = 1 per
// processor. Requires a defect-free instance.
MilpModel build_milp(const ProblemInstance& inst, ArithmeticMode mode, bool strict_eq6 = false);

// Same rows and objective with every integer/binary variable made continuous.
MilpModel lp_relaxation(const MilpModel& model);

// Line-oriented debug listing: variables with bounds, then one
// "label: lhs relation rhs" line per constraint.
std::string dump_model(const MilpModel& model);

// Maps an allocation onto a model point (x[i][j] = 1 iff alpha[i][j] > 0).
std::vector<double> allocation_to_point(const MilpModel& model, const Allocation& alloc);

// True when the point satisfies every row and bound within tol.
bool point_feasible(const MilpModel& model, const std::vector<double>& point, double tol);

double point_objective(const MilpModel& model, const std::vector<double>& point);

}  // namespace gridalloc
