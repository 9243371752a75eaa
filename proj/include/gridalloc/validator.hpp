#pragma once

#include <string>
#include <vector>

#include "gridalloc/instance.hpp"

namespace gridalloc {

enum class ArithmeticMode { Integer, Continuous };

struct Violation {
  std::string constraint;  // e.g. "deadline:S1", "availability:P2", "assignment:P5"
  Rational lhs;
  Rational rhs;
};

struct FeasibilityReport {
  bool feasible = false;
  std::vector<Violation> violations;
  std::vector<Rational> completion_times;  // per source, minutes
  std::vector<Rational> source_costs;      // per source, currency
  std::vector<Rational> processor_busy;    // per processor, minutes
  Rational total_cost;
};

struct EvaluateOptions {
  ArithmeticMode mode = ArithmeticMode::Integer;
  bool strict_assignment = false;  // literal one-source-per-processor rule
};

// Minutes source i spends in total: sum over processors of
// (transfer + processing) time for its chunks.
Rational completion_time(const ProblemInstance& inst, const Allocation& alloc, std::size_t source_idx);

Rational source_cost(const ProblemInstance& inst, const Allocation& alloc, std::size_t source_idx);

Rational processor_busy_time(const ProblemInstance& inst, const Allocation& alloc,
                             std::size_t processor_idx);

// Exact replay of an allocation: conservation, deadlines, budgets,
// availability, nonnegativity, integrality (integer mode) and, in strict
// mode, the one-source-per-processor rule. All arithmetic is exact; the
// verdict carries no floating-point tolerance. Throws std::invalid_argument
// on dimension mismatch.
FeasibilityReport evaluate(const ProblemInstance& inst, const Allocation& alloc,
                           const EvaluateOptions& options = {});

// External allocation document: {"allocation":[{"source":..,"assignments":
// [{"processor":..,"units":..}, ...]}, ...]}. Unknown ids and duplicate pairs
// are rejected; omitted pairs mean zero. Extra top-level keys are tolerated so
// a solve report can be replayed directly.
Allocation parse_allocation(std::string_view text, const ProblemInstance& inst);

std::string serialize_allocation(const ProblemInstance& inst, const Allocation& alloc);

}  // namespace gridalloc
