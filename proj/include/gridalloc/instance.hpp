#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridalloc/rational.hpp"

namespace gridalloc {

// One grid resource: per-unit processing time/cost, per-unit transfer time,
// and the total time window it is available for.
struct ProcessorSpec {
  std::string id;
  Rational time_per_unit;      // minutes per workload unit, > 0
  Rational cost_per_unit;      // currency per workload unit, >= 0
  Rational transfer_per_unit;  // minutes per workload unit, >= 0 (0 when omitted)
  Rational available_time;     // minutes, >= 0

  Rational minutes_per_unit() const { return transfer_per_unit + time_per_unit; }
};

// One grid user's job: a divisible workload with a budget and a deadline.
struct SourceSpec {
  std::string id;
  std::int64_t workload = 0;  // whole workload units, >= 1
  Rational budget;            // currency, >= 0
  Rational deadline;          // minutes, >= 0
};

struct ProblemInstance {
  std::vector<ProcessorSpec> processors;
  std::vector<SourceSpec> sources;

  std::size_t num_processors() const { return processors.size(); }
  std::size_t num_sources() const { return sources.size(); }
};

// Units of each source's workload assigned to each processor. Row i follows
// instance.sources[i], column j follows instance.processors[j]. Entries are
// integral in integer mode; continuous mode admits fractional amounts.
struct Allocation {
  std::vector<std::vector<Rational>> amounts;

  std::size_t rows() const { return amounts.size(); }
  std::size_t cols() const { return amounts.empty() ? 0 : amounts[0].size(); }

  static Allocation zeros(std::size_t rows, std::size_t cols) {
    Allocation a;
    a.amounts.assign(rows, std::vector<Rational>(cols, Rational(0)));
    return a;
  }
};

enum class DefectKind {
  NonPositiveTime,       // time_per_unit <= 0
  NegativeCost,          // cost_per_unit < 0
  NegativeTransfer,      // transfer_per_unit < 0
  NegativeAvailability,  // available_time < 0
  NonPositiveWorkload,   // workload < 1
  NegativeBudget,        // budget < 0
  NegativeDeadline,      // deadline < 0
  DuplicateId,           // id repeated anywhere in the instance
  NoProcessors,
  NoSources,
};

const char* defect_kind_name(DefectKind kind);

struct InstanceDefect {
  DefectKind kind;
  std::string location;  // offending id or field path
  std::string message;
};

// Malformed instance/allocation documents (bad JSON, wrong shapes, unknown
// fields). Value-range problems are InstanceDefects from validate_instance.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Parses the external instance document. Throws ParseError naming the line or
// field on malformed input; range violations are left for validate_instance.
ProblemInstance parse_instance(std::string_view text);

// Fixed-order document rendering; parse(serialize(inst)) == inst exactly.
std::string serialize_instance(const ProblemInstance& inst);

// Exhaustive check of every type invariant; empty result means valid.
std::vector<InstanceDefect> validate_instance(const ProblemInstance& inst);

// Upper bound on alpha[i][j] in any feasible solution:
// min(workload_i, floor(available_j / (transfer_j + time_j))).
std::int64_t big_m(const ProblemInstance& inst, std::size_t source_idx, std::size_t processor_idx);

}  // namespace gridalloc
