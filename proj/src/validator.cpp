#include "gridalloc/validator.hpp"

#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "json_num.hpp"

namespace gridalloc {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void check_dimensions(const ProblemInstance& inst, const Allocation& alloc) {
  if (alloc.rows() != inst.num_sources()) {
    throw std::invalid_argument("allocation rows do not match instance sources");
  }
  for (const auto& row : alloc.amounts) {
    if (row.size() != inst.num_processors()) {
      throw std::invalid_argument("allocation columns do not match instance processors");
    }
  }
}

Rational nearest_integer(const Rational& v) {
  std::int64_t fl = v.floor_div(Rational(1));
  Rational lo(fl), hi(fl + 1);
  return (v - lo) < (hi - v) ? lo : hi;
}

}  // namespace

Rational completion_time(const ProblemInstance& inst, const Allocation& alloc,
                         std::size_t source_idx) {
  check_dimensions(inst, alloc);
  Rational total(0);
  for (std::size_t j = 0; j < inst.num_processors(); ++j) {
    total += inst.processors[j].minutes_per_unit() * alloc.amounts[source_idx][j];
  }
  return total;
}

Rational source_cost(const ProblemInstance& inst, const Allocation& alloc, std::size_t source_idx) {
  check_dimensions(inst, alloc);
  Rational total(0);
  for (std::size_t j = 0; j < inst.num_processors(); ++j) {
    total += inst.processors[j].cost_per_unit * alloc.amounts[source_idx][j];
  }
  return total;
}

Rational processor_busy_time(const ProblemInstance& inst, const Allocation& alloc,
                             std::size_t processor_idx) {
  check_dimensions(inst, alloc);
  Rational total(0);
  for (std::size_t i = 0; i < inst.num_sources(); ++i) {
    total += inst.processors[processor_idx].minutes_per_unit() * alloc.amounts[i][processor_idx];
  }
  return total;
}

FeasibilityReport evaluate(const ProblemInstance& inst, const Allocation& alloc,
                           const EvaluateOptions& options) {
  check_dimensions(inst, alloc);
  FeasibilityReport report;
  auto violate = [&report](std::string label, Rational lhs, Rational rhs) {
    report.violations.push_back({std::move(label), lhs, rhs});
  };

  for (std::size_t i = 0; i < inst.num_sources(); ++i) {
    for (std::size_t j = 0; j < inst.num_processors(); ++j) {
      const Rational& a = alloc.amounts[i][j];
      std::string cell = inst.sources[i].id + "," + inst.processors[j].id;
      if (a < Rational(0)) violate("nonnegative:" + cell, a, Rational(0));
      if (options.mode == ArithmeticMode::Integer && !a.is_integer()) {
        violate("integral:" + cell, a, nearest_integer(a));
      }
    }
  }

  report.total_cost = Rational(0);
  for (std::size_t i = 0; i < inst.num_sources(); ++i) {
    const SourceSpec& s = inst.sources[i];
    Rational assigned(0);
    for (std::size_t j = 0; j < inst.num_processors(); ++j) assigned += alloc.amounts[i][j];
    if (assigned != Rational(s.workload)) {
      violate("conservation:" + s.id, assigned, Rational(s.workload));
    }
    Rational time = completion_time(inst, alloc, i);
    Rational cost = source_cost(inst, alloc, i);
    report.completion_times.push_back(time);
    report.source_costs.push_back(cost);
    report.total_cost += cost;
    if (time > s.deadline) violate("deadline:" + s.id, time, s.deadline);
    if (cost > s.budget) violate("budget:" + s.id, cost, s.budget);
  }

  for (std::size_t j = 0; j < inst.num_processors(); ++j) {
    Rational busy = processor_busy_time(inst, alloc, j);
    report.processor_busy.push_back(busy);
    if (busy > inst.processors[j].available_time) {
      violate("availability:" + inst.processors[j].id, busy, inst.processors[j].available_time);
    }
  }

  if (options.strict_assignment) {
    // Derived x: a processor may carry positive load from at most one source.
    for (std::size_t j = 0; j < inst.num_processors(); ++j) {
      std::int64_t serving = 0;
      for (std::size_t i = 0; i < inst.num_sources(); ++i) {
        if (alloc.amounts[i][j] > Rational(0)) ++serving;
      }
      if (serving > 1) violate("assignment:" + inst.processors[j].id, Rational(serving), Rational(1));
    }
  }

  report.feasible = report.violations.empty();
  return report;
}

Allocation parse_allocation(std::string_view text, const ProblemInstance& inst) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("allocation document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("allocation")) {
    throw ParseError("allocation document: missing \"allocation\" array");
  }
  const json& rows = doc["allocation"];
  if (!rows.is_array()) throw ParseError("allocation: expected an array");

  std::unordered_map<std::string, std::size_t> source_index;
  for (std::size_t i = 0; i < inst.num_sources(); ++i) source_index[inst.sources[i].id] = i;
  std::unordered_map<std::string, std::size_t> processor_index;
  for (std::size_t j = 0; j < inst.num_processors(); ++j) processor_index[inst.processors[j].id] = j;

  Allocation alloc = Allocation::zeros(inst.num_sources(), inst.num_processors());
  std::unordered_set<std::string> seen_sources;
  std::size_t idx = 0;
  for (const json& row : rows) {
    std::string where = "allocation[" + std::to_string(idx) + "]";
    if (!row.is_object()) throw ParseError(where + ": expected an object");
    detail::require_keys(row, where, {"source", "assignments"});
    if (!row["source"].is_string()) throw ParseError(where + ".source: expected a string");
    std::string sid = row["source"].get<std::string>();
    auto sit = source_index.find(sid);
    if (sit == source_index.end()) throw ParseError(where + ": unknown source id \"" + sid + "\"");
    if (!seen_sources.insert(sid).second) {
      throw ParseError(where + ": duplicate source id \"" + sid + "\"");
    }
    const json& assignments = row["assignments"];
    if (!assignments.is_array()) throw ParseError(where + ".assignments: expected an array");
    std::unordered_set<std::string> seen_processors;
    std::size_t k = 0;
    for (const json& entry : assignments) {
      std::string ewhere = where + ".assignments[" + std::to_string(k) + "]";
      if (!entry.is_object()) throw ParseError(ewhere + ": expected an object");
      detail::require_keys(entry, ewhere, {"processor", "units"});
      if (!entry["processor"].is_string()) throw ParseError(ewhere + ".processor: expected a string");
      std::string pid = entry["processor"].get<std::string>();
      auto pit = processor_index.find(pid);
      if (pit == processor_index.end()) {
        throw ParseError(ewhere + ": unknown processor id \"" + pid + "\"");
      }
      if (!seen_processors.insert(pid).second) {
        throw ParseError(ewhere + ": duplicate processor id \"" + pid + "\"");
      }
      alloc.amounts[sit->second][pit->second] =
          detail::rational_from_json(entry["units"], ewhere + ".units");
      ++k;
    }
    ++idx;
  }
  return alloc;
}

std::string serialize_allocation(const ProblemInstance& inst, const Allocation& alloc) {
  check_dimensions(inst, alloc);
  ordered_json doc;
  doc["allocation"] = ordered_json::array();
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
    doc["allocation"].push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

}  // namespace gridalloc
