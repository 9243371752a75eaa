#include "gridalloc/instance.hpp"

#include <limits>
#include <unordered_set>

#include <json.hpp>

#include "json_num.hpp"

namespace gridalloc {

using nlohmann::json;
using nlohmann::ordered_json;

const char* defect_kind_name(DefectKind kind) {
  switch (kind) {
    case DefectKind::NonPositiveTime: return "NonPositiveTime";
    case DefectKind::NegativeCost: return "NegativeCost";
    case DefectKind::NegativeTransfer: return "NegativeTransfer";
    case DefectKind::NegativeAvailability: return "NegativeAvailability";
    case DefectKind::NonPositiveWorkload: return "NonPositiveWorkload";
    case DefectKind::NegativeBudget: return "NegativeBudget";
    case DefectKind::NegativeDeadline: return "NegativeDeadline";
    case DefectKind::DuplicateId: return "DuplicateId";
    case DefectKind::NoProcessors: return "NoProcessors";
    case DefectKind::NoSources: return "NoSources";
  }
  return "Unknown";
}

namespace {

std::string id_field(const json& object, const std::string& where) {
  const json& v = object.at("id");
  if (!v.is_string()) throw ParseError(where + ".id: expected a string");
  return v.get<std::string>();
}

std::int64_t integer_field(const json& object, const char* key, const std::string& where) {
  const json& v = object.at(key);
  std::string field = where + "." + key;
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_unsigned()) {
    auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      throw ParseError(field + ": number out of range");
    }
    return static_cast<std::int64_t>(u);
  }
  throw ParseError(field + ": expected an integer");
}

}  // namespace

ProblemInstance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("instance document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("instance document: top level must be an object");
  detail::require_keys(doc, "instance document", {"processors", "sources"});
  if (!doc["processors"].is_array()) throw ParseError("processors: expected an array");
  if (!doc["sources"].is_array()) throw ParseError("sources: expected an array");

  ProblemInstance inst;
  std::size_t idx = 0;
  for (const json& p : doc["processors"]) {
    std::string where = "processors[" + std::to_string(idx) + "]";
    if (!p.is_object()) throw ParseError(where + ": expected an object");
    detail::require_keys(p, where, {"id", "time_per_unit", "cost_per_unit", "available_time"},
                         {"transfer_per_unit"});
    ProcessorSpec spec;
    spec.id = id_field(p, where);
    spec.time_per_unit = detail::rational_from_json(p["time_per_unit"], where + ".time_per_unit");
    spec.cost_per_unit = detail::rational_from_json(p["cost_per_unit"], where + ".cost_per_unit");
    spec.transfer_per_unit =
        p.contains("transfer_per_unit")
            ? detail::rational_from_json(p["transfer_per_unit"], where + ".transfer_per_unit")
            : Rational(0);
    spec.available_time =
        detail::rational_from_json(p["available_time"], where + ".available_time");
    inst.processors.push_back(std::move(spec));
    ++idx;
  }
  idx = 0;
  for (const json& s : doc["sources"]) {
    std::string where = "sources[" + std::to_string(idx) + "]";
    if (!s.is_object()) throw ParseError(where + ": expected an object");
    detail::require_keys(s, where, {"id", "workload", "budget", "deadline"});
    SourceSpec spec;
    spec.id = id_field(s, where);
    spec.workload = integer_field(s, "workload", where);
    spec.budget = detail::rational_from_json(s["budget"], where + ".budget");
    spec.deadline = detail::rational_from_json(s["deadline"], where + ".deadline");
    inst.sources.push_back(std::move(spec));
    ++idx;
  }
  return inst;
}

std::string serialize_instance(const ProblemInstance& inst) {
  ordered_json doc;
  doc["processors"] = ordered_json::array();
  for (const ProcessorSpec& p : inst.processors) {
    ordered_json obj;
    obj["id"] = p.id;
    obj["time_per_unit"] = detail::rational_to_json(p.time_per_unit);
    obj["cost_per_unit"] = detail::rational_to_json(p.cost_per_unit);
    obj["transfer_per_unit"] = detail::rational_to_json(p.transfer_per_unit);
    obj["available_time"] = detail::rational_to_json(p.available_time);
    doc["processors"].push_back(std::move(obj));
  }
  doc["sources"] = ordered_json::array();
  for (const SourceSpec& s : inst.sources) {
    ordered_json obj;
    obj["id"] = s.id;
    obj["workload"] = s.workload;
    obj["budget"] = detail::rational_to_json(s.budget);
    obj["deadline"] = detail::rational_to_json(s.deadline);
    doc["sources"].push_back(std::move(obj));
  }
  return doc.dump(2) + "\n";
}

std::vector<InstanceDefect> validate_instance(const ProblemInstance& inst) {
  std::vector<InstanceDefect> defects;
  auto add = [&defects](DefectKind kind, std::string location, std::string message) {
    defects.push_back({kind, std::move(location), std::move(message)});
  };

  if (inst.processors.empty()) add(DefectKind::NoProcessors, "processors", "at least one processor required");
  if (inst.sources.empty()) add(DefectKind::NoSources, "sources", "at least one source required");

  std::unordered_set<std::string> seen;
  auto check_id = [&](const std::string& id, const std::string& path) {
    if (!seen.insert(id).second) add(DefectKind::DuplicateId, path, "id \"" + id + "\" already used");
  };

  for (std::size_t j = 0; j < inst.processors.size(); ++j) {
    const ProcessorSpec& p = inst.processors[j];
    std::string path = "processors[" + std::to_string(j) + "]";
    check_id(p.id, path);
    if (!(p.time_per_unit > Rational(0)))
      add(DefectKind::NonPositiveTime, path + ".time_per_unit", "time_per_unit must be > 0");
    if (p.cost_per_unit < Rational(0))
      add(DefectKind::NegativeCost, path + ".cost_per_unit", "cost_per_unit must be >= 0");
    if (p.transfer_per_unit < Rational(0))
      add(DefectKind::NegativeTransfer, path + ".transfer_per_unit", "transfer_per_unit must be >= 0");
    if (p.available_time < Rational(0))
      add(DefectKind::NegativeAvailability, path + ".available_time", "available_time must be >= 0");
  }
  for (std::size_t i = 0; i < inst.sources.size(); ++i) {
    const SourceSpec& s = inst.sources[i];
    std::string path = "sources[" + std::to_string(i) + "]";
    check_id(s.id, path);
    if (s.workload < 1)
      add(DefectKind::NonPositiveWorkload, path + ".workload", "workload must be >= 1");
    if (s.budget < Rational(0)) add(DefectKind::NegativeBudget, path + ".budget", "budget must be >= 0");
    if (s.deadline < Rational(0))
      add(DefectKind::NegativeDeadline, path + ".deadline", "deadline must be >= 0");
  }
  return defects;
}

std::int64_t big_m(const ProblemInstance& inst, std::size_t source_idx, std::size_t processor_idx) {
  const SourceSpec& src = inst.sources.at(source_idx);
  const ProcessorSpec& proc = inst.processors.at(processor_idx);
  std::int64_t capacity = proc.available_time.floor_div(proc.minutes_per_unit());
  return capacity < src.workload ? capacity : src.workload;
}

}  // namespace gridalloc
