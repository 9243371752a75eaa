#pragma once

// Internal helpers shared by the document readers/writers: exact JSON number
// <-> Rational conversion and the fixed number-rendering policy (integral
// values as integers, anything else as the shortest round-trip decimal).

#include <json.hpp>

#include "gridalloc/instance.hpp"
#include "gridalloc/rational.hpp"

namespace gridalloc::detail {

inline Rational rational_from_json(const nlohmann::json& value, const std::string& where) {
  if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
  if (value.is_number_unsigned()) {
    auto u = value.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      throw ParseError(where + ": number out of range");
    }
    return Rational(static_cast<std::int64_t>(u));
  }
  if (value.is_number_float()) return Rational::from_double(value.get<double>());
  throw ParseError(where + ": expected a number");
}

inline nlohmann::ordered_json rational_to_json(const Rational& value) {
  if (value.is_integer()) return value.to_int64();
  return value.to_double();
}

// Doubles coming out of the LP path: render near-integers as integers so that
// report bytes do not depend on float noise below the solver tolerance.
inline nlohmann::ordered_json double_to_json(double value) {
  double rounded = std::nearbyint(value);
  if (std::abs(value - rounded) < 1e-9 && std::abs(rounded) < 9e15) {
    return static_cast<std::int64_t>(rounded);
  }
  return value;
}

inline void require_keys(const nlohmann::json& object, const std::string& where,
                         std::initializer_list<const char*> required,
                         std::initializer_list<const char*> optional = {}) {
  for (const char* key : required) {
    if (!object.contains(key)) throw ParseError(where + ": missing field \"" + key + "\"");
  }
  for (auto it = object.begin(); it != object.end(); ++it) {
    bool known = false;
    for (const char* key : required) known = known || it.key() == key;
    for (const char* key : optional) known = known || it.key() == key;
    if (!known) throw ParseError(where + ": unknown field \"" + it.key() + "\"");
  }
}

}  // namespace gridalloc::detail
