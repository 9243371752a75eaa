#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace gridalloc {

// Exact rational number with int64 numerator/denominator, always normalized
// (gcd 1, denominator > 0). Intermediate products use 128-bit arithmetic and
// throw std::overflow_error if a normalized result does not fit in int64.
// Instance data are small decimals, so overflow indicates corrupt input.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT(google-explicit-constructor)

  static Rational fraction(std::int64_t num, std::int64_t den);

  // Parses a plain decimal literal: [-]digits[.digits][(e|E)[-]digits].
  // Returns nullopt on malformed text or overflow.
  static std::optional<Rational> parse_decimal(std::string_view text);

  // Exact conversion from a double via its shortest round-trip decimal form,
  // so 0.1 becomes exactly 1/10 rather than the binary64 neighbour.
  static Rational from_double(double value);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  bool is_integer() const { return den_ == 1; }
  std::int64_t to_int64() const;  // requires is_integer()
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // floor(*this / divisor) as an integer; divisor must be positive.
  std::int64_t floor_div(const Rational& divisor) const;

  Rational operator-() const;
  Rational operator+(const Rational& rhs) const;
  Rational operator-(const Rational& rhs) const;
  Rational operator*(const Rational& rhs) const;
  Rational operator/(const Rational& rhs) const;
  Rational& operator+=(const Rational& rhs) { return *this = *this + rhs; }
  Rational& operator-=(const Rational& rhs) { return *this = *this - rhs; }
  Rational& operator*=(const Rational& rhs) { return *this = *this * rhs; }

  bool operator==(const Rational& rhs) const { return num_ == rhs.num_ && den_ == rhs.den_; }
  bool operator!=(const Rational& rhs) const { return !(*this == rhs); }
  bool operator<(const Rational& rhs) const;
  bool operator<=(const Rational& rhs) const { return *this < rhs || *this == rhs; }
  bool operator>(const Rational& rhs) const { return rhs < *this; }
  bool operator>=(const Rational& rhs) const { return rhs <= *this; }

  // Decimal rendering: plain digits for integers, exact decimal expansion when
  // the denominator is of the form 2^a·5^b (always true for parsed decimals),
  // otherwise "num/den".
  std::string to_string() const;

 private:
  static Rational normalized(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace gridalloc
