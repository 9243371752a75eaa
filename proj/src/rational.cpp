#include "gridalloc/rational.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gridalloc {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

constexpr __int128 kInt64Max = std::numeric_limits<std::int64_t>::max();
constexpr __int128 kInt64Min = std::numeric_limits<std::int64_t>::min();

}  // namespace

Rational Rational::normalized(__int128 num, __int128 den) {
  if (den == 0) throw std::domain_error("rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) return Rational(0);
  __int128 g = gcd128(num, den);
  num /= g;
  den /= g;
  if (num > kInt64Max || num < kInt64Min || den > kInt64Max) {
    throw std::overflow_error("rational: value exceeds 64-bit range");
  }
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational Rational::fraction(std::int64_t num, std::int64_t den) {
  return normalized(num, den);
}

std::optional<Rational> Rational::parse_decimal(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '-' || text[pos] == '+') {
    negative = text[pos] == '-';
    ++pos;
  }
  __int128 mantissa = 0;
  int digits = 0;
  int frac_digits = 0;
  bool seen_dot = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
      continue;
    }
    if (c == 'e' || c == 'E') break;
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    if (digits >= 37) return std::nullopt;  // would overflow __int128 scaling below
    mantissa = mantissa * 10 + (c - '0');
    ++digits;
    if (seen_dot) ++frac_digits;
  }
  if (digits == 0) return std::nullopt;
  long exponent = 0;
  if (pos < text.size()) {  // exponent part
    ++pos;
    if (pos >= text.size()) return std::nullopt;
    const char* begin = text.data() + pos;
    const char* end = text.data() + text.size();
    auto [p, ec] = std::from_chars(begin, end, exponent);
    if (ec != std::errc() || p != end) return std::nullopt;
  }
  long net = exponent - frac_digits;
  if (net > 30 || net < -30) return std::nullopt;
  __int128 num = negative ? -mantissa : mantissa;
  __int128 den = 1;
  for (long i = 0; i < net; ++i) num *= 10;
  for (long i = 0; i > net; --i) den *= 10;
  try {
    return normalized(num, den);
  } catch (const std::overflow_error&) {
    return std::nullopt;
  }
}

Rational Rational::from_double(double value) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::invalid_argument("rational: unrepresentable double");
  auto parsed = parse_decimal(std::string_view(buf, static_cast<std::size_t>(end - buf)));
  if (!parsed) throw std::overflow_error("rational: double out of exact range");
  return *parsed;
}

std::int64_t Rational::to_int64() const {
  if (den_ != 1) throw std::domain_error("rational: not an integer");
  return num_;
}

std::int64_t Rational::floor_div(const Rational& divisor) const {
  if (!(Rational(0) < divisor)) throw std::domain_error("rational: nonpositive divisor");
  // floor((a/b) / (c/d)) = floor(a*d / (b*c))
  __int128 n = static_cast<__int128>(num_) * divisor.den_;
  __int128 d = static_cast<__int128>(den_) * divisor.num_;
  __int128 q = n / d;
  if (n % d != 0 && (n < 0)) --q;
  if (q > kInt64Max || q < kInt64Min) throw std::overflow_error("rational: floor_div overflow");
  return static_cast<std::int64_t>(q);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

Rational Rational::operator+(const Rational& rhs) const {
  __int128 n = static_cast<__int128>(num_) * rhs.den_ + static_cast<__int128>(rhs.num_) * den_;
  __int128 d = static_cast<__int128>(den_) * rhs.den_;
  return normalized(n, d);
}

Rational Rational::operator-(const Rational& rhs) const { return *this + (-rhs); }

Rational Rational::operator*(const Rational& rhs) const {
  __int128 n = static_cast<__int128>(num_) * rhs.num_;
  __int128 d = static_cast<__int128>(den_) * rhs.den_;
  return normalized(n, d);
}

Rational Rational::operator/(const Rational& rhs) const {
  if (rhs.num_ == 0) throw std::domain_error("rational: division by zero");
  __int128 n = static_cast<__int128>(num_) * rhs.den_;
  __int128 d = static_cast<__int128>(den_) * rhs.num_;
  return normalized(n, d);
}

bool Rational::operator<(const Rational& rhs) const {
  return static_cast<__int128>(num_) * rhs.den_ < static_cast<__int128>(rhs.num_) * den_;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  // Exact decimal expansion when den = 2^a * 5^b.
  std::int64_t d = den_;
  int twos = 0;
  int fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);
  int scale = twos > fives ? twos : fives;
  __int128 scaled = num_;
  for (int i = 0; i < scale; ++i) scaled *= 10;
  scaled /= den_;
  bool neg = scaled < 0;
  if (neg) scaled = -scaled;
  std::string digits;
  while (scaled > 0) {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(scaled % 10)));
    scaled /= 10;
  }
  while (static_cast<int>(digits.size()) <= scale) digits.insert(digits.begin(), '0');
  digits.insert(digits.size() - static_cast<std::size_t>(scale), ".");
  // Trim trailing zeros but keep at least one fractional digit.
  while (digits.back() == '0' && digits[digits.size() - 2] != '.') digits.pop_back();
  return neg ? "-" + digits : digits;
}

}  // namespace gridalloc
