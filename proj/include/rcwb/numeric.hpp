#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "rcwb/error.hpp"

namespace rcwb {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline BigInt pow2(unsigned exponent) {
  BigInt one = 1;
  return one << exponent;
}

inline std::string to_string(const BigInt& value) { return value.str(); }

/// Exact "p/q" form; the denominator is always written, even when it is 1.
inline std::string to_string(const Rational& value) {
  return numerator(value).str() + "/" + denominator(value).str();
}

/// Approximate decimal rendering for human-readable output only.
inline double to_double(const Rational& value) { return value.convert_to<double>(); }

inline BigInt parse_bigint(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::ParseError, "empty integer");
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) throw Error(ErrorCode::ParseError, "bad integer '" + std::string(text) + "'");
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw Error(ErrorCode::ParseError, "bad integer '" + std::string(text) + "'");
    }
  }
  // Leading zeros would select octal in the cpp_int string constructor.
  std::string_view digits = text.substr(start);
  while (digits.size() > 1 && digits[0] == '0') digits.remove_prefix(1);
  BigInt value{std::string(digits)};
  return text[0] == '-' ? BigInt(-value) : value;
}

/// Accepts "p/q" or a bare integer "p"; the result is in lowest terms.
inline Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_bigint(text));
  BigInt num = parse_bigint(text.substr(0, slash));
  BigInt den = parse_bigint(text.substr(slash + 1));
  if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

/// Largest integer <= q.
inline BigInt floor(const Rational& q) {
  BigInt num = numerator(q);
  BigInt den = denominator(q);
  BigInt quotient = num / den;
  if (num < 0 && quotient * den != num) --quotient;
  return quotient;
}

/// Smallest integer strictly greater than q.
inline BigInt floor_plus_one(const Rational& q) { return floor(q) + 1; }

inline bool fits_u64(const BigInt& value) {
  return value >= 0 && value <= BigInt(std::numeric_limits<std::uint64_t>::max());
}

}  // namespace rcwb
