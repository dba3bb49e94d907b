#ifndef HECKE_RATIONAL_HPP
#define HECKE_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "hecke/error.hpp"

namespace hecke {

using BigInt = boost::multiprecision::cpp_int;

// Always stored reduced with a positive denominator.
using Rat = boost::multiprecision::cpp_rational;

inline BigInt numerator_of(const Rat& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator_of(const Rat& q) { return boost::multiprecision::denominator(q); }

inline bool is_integral(const Rat& q) { return denominator_of(q) == 1; }

// Floor division for a positive divisor.
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline BigInt floor_mod(const BigInt& a, const BigInt& b) { return a - floor_div(a, b) * b; }

inline Rat floor_of(const Rat& q) { return Rat(floor_div(numerator_of(q), denominator_of(q))); }

// b mod a for a > 0, result in [0, a).
inline Rat rat_mod(const Rat& b, const Rat& a) { return b - a * floor_of(b / a); }

inline std::string to_string(const BigInt& z) { return z.str(); }

inline std::string to_string(const Rat& q) {
  if (is_integral(q)) return numerator_of(q).str();
  return numerator_of(q).str() + "/" + denominator_of(q).str();
}

inline BigInt parse_bigint(std::string_view text) {
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
  if (i == text.size()) throw Error(ErrorCode::MalformedInput, "empty integer");
  for (std::size_t j = i; j < text.size(); ++j)
    if (text[j] < '0' || text[j] > '9')
      throw Error(ErrorCode::MalformedInput, "bad integer '" + std::string(text) + "'");
  BigInt z(std::string(text.substr(text[0] == '+' ? 1 : 0)));
  return z;
}

inline Rat parse_rat(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rat(parse_bigint(text));
  BigInt den = parse_bigint(text.substr(slash + 1));
  if (den == 0) throw Error(ErrorCode::MalformedInput, "zero denominator");
  return Rat(parse_bigint(text.substr(0, slash)), den);
}

}  // namespace hecke

#endif  // HECKE_RATIONAL_HPP
