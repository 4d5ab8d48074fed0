#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "tourpow/errors.hpp"

namespace tourpow {

/// Exact rational used for every density and threshold comparison.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InputError("zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

inline Rational rpow(const Rational& base, unsigned e) {
  Rational r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

inline BigInt pow2(unsigned e) { return BigInt(1) << e; }

/// Smallest integer c with c >= x.
inline BigInt ceil_of(const Rational& x) {
  BigInt num = boost::multiprecision::numerator(x);
  BigInt den = boost::multiprecision::denominator(x);
  BigInt q = num / den;
  if (q * den < num) q += 1;
  return q;
}

/// Smallest integer count c with c >= x, clamped into int64 range.
inline std::int64_t ceil_count(const Rational& x) {
  BigInt c = ceil_of(x);
  if (c > BigInt(INT64_MAX)) return INT64_MAX;
  if (c < BigInt(INT64_MIN)) return INT64_MIN;
  return c.convert_to<std::int64_t>();
}

inline std::string to_string(const Rational& r) {
  auto num = boost::multiprecision::numerator(r);
  auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Parses "p/q", an integer, or a finite decimal such as "0.15" exactly.
inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos)
      return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(BigInt(s));
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt f = frac.empty() ? BigInt(0) : BigInt(frac);
    Rational r = Rational(BigInt(whole)) + Rational(neg ? BigInt(-f) : f, scale);
    return r;
  } catch (const std::exception&) {
    throw InputError("cannot parse rational '" + s + "'");
  }
}

}  // namespace tourpow
