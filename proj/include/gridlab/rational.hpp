// Exact arithmetic support: arbitrary-precision integers and rationals
// (boost::multiprecision, header-only backends) plus a compact fixed-width
// rational used for strategy-table entries.
//
// Everything that claims "exact" in this library — chosen-value pmfs, hull
// feasibility, consistentization, scramble means — funnels through these
// types; doubles only appear where a quantity is inherently statistical or
// a metric evaluated at floating tolerance.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "gridlab/errors.hpp"

namespace gridlab {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Exact int64-backed rational, always kept normalized (gcd 1, den > 0).
// Table entries are probabilities, so the interesting range is [0, 1] with
// small denominators; arithmetic that could outgrow int64 is done in
// BigRational by the callers.
struct Rat64 {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rat64() = default;
  Rat64(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw ContractError("Rat64: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  bool operator==(const Rat64& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Rat64& o) const { return !(*this == o); }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  BigRational to_big() const { return BigRational(num, den); }
};

// Exact conversion of a finite double to a rational: every finite double is
// a dyadic rational, so this never rounds.
inline BigRational rational_from_double(double x) {
  if (!std::isfinite(x)) throw ContractError("rational_from_double: non-finite value");
  if (x == 0.0) return BigRational(0);
  int exp = 0;
  // frexp: x = mant * 2^exp with mant in [0.5, 1); scale mantissa to an integer.
  const double mant = std::frexp(x, &exp);
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  BigRational r(scaled);
  if (exp > 0) {
    r *= BigRational(BigInt(1) << exp);
  } else if (exp < 0) {
    r /= BigRational(BigInt(1) << (-exp));
  }
  return r;
}

inline double to_double(const BigRational& r) {
  return static_cast<double>(r);
}

// K^D and friends as exact integers.
inline BigInt ipow(std::int64_t base, int exp) {
  BigInt result = 1;
  BigInt b = base;
  for (int e = exp; e > 0; e >>= 1) {
    if (e & 1) result *= b;
    if (e > 1) b *= b;
  }
  return result;
}

inline std::string to_string(const BigInt& v) { return v.str(); }

}  // namespace gridlab
