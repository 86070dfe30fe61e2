#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <tuple>

#include "devissage/errors.hpp"

namespace devissage {

using Integer = boost::multiprecision::cpp_int;

inline Integer ipow(Integer base, unsigned exp) {
  Integer r = 1;
  while (exp) {
    if (exp & 1U) r *= base;
    base *= base;
    exp >>= 1U;
  }
  return r;
}

inline Integer abs_value(const Integer &x) { return x < 0 ? Integer(-x) : x; }

/// Remainder in [0, m) for m > 0.
inline Integer mod_floor(const Integer &x, const Integer &m) {
  Integer r = x % m;
  if (r < 0) r += m;
  return r;
}

/// Exponent of ell in x; x must be nonzero.
inline unsigned valuation(Integer x, const Integer &ell) {
  if (x == 0) throw InternalError("valuation of zero");
  unsigned v = 0;
  if (x < 0) x = -x;
  while (x % ell == 0) {
    x /= ell;
    ++v;
  }
  return v;
}

/// Part of x prime to ell (positive).
inline Integer prime_to_part(Integer x, const Integer &ell) {
  if (x < 0) x = -x;
  if (x == 0) return 0;
  while (x % ell == 0) x /= ell;
  return x;
}

inline Integer gcd(Integer a, Integer b) {
  a = abs_value(a);
  b = abs_value(b);
  while (b != 0) {
    Integer t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0.
inline std::tuple<Integer, Integer, Integer> ext_gcd(const Integer &a,
                                                     const Integer &b) {
  Integer r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    Integer q = r0 / r1;
    Integer tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = s0 - q * s1;
    s0 = s1;
    s1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (r0 < 0) {
    r0 = -r0;
    s0 = -s0;
    t0 = -t0;
  }
  return {r0, s0, t0};
}

/// Inverse of a modulo m; throws if not a unit.
inline Integer inverse_mod(const Integer &a, const Integer &m) {
  if (m == 1) return 0;
  auto [g, s, t] = ext_gcd(mod_floor(a, m), m);
  (void)t;
  if (g != 1) throw NotLiftable("element is not a unit modulo " + m.str());
  return mod_floor(s, m);
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::int64_t to_i64(const Integer &x) {
  if (x > INT64_MAX || x < INT64_MIN)
    throw InternalError("integer does not fit in 64 bits: " + x.str());
  return static_cast<std::int64_t>(x);
}

} // namespace devissage
