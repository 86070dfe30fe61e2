#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

#include "devissage/errors.hpp"
#include "devissage/integer.hpp"
#include "devissage/matrix.hpp"

namespace devissage {

using Rational = boost::multiprecision::cpp_rational;

/// Polynomial with coefficients in ascending degree order.
template <class T> struct Poly {
  std::vector<T> c;

  Poly() = default;
  explicit Poly(std::vector<T> coeffs) : c(std::move(coeffs)) { trim(); }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  [[nodiscard]] int degree() const { return static_cast<int>(c.size()) - 1; }
  [[nodiscard]] bool is_zero() const { return c.empty(); }
  [[nodiscard]] T lead() const { return c.empty() ? T(0) : c.back(); }
  [[nodiscard]] T at(std::size_t i) const { return i < c.size() ? c[i] : T(0); }

  [[nodiscard]] T eval(const T &x) const {
    T r = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
    return r;
  }

  friend Poly operator*(const Poly &a, const Poly &b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> r(a.c.size() + b.c.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c.size(); ++i)
      for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return Poly(r);
  }
  friend Poly operator-(const Poly &a, const Poly &b) {
    std::vector<T> r(std::max(a.c.size(), b.c.size()), T(0));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.at(i) - b.at(i);
    return Poly(r);
  }
  friend Poly operator+(const Poly &a, const Poly &b) {
    std::vector<T> r(std::max(a.c.size(), b.c.size()), T(0));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.at(i) + b.at(i);
    return Poly(r);
  }
  friend bool operator==(const Poly &a, const Poly &b) { return a.c == b.c; }
};

using RPoly = Poly<Rational>;
using ZPoly = Poly<Integer>;

inline RPoly to_rational(const ZPoly &p) {
  std::vector<Rational> c;
  for (const auto &x : p.c) c.emplace_back(x);
  return RPoly(c);
}

/// Quotient and remainder over the rationals.
inline std::pair<RPoly, RPoly> divmod(RPoly a, const RPoly &b) {
  if (b.is_zero()) throw InternalError("division by zero polynomial");
  if (a.degree() < b.degree()) return {RPoly{}, a};
  std::vector<Rational> q(static_cast<std::size_t>(a.degree() - b.degree() + 1), Rational(0));
  while (!a.is_zero() && a.degree() >= b.degree()) {
    const std::size_t shift = static_cast<std::size_t>(a.degree() - b.degree());
    Rational f = a.lead() / b.lead();
    q[shift] = f;
    for (std::size_t i = 0; i < b.c.size(); ++i) a.c[i + shift] -= f * b.c[i];
    a.trim();
  }
  return {RPoly(q), a};
}

inline RPoly derivative(const RPoly &p) {
  std::vector<Rational> d;
  for (std::size_t i = 1; i < p.c.size(); ++i) d.push_back(p.c[i] * static_cast<int>(i));
  return RPoly(d);
}

inline RPoly poly_gcd(RPoly a, RPoly b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = b;
    b = r;
  }
  if (!a.is_zero()) {
    Rational l = a.lead();
    for (auto &x : a.c) x /= l;
  }
  return a;
}

/// Multiplicity of x0 as a root.
inline unsigned root_multiplicity(RPoly p, const Rational &x0) {
  if (p.is_zero()) throw InternalError("multiplicity in the zero polynomial");
  unsigned m = 0;
  RPoly lin(std::vector<Rational>{-x0, Rational(1)});
  while (p.degree() >= 1 && p.eval(x0) == 0) {
    p = divmod(p, lin).first;
    ++m;
  }
  return m;
}

/// Characteristic polynomial det(T - M) by Faddeev-LeVerrier over the rationals.
inline ZPoly charpoly_of_matrix(const IntMatrix &m) {
  const std::size_t n = m.rows();
  Matrix<Rational> a(n, n), mk(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = Rational(m(i, j));
  std::vector<Rational> c(n + 1, Rational(0));
  c[n] = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix<Rational> t = mk;
    for (std::size_t i = 0; i < n; ++i) t(i, i) += c[n - k + 1];
    mk = a * t;
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += mk(i, i);
    c[n - k] = -tr / static_cast<int>(k);
  }
  std::vector<Integer> out;
  for (const auto &x : c) {
    if (denominator(x) != 1) throw InternalError("non-integral characteristic polynomial");
    out.push_back(numerator(x));
  }
  return ZPoly(out);
}

/// Power sums p_1..p_n of the roots of a monic polynomial.
inline std::vector<Integer> power_sums(const ZPoly &p, std::size_t n) {
  const int d = p.degree();
  // e_k with sign: p(T) = sum_k (-1)^k e_k T^{d-k}.
  std::vector<Integer> e(static_cast<std::size_t>(d) + 1);
  for (int k = 0; k <= d; ++k) e[k] = (k % 2 ? -1 : 1) * p.at(static_cast<std::size_t>(d - k));
  // Newton: p_k = sum_{i<k} (-1)^{i-1} e_i p_{k-i} + (-1)^{k-1} k e_k.
  std::vector<Integer> ps(n + 1, 0);
  for (std::size_t k = 1; k <= n; ++k) {
    Integer s = 0;
    for (std::size_t i = 1; i < k; ++i)
      if (i <= static_cast<std::size_t>(d)) s += ((i - 1) % 2 ? -1 : 1) * e[i] * ps[k - i];
    if (k <= static_cast<std::size_t>(d)) s += ((k - 1) % 2 ? -1 : 1) * Integer(k) * e[k];
    ps[k] = s;
  }
  return ps;
}

/// Monic polynomial of degree d whose roots have power sums ps[1..d].
inline ZPoly from_power_sums(const std::vector<Integer> &ps, std::size_t d) {
  std::vector<Rational> e(d + 1, Rational(0));
  e[0] = 1;
  for (std::size_t k = 1; k <= d; ++k) {
    Rational s = 0;
    for (std::size_t i = 1; i <= k; ++i)
      s += ((i - 1) % 2 ? Rational(-1) : Rational(1)) * e[k - i] * Rational(ps[i]);
    e[k] = s / static_cast<int>(k);
  }
  std::vector<Integer> c(d + 1);
  for (std::size_t k = 0; k <= d; ++k) {
    Rational v = (k % 2 ? Rational(-1) : Rational(1)) * e[k];
    if (denominator(v) != 1) throw InternalError("power sums are not integral");
    c[d - k] = numerator(v);
  }
  return ZPoly(c);
}

/// Characteristic polynomial of M^(tensor j) from that of M.
inline ZPoly tensor_power_charpoly(const ZPoly &p, unsigned j) {
  std::size_t d = 1;
  for (unsigned i = 0; i < j; ++i) d *= static_cast<std::size_t>(p.degree());
  if (j == 0) return ZPoly(std::vector<Integer>{-1, 1});
  std::vector<Integer> ps = power_sums(p, d);
  for (auto &x : ps) x = ipow(x, j);
  ps[0] = 0;
  return from_power_sums(ps, d);
}

/// Characteristic polynomial of q^r M from that of M.
inline RPoly scaled_charpoly(const ZPoly &p, const Integer &q, int r) {
  const int d = p.degree();
  std::vector<Rational> c(static_cast<std::size_t>(d) + 1);
  Rational qr = r >= 0 ? Rational(ipow(q, static_cast<unsigned>(r)))
                       : Rational(1) / Rational(ipow(q, static_cast<unsigned>(-r)));
  for (int k = 0; k <= d; ++k) {
    Rational f = 1;
    for (int i = 0; i < d - k; ++i) f *= qr;
    c[static_cast<std::size_t>(k)] = Rational(p.at(static_cast<std::size_t>(k))) * f;
  }
  return RPoly(c);
}

/// Companion matrix of a monic polynomial.
inline IntMatrix companion(const ZPoly &p) {
  const std::size_t n = static_cast<std::size_t>(p.degree());
  IntMatrix c(n, n);
  for (std::size_t i = 1; i < n; ++i) c(i, i - 1) = 1;
  for (std::size_t i = 0; i < n; ++i) c(i, n - 1) = -p.at(i);
  return c;
}

/// Weil polynomial data of an abelian variety over the field with q elements.
struct CharPoly {
  /// Monic, ascending coefficients, degree 2g.
  ZPoly poly;
  Integer q;
  unsigned g = 0;

  CharPoly() = default;
  CharPoly(ZPoly p, Integer q_, unsigned g_) : poly(std::move(p)), q(std::move(q_)), g(g_) {
    if (poly.degree() != static_cast<int>(2 * g) || poly.lead() != 1)
      throw WeilCheckFailed("polynomial must be monic of degree 2g = " + std::to_string(2 * g));
    if (poly.at(0) == 0) throw WeilCheckFailed("constant term vanishes");
  }
  /// From descending coefficients, the order used in instance files.
  static CharPoly from_descending(const std::vector<Integer> &desc, const Integer &q) {
    std::vector<Integer> asc(desc.rbegin(), desc.rend());
    ZPoly p(asc);
    if (p.degree() < 0 || p.degree() % 2)
      throw WeilCheckFailed("degree must be even and positive");
    return {p, q, static_cast<unsigned>(p.degree() / 2)};
  }

  [[nodiscard]] std::string str() const {
    std::string s;
    for (int k = poly.degree(); k >= 0; --k) {
      const Integer &a = poly.c[static_cast<std::size_t>(k)];
      if (a == 0) continue;
      std::string mag = abs_value(a).str();
      if (!s.empty()) s += a < 0 ? " - " : " + ";
      else if (a < 0) s += "-";
      if (k == 0 || mag != "1") s += mag;
      if (k >= 1) s += "T";
      if (k >= 2) s += "^" + std::to_string(k);
    }
    return s + " (q=" + q.str() + ")";
  }
  [[nodiscard]] bool distinct_roots() const {
    RPoly p = to_rational(poly);
    return poly_gcd(p, derivative(p)).degree() == 0;
  }
};

namespace detail {

/// Sign of a + b sqrt(q) for rationals a, b and a positive non-square or
/// square integer q.
inline int sign_surd(const Rational &a, const Rational &b, const Integer &q) {
  auto sgn = [](const Rational &x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); };
  int sa = sgn(a), sb = sgn(b);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sa == 0 ? sb : sa;
  Rational lhs = a * a, rhs = b * b * Rational(q);
  if (lhs == rhs) return 0;
  return lhs > rhs ? sa : sb;
}

/// p(c sqrt(q)) as a + b sqrt(q).
inline std::pair<Rational, Rational> eval_surd(const RPoly &p, const Rational &c, const Integer &q) {
  Rational a = 0, b = 0;
  for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) {
    // (a + b s)(c s) = b c q + a c s
    Rational na = b * c * Rational(q) + *it;
    Rational nb = a * c;
    a = na;
    b = nb;
  }
  return {a, b};
}

inline std::vector<RPoly> sturm_chain(const RPoly &p) {
  std::vector<RPoly> ch{p, derivative(p)};
  while (!ch.back().is_zero()) {
    RPoly r = divmod(ch[ch.size() - 2], ch.back()).second;
    for (auto &x : r.c) x = -x;
    if (r.is_zero()) break;
    ch.push_back(r);
  }
  return ch;
}

inline unsigned sign_changes_at(const std::vector<RPoly> &ch, const Rational &c, const Integer &q) {
  unsigned v = 0;
  int last = 0;
  for (const auto &f : ch) {
    auto [a, b] = eval_surd(f, c, q);
    int s = sign_surd(a, b, q);
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

} // namespace detail

/// The real polynomial h with P(T) = T^g h(T + q/T), given the functional
/// equation holds.
inline ZPoly weil_trace_polynomial(const CharPoly &p) {
  const unsigned g = p.g;
  std::vector<ZPoly> dk;
  dk.push_back(ZPoly(std::vector<Integer>{2}));
  dk.push_back(ZPoly(std::vector<Integer>{0, 1}));
  ZPoly x(std::vector<Integer>{0, 1}), qpoly(std::vector<Integer>{p.q});
  for (unsigned k = 2; k <= g; ++k) dk.push_back(x * dk[k - 1] - qpoly * dk[k - 2]);
  ZPoly h(std::vector<Integer>{p.poly.at(g)});
  for (unsigned k = 1; k <= g; ++k) h = h + ZPoly(std::vector<Integer>{p.poly.at(g + k)}) * dk[k];
  return h;
}

/// True iff the functional equation T^{2g} P(q/T) = q^g P(T) holds and every
/// root has absolute value sqrt(q).
inline bool weil_weight_check(const CharPoly &p) {
  const unsigned g = p.g;
  const Integer qg = ipow(p.q, g);
  for (unsigned i = 0; i <= 2 * g; ++i)
    if (p.poly.at(i) * ipow(p.q, i) != qg * p.poly.at(2 * g - i)) return false;
  // Roots of h must be real and lie in [-2 sqrt q, 2 sqrt q].
  RPoly h = to_rational(weil_trace_polynomial(p));
  RPoly sq = divmod(h, poly_gcd(h, derivative(h))).first;
  if (sq.degree() <= 0) return true;
  auto ch = detail::sturm_chain(sq);
  const Rational lo(-2), hi(2);
  auto at_lo = detail::eval_surd(sq, lo, p.q);
  unsigned roots = detail::sign_changes_at(ch, lo, p.q) - detail::sign_changes_at(ch, hi, p.q);
  if (detail::sign_surd(at_lo.first, at_lo.second, p.q) == 0) ++roots;
  return roots == static_cast<unsigned>(sq.degree());
}

/// The reciprocal polynomial T^{2g} P(q/T) / q^g.
inline CharPoly reciprocal(const CharPoly &p) {
  const unsigned g = p.g;
  std::vector<Rational> c(2 * g + 1);
  const Integer qg = ipow(p.q, g);
  for (unsigned i = 0; i <= 2 * g; ++i)
    c[2 * g - i] = Rational(p.poly.at(i) * ipow(p.q, i)) / Rational(qg);
  std::vector<Integer> z;
  for (const auto &x : c) {
    if (denominator(x) != 1) throw WeilCheckFailed("reciprocal polynomial is not integral");
    z.push_back(numerator(x));
  }
  ZPoly r(z);
  if (r.lead() != 1) throw WeilCheckFailed("reciprocal polynomial is not monic");
  return {r, p.q, g};
}

} // namespace devissage
