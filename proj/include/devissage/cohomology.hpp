#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "devissage/frob.hpp"

namespace devissage {

/// A cohomology group: a module for lattice carriers, a group (held by its
/// dual) for group carriers.
struct CohomologyGroup {
  CarrierKind kind = CarrierKind::Lattice;
  LModule data;

  [[nodiscard]] bool is_zero() const { return data.is_zero(); }
  [[nodiscard]] bool is_finite() const { return data.is_finite(); }
  [[nodiscard]] std::string str() const {
    return kind == CarrierKind::Lattice ? data.str() : group_str(data);
  }
  /// Order exponent of a finite group.
  [[nodiscard]] unsigned length() const { return data.torsion_length(); }
  /// ell^s-torsion of a group result.
  [[nodiscard]] LModule level(unsigned s) const {
    if (kind != CarrierKind::Group) throw UnsupportedCarrier("level of a lattice result");
    return devissage::level(CoLGroup(data), s);
  }
  friend bool operator==(const CohomologyGroup &a, const CohomologyGroup &b) {
    return a.kind == b.kind && a.data == b.data;
  }
};

struct CohomologyResult {
  CohomologyGroup h0, h1;
  /// Cohomology is computed from the stored arithmetic Frobenius.
  std::string convention_note = "arithmetic Frobenius; geometric Frobenius is its inverse";
  bool precision_capped = false;

  /// H^i for i >= 2 vanishes for the procyclic group.
  [[nodiscard]] CohomologyGroup h(unsigned i) const {
    if (i == 0) return h0;
    if (i == 1) return h1;
    return {h0.kind, LModule::zero(h0.data.prime())};
  }
};

inline CohomologyResult cohomology(const FrobObject &x) {
  LMap t = x.cohomology_operator();
  CohomologyResult r;
  r.h0.kind = r.h1.kind = x.kind();
  if (x.is_divisible_group()) {
    LMap td = transpose_map(t);
    r.h0.data = cokernel(td).module;
    r.h1.data = kernel(td).module;
  } else {
    r.h0.data = kernel(t).module;
    r.h1.data = cokernel(t).module;
  }
  return r;
}

inline CohomologyGroup h0(const FrobObject &x) { return cohomology(x).h0; }
inline CohomologyGroup h1(const FrobObject &x) { return cohomology(x).h1; }

namespace detail {

inline void require_divisible(const FrobObject &x) {
  if (!x.is_divisible_group())
    throw UnsupportedCarrier("finite-level route needs a divisible group carrier");
}

/// Frobenius operator of the ell^t-torsion of a divisible carrier.
inline LMap truncated_operator(const FrobObject &x, unsigned t) {
  LModule xt = LModule::homogeneous(x.prime(), t, static_cast<unsigned>(x.dim()));
  return {xt, xt, x.numerator() - ipow(x.q(), x.denom_exponent()) * IntMatrix::identity(x.dim())};
}

/// ell-valuations of the invariant factors of the cohomology operator, with
/// one entry per generator; nullopt marks a zero invariant factor.
inline std::vector<std::optional<unsigned>> operator_valuations(const FrobObject &x) {
  const IntMatrix t = x.numerator() - ipow(x.q(), x.denom_exponent()) * IntMatrix::identity(x.dim());
  SmithForm sf = smith_normal_form(t, x.prime());
  std::vector<std::optional<unsigned>> v(x.dim());
  for (std::size_t i = 0; i < sf.rank; ++i) v[i] = valuation(sf.D(i, i), x.prime());
  return v;
}

/// Largest finite valuation among the invariant factors.
inline unsigned finite_valuation_bound(const std::vector<std::optional<unsigned>> &vals) {
  unsigned m = 0;
  for (const auto &v : vals)
    if (v) m = std::max(m, *v);
  return m;
}

/// Image of H^1 of the level-s truncation in H^1 of the level-t truncation.
/// H^1 at level t is the sum of Z/ell^min(v_i, t); the image is its ell^(t-s)
/// multiple.
inline LModule h1_transfer_image(const std::vector<std::optional<unsigned>> &vals, const Integer &ell,
                                 unsigned s, unsigned t) {
  std::vector<unsigned> exps;
  for (const auto &v : vals) {
    const unsigned e = v ? std::min(*v, t) : t;
    if (e > t - s) exps.push_back(e - (t - s));
  }
  return LModule(ell, 0, exps);
}

} // namespace detail

/// H^1 of the ell^s-torsion submodule alone (a literal truncation).
inline LModule h1_truncated(const FrobObject &x, unsigned s) {
  detail::require_divisible(x);
  return cokernel(detail::truncated_operator(x, s)).module;
}

/// The ell^s-torsion of H^1, as the image of H^1 of the level-s truncation
/// in the colimit.  The image is read at levels n - 1 and n and must agree;
/// n - 1 must also clear the largest finite valuation of the operator by s.
inline LModule h1_level(const FrobObject &x, unsigned s, unsigned n) {
  detail::require_divisible(x);
  if (n < s + 1) throw PrecisionExhausted("precision " + std::to_string(n) + " below level " +
                                          std::to_string(s + 1));
  const auto vals = detail::operator_valuations(x);
  const unsigned need = detail::finite_valuation_bound(vals) + s + 1;
  if (n < need)
    throw PrecisionExhausted("precision " + std::to_string(n) + " below " + std::to_string(need) +
                             " needed at level " + std::to_string(s));
  LModule a = detail::h1_transfer_image(vals, x.prime(), s, n - 1);
  LModule b = detail::h1_transfer_image(vals, x.prime(), s, n);
  if (a != b)
    throw PrecisionExhausted("level-" + std::to_string(s) + " image moved between " +
                             std::to_string(n - 1) + " and " + std::to_string(n));
  return b;
}

/// Retries h1_level with growing precision.
inline LModule h1_level_adaptive(const FrobObject &x, unsigned s, unsigned n,
                                 unsigned max_precision = 64, unsigned *used = nullptr) {
  for (unsigned p = std::max(n, s + 1);; p += 4) {
    try {
      LModule r = h1_level(x, s, p);
      if (used) *used = p;
      return r;
    } catch (const PrecisionExhausted &) {
      if (p + 4 > max_precision) throw;
    }
  }
}

/// ell^s-torsion of H^0 for a divisible carrier.
inline LModule h0_level(const FrobObject &x, unsigned s) {
  detail::require_divisible(x);
  return kernel(detail::truncated_operator(x, s)).module;
}

/// Induction to the base with q elements of a module y over its degree-f
/// extension (y.q() must be q^f).  Block i + 1 is the Frobenius image of
/// block i; the wrap acts by the Frobenius of y.
inline FrobObject induce_from_extension(const FrobObject &y, unsigned f, const Integer &q) {
  if (f == 0) throw InternalError("induction index must be positive");
  if (ipow(q, f) != y.q()) throw MismatchedBase(y.q().str() + " is not " + q.str() + "^" + std::to_string(f));
  if (f == 1) return y;
  std::vector<LModule> parts(f, y.rep());
  BasedModule bm = direct_sum_based(parts);
  const std::size_t n = y.dim();
  const unsigned d = y.denom_exponent() * f;
  const Integer qd = ipow(q, d);
  IntMatrix m(n * f, n * f);
  for (std::size_t b = 0; b < f; ++b) {
    std::size_t to = (b + 1) % f;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Integer v = (to == 0) ? y.numerator()(i, j) : (i == j ? qd : Integer(0));
        m(bm.position[to * n + i], bm.position[b * n + j]) = v;
      }
  }
  return {y.kind(), bm.module, m, d, q, y.weight_tag()};
}

/// The same module viewed over the degree-f extension.
inline FrobObject restrict_to_extension(const FrobObject &x, unsigned f) {
  IntMatrix p = IntMatrix::identity(x.dim());
  for (unsigned i = 0; i < f; ++i) p = p * x.numerator();
  return {x.kind(), x.rep(), p, x.denom_exponent() * f, ipow(x.q(), f), x.weight_tag()};
}

/// Induced module of the restriction of x to the degree-f extension: f blocks,
/// Frobenius shifting block i to block i + 1, with f-th power acting as the
/// f-th power of the Frobenius of x on each block.
inline FrobObject induced(const FrobObject &x, unsigned f) {
  if (f == 0) throw InternalError("induction index must be positive");
  return induce_from_extension(restrict_to_extension(x, f), f, x.q());
}

struct ShapiroCheck {
  CohomologyResult induced_side, restricted_side;
  [[nodiscard]] bool holds() const {
    return induced_side.h0 == restricted_side.h0 && induced_side.h1 == restricted_side.h1;
  }
};

inline ShapiroCheck shapiro_check(const FrobObject &x, unsigned f) {
  return {cohomology(induced(x, f)), cohomology(restrict_to_extension(x, f))};
}

} // namespace devissage
