#pragma once

#include <string>
#include <vector>

#include "devissage/charpoly.hpp"
#include "devissage/cohomology.hpp"

namespace devissage {

/// Which variety the characteristic polynomial's companion matrix describes
/// as a Tate-module Frobenius.
enum class DeclaredSide { Variety, DualVariety, Unspecified };

inline std::string side_name(DeclaredSide s) {
  switch (s) {
  case DeclaredSide::Variety: return "A";
  case DeclaredSide::DualVariety: return "A^t";
  default: return "unspecified";
  }
}

struct AbelianData {
  CharPoly poly;
  DeclaredSide side = DeclaredSide::DualVariety;
};

namespace detail {

// Tate-module Frobenius of the undeclared side: q C^{-T} = adj(C)^T / q^{g-1}.
inline std::pair<IntMatrix, unsigned> contragredient(const CharPoly &p) {
  IntMatrix c = companion(p.poly);
  return {adjugate(c).transpose(), p.g - 1};
}

} // namespace detail

/// A{l} = T_l A tensor Q_l/Z_l with its Frobenius.
inline FrobObject abelian_torsion(const Integer &ell, const AbelianData &a) {
  if (a.side == DeclaredSide::Unspecified)
    throw MissingDualData("declare whether the polynomial belongs to A or to A^t");
  const unsigned n = 2 * a.poly.g;
  LModule rep = LModule::free(ell, n);
  if (a.side == DeclaredSide::Variety)
    return {CarrierKind::Group, rep, companion(a.poly.poly), 0, a.poly.q, 1};
  auto [m, d] = detail::contragredient(a.poly);
  return {CarrierKind::Group, rep, m, d, a.poly.q, 1};
}

/// T_l A^t as a lattice with its Frobenius.
inline FrobObject dual_tate_module(const Integer &ell, const AbelianData &a) {
  if (a.side == DeclaredSide::Unspecified)
    throw MissingDualData("declare whether the polynomial belongs to A or to A^t");
  const unsigned n = 2 * a.poly.g;
  LModule rep = LModule::free(ell, n);
  if (a.side == DeclaredSide::DualVariety)
    return {CarrierKind::Lattice, rep, companion(a.poly.poly), 0, a.poly.q, 1};
  auto [m, d] = detail::contragredient(a.poly);
  return {CarrierKind::Lattice, rep, m, d, a.poly.q, 1};
}

/// A{l}^(box j)(r).
inline FrobObject abelian_box_twist(const Integer &ell, const AbelianData &a, unsigned j, int r) {
  return box_frob_power(abelian_torsion(ell, a), j).twisted(r);
}

enum class Verdict { Vanishes, Nontrivial };

inline std::string verdict_name(Verdict v) {
  return v == Verdict::Vanishes ? "VANISHES" : "NONTRIVIAL";
}

struct VanishingReport {
  CharPoly poly;
  Integer ell;
  unsigned j = 0;
  int r = 0;
  Verdict verdict = Verdict::Vanishes;
  /// ell^s-torsion of H^1 for s = 1..levels, by the finite-level route.
  std::vector<LModule> profile;
  /// Corank of H^1 computed exactly on the divisible carrier.
  unsigned exact_corank = 0;
  /// Multiplicity of 1 as a root of the characteristic polynomial of the
  /// twisted box power's Frobenius.
  unsigned unit_root_multiplicity = 0;
  /// Weight j + 2r; zero iff the eigenvalues have absolute value 1.
  int weight = 0;
  bool excluded_case = false;  // j == -2r
  bool sign_variant = false;   // j == 2r
  unsigned precision_used = 0;
  DeclaredSide side = DeclaredSide::DualVariety;

  [[nodiscard]] bool unit_modulus() const { return weight == 0; }
  /// Finite-level profile equals (Z/l^s)^corank and matches the eigenvalue count.
  [[nodiscard]] bool consistent() const {
    for (std::size_t s = 0; s < profile.size(); ++s)
      if (profile[s] != LModule::homogeneous(ell, static_cast<unsigned>(s + 1), exact_corank))
        return false;
    return exact_corank <= unit_root_multiplicity &&
           (unit_root_multiplicity == 0) == (exact_corank == 0);
  }
  [[nodiscard]] bool level_monotone() const {
    bool seen = false;
    for (const auto &m : profile) {
      if (seen && m.is_zero()) return false;
      if (!m.is_zero()) seen = true;
    }
    return true;
  }
};

/// Multiplicity of 1 as an eigenvalue of q^r M^(tensor j), where M has
/// characteristic polynomial p.
inline unsigned unit_eigenvalue_multiplicity(const CharPoly &p, unsigned j, int r) {
  ZPoly t = tensor_power_charpoly(p.poly, j);
  return root_multiplicity(scaled_charpoly(t, p.q, r), Rational(1));
}

inline VanishingReport vanishing_probe(const AbelianData &a, const Integer &ell, unsigned j, int r,
                                       unsigned levels, unsigned precision = kDefaultPrecision) {
  if (!weil_weight_check(a.poly)) throw WeilCheckFailed(a.poly.str());
  if (a.poly.q % ell == 0) throw MismatchedBase("q is divisible by " + ell.str());
  VanishingReport rep;
  rep.poly = a.poly;
  rep.ell = ell;
  rep.j = j;
  rep.r = r;
  rep.side = a.side;
  rep.weight = static_cast<int>(j) + 2 * r;
  rep.excluded_case = static_cast<int>(j) == -2 * r;
  rep.sign_variant = static_cast<int>(j) == 2 * r;
  FrobObject x = abelian_box_twist(ell, a, j, r);
  rep.exact_corank = h1(x).data.free_rank();
  rep.unit_root_multiplicity = unit_eigenvalue_multiplicity(a.poly, j, r);
  bool trivial = true;
  for (unsigned s = 1; s <= levels; ++s) {
    unsigned used = 0;
    LModule h = h1_level_adaptive(x, s, std::max(precision, s + 1), 64, &used);
    rep.precision_used = std::max(rep.precision_used, used);
    if (!h.is_zero()) trivial = false;
    rep.profile.push_back(h);
  }
  rep.verdict = trivial ? Verdict::Vanishes : Verdict::Nontrivial;
  return rep;
}

struct DualityReport {
  unsigned j = 0;
  int r = 0;
  DeclaredSide side = DeclaredSide::DualVariety;
  std::vector<LModule> left, right;
  /// Rank of the fixed lattice of the twisted tensor power of T_l A^t.
  unsigned fixed_rank = 0;

  [[nodiscard]] bool agree() const { return left == right; }
};

/// H^1(k, A{l}^(box j)(r)) against the dual of H^0(k, (T_l A^t)^(tensor j)(-j-r)),
/// level by level.
inline DualityReport duality_crosscheck(const AbelianData &a, const Integer &ell, unsigned j,
                                        int r, unsigned levels,
                                        unsigned precision = kDefaultPrecision) {
  DualityReport d;
  d.j = j;
  d.r = r;
  d.side = a.side;
  FrobObject x = abelian_box_twist(ell, a, j, r);
  FrobObject y = box_frob_power(dual_tate_module(ell, a), j).twisted(-static_cast<int>(j) - r);
  CohomologyGroup fixed = h0(y);
  d.fixed_rank = fixed.data.free_rank();
  CoLGroup rhs = dual(fixed.data);
  for (unsigned s = 1; s <= levels; ++s) {
    d.left.push_back(h1_level_adaptive(x, s, std::max(precision, s + 1)));
    d.right.push_back(level(rhs, s));
  }
  return d;
}

struct CatalogEntry {
  std::string name;
  CharPoly poly;
};

/// Weil polynomials of abelian varieties used as fixtures.  Each entry has
/// distinct roots.
inline std::vector<CatalogEntry> weil_catalog() {
  auto e = [](std::string name, std::vector<Integer> desc, Integer q) {
    return CatalogEntry{std::move(name), CharPoly::from_descending(desc, q)};
  };
  return {
      e("E5a", {1, -2, 5}, 5),  e("E5b", {1, 0, 5}, 5),   e("E2", {1, 1, 2}, 2),
      e("E7", {1, -3, 7}, 7),   e("E11", {1, 4, 11}, 11), e("E3", {1, -1, 3}, 3),
      e("E13", {1, 2, 13}, 13),
  };
}

/// Genus-2 entries, used outside the full probe grid.
inline std::vector<CatalogEntry> weil_catalog_genus2() {
  return {
      {"S2", CharPoly::from_descending({1, 0, 3, 0, 4}, 2)},
      {"S3", CharPoly::from_descending({1, 1, 2, 3, 9}, 3)},
  };
}

} // namespace devissage
