#pragma once

#include <string>
#include <vector>

#include "devissage/complex.hpp"
#include "devissage/lmap.hpp"
#include "devissage/lmodule.hpp"

namespace devissage {

/// Cofinitely generated ell-primary torsion group, held as its Pontryagin
/// dual.  The group is (Q_l/Z_l)^corank + finite part, where the finite part
/// is dual (hence isomorphic) to the dual's torsion.
class CoLGroup {
public:
  CoLGroup() = default;
  explicit CoLGroup(LModule dual) : dual_(std::move(dual)) {}

  static CoLGroup divisible(const Integer &ell, unsigned corank) {
    return CoLGroup(LModule::free(ell, corank));
  }
  /// Q_l/Z_l.
  static CoLGroup qz(const Integer &ell) { return divisible(ell, 1); }
  static CoLGroup finite(const Integer &ell, std::vector<unsigned> exps) {
    return CoLGroup(LModule(ell, 0, std::move(exps)));
  }
  static CoLGroup zero(const Integer &ell) { return CoLGroup(LModule::zero(ell)); }

  [[nodiscard]] const LModule &dual() const { return dual_; }
  [[nodiscard]] const Integer &prime() const { return dual_.prime(); }
  [[nodiscard]] unsigned corank() const { return dual_.free_rank(); }
  [[nodiscard]] LModule finite_part() const {
    return {dual_.prime(), 0, dual_.torsion_exponents()};
  }
  [[nodiscard]] bool is_divisible() const { return dual_.is_free(); }
  [[nodiscard]] bool is_finite() const { return dual_.is_finite(); }
  [[nodiscard]] bool is_zero() const { return dual_.is_zero(); }
  [[nodiscard]] std::string str() const { return group_str(dual_); }

  friend bool operator==(const CoLGroup &a, const CoLGroup &b) { return a.dual_ == b.dual_; }
  friend bool operator!=(const CoLGroup &a, const CoLGroup &b) { return !(a == b); }

private:
  LModule dual_;
};

inline CoLGroup dual(const LModule &m) { return CoLGroup(m); }
inline LModule dual(const CoLGroup &c) { return c.dual(); }

inline CoLGroup box(const CoLGroup &a, const CoLGroup &b) {
  return CoLGroup(tensor(a.dual(), b.dual()));
}

/// N-fold box; the empty box is Q_l/Z_l.
inline CoLGroup box_power(const CoLGroup &a, unsigned n) {
  CoLGroup r = CoLGroup::qz(a.prime());
  for (unsigned i = 0; i < n; ++i) r = box(r, a);
  return r;
}

/// First derived functor of the box product.
inline CoLGroup tor_box(const CoLGroup &a, const CoLGroup &b) {
  return CoLGroup(tor1(a.dual(), b.dual()));
}

/// Derived functors in degree >= 2 vanish.
inline CoLGroup tor_box_higher(const CoLGroup &a, const CoLGroup &b, unsigned degree) {
  require_same_prime(a.dual(), b.dual());
  if (degree == 0) return box(a, b);
  if (degree == 1) return tor_box(a, b);
  return CoLGroup::zero(a.prime());
}

inline CoLGroup group_direct_sum(const CoLGroup &a, const CoLGroup &b) {
  return CoLGroup(direct_sum(a.dual(), b.dual()));
}

/// ell^s-torsion subgroup, as a finite module.
inline LModule level(const CoLGroup &a, unsigned s) {
  if (s == 0) throw InternalError("level must be positive");
  return reduce_mod_power(a.dual(), s);
}

/// Finite box power of a finite group: the tensor power.
inline LModule finite_box_power(const LModule &finite, unsigned n) {
  if (!finite.is_finite()) throw UnsupportedCarrier("finite box power of an infinite group");
  if (n == 0) throw InternalError("finite box power needs n >= 1");
  LModule r = finite;
  for (unsigned i = 1; i < n; ++i) r = tensor(r, finite);
  return r;
}

/// The truncations of a cofinitely generated group with their inclusions.
struct DirectSystem {
  Integer ell = 2;
  /// levels[i] is level i + 1.
  std::vector<LModule> levels;
  /// transitions[i] runs from levels[i] to levels[i + 1].
  std::vector<LMap> transitions;

  static constexpr unsigned kDefaultDepth = 6;

  static DirectSystem of(const CoLGroup &a, unsigned depth = kDefaultDepth) {
    DirectSystem d;
    d.ell = a.prime();
    const LModule &m = a.dual();
    std::vector<unsigned> e = component_exponents(m);
    auto cap = [&](std::size_t i, unsigned s) { return e[i] == 0 ? s : std::min(e[i], s); };
    for (unsigned s = 1; s <= depth; ++s) d.levels.push_back(level(a, s));
    for (unsigned s = 1; s < depth; ++s) {
      IntMatrix t(m.ngens(), m.ngens());
      for (std::size_t i = 0; i < m.ngens(); ++i)
        t(i, i) = ipow(a.prime(), cap(i, s + 1) - cap(i, s));
      d.transitions.emplace_back(d.levels[s - 1], d.levels[s], t);
    }
    return d;
  }

  [[nodiscard]] bool transitions_injective() const {
    for (const auto &t : transitions)
      if (!is_injective(t)) return false;
    return true;
  }

  /// Colimit read off the top two levels; they must agree.
  [[nodiscard]] CoLGroup colimit() const {
    if (levels.size() < 2) throw PrecisionExhausted("need two levels to read a colimit");
    auto split = [](const LModule &lv, unsigned s) {
      unsigned growing = 0;
      std::vector<unsigned> fin;
      for (unsigned e : lv.torsion_exponents()) {
        if (e == s)
          ++growing;
        else
          fin.push_back(e);
      }
      return std::pair{growing, fin};
    };
    const unsigned top = static_cast<unsigned>(levels.size());
    auto hi = split(levels[top - 1], top), lo = split(levels[top - 2], top - 1);
    if (hi != lo)
      throw PrecisionExhausted("structure did not stabilize by level " + std::to_string(top));
    return CoLGroup(LModule(ell, hi.first, hi.second));
  }
};

/// Lemma-tors shape check: truncating a box power agrees with boxing the
/// truncation.
inline bool level_box_commutes(const CoLGroup &a, unsigned n, unsigned s) {
  return level(box_power(a, n), s) == finite_box_power(level(a, s), n);
}

struct TorsbisResult {
  LMap f_st;
  LMap phi_s;
  LMap phi_t;
  /// Inclusion of the ell^s-torsion of the box power into its ell^t-torsion.
  LMap inclusion;
  /// inclusion * phi_s == phi_t * f_st as maps.
  bool commutes = false;
  /// The level transition of the box power's direct system is f_st.
  bool matches_direct_system = false;
  /// Pure tensors evaluated with two different lifts each.
  std::size_t evaluated = 0;
  bool exhaustive = false;
  bool lift_independent = false;
  bool pointwise_commutes = false;
};

namespace detail {

inline std::vector<std::int64_t> kron_vec(const std::vector<std::vector<std::int64_t>> &parts,
                                          std::int64_t mod) {
  std::vector<std::int64_t> acc{1};
  for (const auto &p : parts) {
    std::vector<std::int64_t> next;
    next.reserve(acc.size() * p.size());
    for (auto x : acc)
      for (auto y : p) next.push_back((x * y) % mod);
    acc = std::move(next);
  }
  return acc;
}

} // namespace detail

/// The maps f_{s,t} and phi_s, phi_t for a divisible group, with the square
/// checked on matrices and, pointwise, on pure tensors.
inline TorsbisResult torsbis_maps(const CoLGroup &a, unsigned s, unsigned t, unsigned n,
                                  std::size_t pointwise_limit = 2'000'000) {
  if (!a.is_divisible()) throw NotDivisible("group " + a.str() + " has a finite part");
  if (s == 0 || t < s || n == 0) throw InternalError("need 1 <= s <= t and n >= 1");
  const Integer &ell = a.prime();
  const unsigned c = a.corank();
  std::size_t dim = 1;
  for (unsigned i = 0; i < n; ++i) dim *= c;
  const LModule ts = LModule::homogeneous(ell, s, static_cast<unsigned>(dim));
  const LModule tt = LModule::homogeneous(ell, t, static_cast<unsigned>(dim));
  const Integer shift = ipow(ell, t - s);

  // Divide-then-multiply on basis tensors: the lift of a basis vector of
  // level s is the same-index basis vector of level t.
  IntMatrix f(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) f(k, k) = shift;

  TorsbisResult r;
  r.f_st = LMap(ts, tt, f);
  r.phi_s = LMap::identity(ts);
  r.phi_t = LMap::identity(tt);
  r.inclusion = LMap(ts, tt, shift * IntMatrix::identity(dim));
  r.commutes = (r.inclusion * r.phi_s) == (r.phi_t * r.f_st);
  DirectSystem ds = DirectSystem::of(box_power(a, n), t);
  LMap chain = LMap::identity(ts);
  for (unsigned u = s; u < t; ++u) chain = ds.transitions[u - 1] * chain;
  r.matches_direct_system = chain == r.inclusion;

  // Pointwise: all n-tuples of level-s vectors, each with the canonical lift
  // and a shifted lift.
  const std::int64_t ps = to_i64(ipow(ell, s)), pt = to_i64(ipow(ell, t));
  const std::int64_t sh = to_i64(shift);
  const std::size_t per = static_cast<std::size_t>(to_i64(ipow(Integer(ps), c)));
  std::size_t total = 1;
  bool too_big = false;
  for (unsigned i = 0; i < n; ++i) {
    if (total > pointwise_limit / std::max<std::size_t>(per, 1)) too_big = true;
    total *= per;
  }
  r.exhaustive = !too_big;
  if (too_big) total = std::min<std::size_t>(pointwise_limit, total);
  auto vec_of = [&](std::size_t code) {
    std::vector<std::int64_t> v(c);
    for (unsigned k = 0; k < c; ++k) {
      v[k] = static_cast<std::int64_t>(code % static_cast<std::size_t>(ps));
      code /= static_cast<std::size_t>(ps);
    }
    return v;
  };
  r.lift_independent = true;
  r.pointwise_commutes = true;
  std::uint64_t mix = 0x9e3779b97f4a7c15ULL;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    std::vector<std::vector<std::int64_t>> as, b1, b2;
    for (unsigned i = 0; i < n; ++i) {
      auto v = vec_of(rest % per);
      rest /= per;
      as.push_back(v);
      b1.push_back(v);
      auto w = v;
      for (auto &x : w) {
        mix ^= mix << 13;
        mix ^= mix >> 7;
        mix ^= mix << 17;
        x = (x + ps * static_cast<std::int64_t>(mix % static_cast<std::uint64_t>(pt / ps))) % pt;
      }
      b2.push_back(w);
    }
    auto kb1 = detail::kron_vec(b1, pt), kb2 = detail::kron_vec(b2, pt);
    auto ka = detail::kron_vec(as, ps);
    for (std::size_t k = 0; k < kb1.size(); ++k) {
      std::int64_t f1 = (sh * kb1[k]) % pt, f2 = (sh * kb2[k]) % pt;
      if (f1 != f2) r.lift_independent = false;
      if ((sh * ka[k]) % pt != f1) r.pointwise_commutes = false;
    }
    ++r.evaluated;
  }
  return r;
}

/// A short exact sequence of groups 0 -> A -> B -> C -> 0 given by the dual
/// maps alpha_dual: B^D -> A^D and beta_dual: C^D -> B^D.
struct GroupSES {
  LMap alpha_dual;
  LMap beta_dual;

  [[nodiscard]] CoLGroup a() const { return CoLGroup(alpha_dual.codomain()); }
  [[nodiscard]] CoLGroup b() const { return CoLGroup(alpha_dual.domain()); }
  [[nodiscard]] CoLGroup c() const { return CoLGroup(beta_dual.domain()); }
};

/// Full exactness report for 0 -> A -> B -> C -> 0 in group orientation.
inline ComplexReport group_ses_check(const LMap &alpha_dual, const LMap &beta_dual,
                                     std::string name = {}) {
  const Integer &ell = alpha_dual.prime();
  LModule z = LModule::zero(ell);
  std::vector<LMap> dual_maps{LMap::zero(alpha_dual.codomain(), z), alpha_dual, beta_dual,
                              LMap::zero(z, beta_dual.domain())};
  return group_exactness_check(dual_maps, std::move(name));
}

inline void require_exact(const GroupSES &ses) {
  if (!group_ses_check(ses.alpha_dual, ses.beta_dual).exact())
    throw InputNotExact("input sequence is not exact");
}

/// Outcome of applying a box product to a short exact sequence.
struct ExactnessProbe {
  ComplexReport report;
  bool left_exact = false;
  bool right_exact = false;
  /// Cokernel of the last map, as a group.
  CoLGroup obstruction;
};

/// Applies (- box E) to the sequence and inspects both ends.
inline ExactnessProbe left_exactness_probe(const GroupSES &ses, const CoLGroup &e) {
  require_exact(ses);
  LMap id = LMap::identity(e.dual());
  LMap ad = tensor_map(ses.alpha_dual, id), bd = tensor_map(ses.beta_dual, id);
  ExactnessProbe p;
  p.report = group_ses_check(ad, bd, "ses box " + e.str());
  // Group positions 1, 2, 3 are A, B, C boxed with E.
  const auto &r = p.report;
  const std::size_t n = r.length();
  p.left_exact = r.exact_at[n - 2] && r.exact_at[n - 3];
  p.right_exact = r.exact_at[1];
  p.obstruction = CoLGroup(r.homology[1]);
  return p;
}

enum class TransformMode { Divisible, FiniteExponent };

struct SequenceTransform {
  TransformMode mode = TransformMode::Divisible;
  CoLGroup twist_factor;
  ComplexReport report;
  /// FiniteExponent mode: the image I and cokernel J in the derived
  /// sequences, together with the Tor bound for J.
  CoLGroup i_term, j_term, tor_term;
  bool derived_sequences_exact = false;
  bool j_finite_exponent = false;
  bool j_embeds_in_tor = false;

  [[nodiscard]] bool ok() const {
    if (mode == TransformMode::Divisible) return report.exact();
    return derived_sequences_exact && j_finite_exponent && j_embeds_in_tor;
  }
};

/// The exact sequence obtained by boxing 0 -> A -> B -> C -> 0 with
/// A^(j1) B^(j2) C^(j3) D.  In finite-exponent mode only j2, j3 are used.
inline SequenceTransform abstract_sequence_transform(const GroupSES &ses, unsigned j1,
                                                     unsigned j2, unsigned j3,
                                                     const CoLGroup &d, TransformMode mode) {
  require_exact(ses);
  const CoLGroup A = ses.a(), B = ses.b(), C = ses.c();
  if (mode == TransformMode::Divisible && !A.is_divisible())
    throw NotDivisible("first term " + A.str() + " is not divisible");
  if (mode == TransformMode::FiniteExponent && !A.is_finite())
    throw NotFiniteExponent("first term " + A.str() + " has positive corank");
  SequenceTransform out;
  out.mode = mode;
  CoLGroup e = d;
  if (mode == TransformMode::Divisible) e = box(e, box_power(A, j1));
  e = box(box(e, box_power(B, j2)), box_power(C, j3));
  out.twist_factor = e;
  LMap id = LMap::identity(e.dual());
  LMap ad = tensor_map(ses.alpha_dual, id), bd = tensor_map(ses.beta_dual, id);
  out.report = group_ses_check(ad, bd, "boxed sequence");
  if (mode == TransformMode::Divisible) return out;

  // 0 -> A.E -> B.E -> I -> 0 and 0 -> I -> C.E -> J -> 0, on duals.
  ImageResult im = image(bd);
  out.i_term = CoLGroup(im.module);
  KernelResult kj = kernel(bd);
  out.j_term = CoLGroup(kj.module);
  out.tor_term = tor_box(A, e);
  ComplexReport es1 = group_ses_check(ad, im.inclusion);
  LMap jd = kj.inclusion;
  ComplexReport es2 = group_ses_check(im.corestriction, jd);
  out.derived_sequences_exact = es1.exact() && es2.exact();
  out.j_finite_exponent = out.j_term.is_finite();
  const LModule &jm = out.j_term.dual(), &tm = out.tor_term.dual();
  out.j_embeds_in_tor = jm.is_finite() && jm.torsion_length() <= tm.torsion_length() &&
                        jm.exponent_bound() <= tm.exponent_bound() &&
                        jm.ngens() <= tm.ngens();
  return out;
}

} // namespace devissage
