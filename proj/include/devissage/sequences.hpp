#pragma once

#include <string>
#include <vector>

#include "devissage/dualgraph.hpp"
#include "devissage/procyclic.hpp"

namespace devissage {

struct JacobianDatum {
  /// A component of the orbit the Jacobian belongs to.
  std::size_t orbit_rep = 0;
  /// Weil polynomial over the field of definition, with q^f elements.
  CharPoly poly;
  unsigned f = 1;
};

/// A resolved singularity over a finite field, as seen by the checks.
struct SingularityInstance {
  std::string name;
  DualGraph graph;
  DivisorConfig divisors;
  std::vector<JacobianDatum> jacobians;
  Integer ell = 2, q = 3;
  unsigned precision = kDefaultPrecision;
  unsigned max_level = 4;

  /// The Frobenius permutation of the vertices.
  [[nodiscard]] Permutation frobenius() const {
    if (graph.generators().size() > 1)
      throw ConfigIncompatible("finite base field needs a single Frobenius permutation");
    return graph.generators().empty() ? identity_permutation(graph.num_vertices())
                                      : graph.generators().front();
  }

  void validate() const {
    require_prime(ell);
    if (q < 2 || q % ell == 0) throw MismatchedBase("q = " + q.str() + " is not prime to " + ell.str());
    if (max_level == 0 || precision < max_level)
      throw ConfigIncompatible("need precision >= level >= 1");
    (void)frobenius();
    auto orbits = graph.component_orbits();
    std::vector<int> owner(graph.num_components(), -1);
    for (std::size_t o = 0; o < orbits.size(); ++o)
      for (auto c : orbits[o]) owner[c] = static_cast<int>(o);
    std::vector<int> count(orbits.size(), 0);
    for (const auto &j : jacobians) {
      if (j.orbit_rep >= graph.num_components()) throw ConfigIncompatible("unknown orbit_rep");
      const int o = owner[j.orbit_rep];
      ++count[o];
      const unsigned g = graph.genus(j.orbit_rep);
      if (j.poly.g != g || j.poly.poly.degree() != static_cast<int>(2 * g))
        throw ConfigIncompatible("Jacobian of " + graph.components()[j.orbit_rep].id +
                                 " must have degree " + std::to_string(2 * g));
      if (j.f != orbits[o].size())
        throw ConfigIncompatible("extension index " + std::to_string(j.f) + " differs from orbit size " +
                                 std::to_string(orbits[o].size()));
      if (j.poly.q != ipow(q, j.f))
        throw MismatchedBase("Jacobian base " + j.poly.q.str() + " is not q^" + std::to_string(j.f));
      if (!weil_weight_check(j.poly)) throw WeilCheckFailed(j.poly.str());
    }
    for (std::size_t o = 0; o < orbits.size(); ++o) {
      const bool positive = graph.genus(orbits[o].front()) > 0;
      if (positive && count[o] != 1)
        throw ConfigIncompatible("orbit of " + graph.components()[orbits[o].front()].id +
                                 " needs exactly one Jacobian");
      if (!positive && count[o] != 0) throw ConfigIncompatible("genus-0 orbit has a Jacobian");
    }
  }
};

/// A finite Galois module at level ell^s: a module with its Frobenius.
struct GaloisLevel {
  LModule module;
  LMap frob;
};

namespace detail {

inline Integer twist_scalar(const Integer &q, int r, const Integer &modulus) {
  if (r >= 0) return mod_floor(ipow(q, static_cast<unsigned>(r)), modulus);
  return ipow(inverse_mod(q, modulus), static_cast<unsigned>(-r));
}

inline GaloisLevel twist_level(const GaloisLevel &a, const Integer &q, int r, unsigned s) {
  return {a.module, twist_scalar(q, r, ipow(a.module.prime(), s)) * a.frob};
}

inline GaloisLevel level_of(const FrobObject &x, unsigned s) {
  LModule m = LModule::homogeneous(x.prime(), s, static_cast<unsigned>(x.dim()));
  return {m, LMap(m, m, x.frobenius_mod(s))};
}

inline bool equivariant(const LMap &f, const GaloisLevel &a, const GaloisLevel &b) {
  return b.frob * f == f * a.frob;
}

struct SplitExtension {
  GaloisLevel middle;
  LMap inclusion, projection;
};

inline SplitExtension split_extension(const GaloisLevel &a, const GaloisLevel &c) {
  BasedModule bm = direct_sum_based({a.module, c.module});
  const std::size_t na = a.module.ngens(), nc = c.module.ngens();
  IntMatrix inc(na + nc, na), pr(nc, na + nc);
  for (std::size_t i = 0; i < na; ++i) inc(bm.position[i], i) = 1;
  for (std::size_t i = 0; i < nc; ++i) pr(i, bm.position[na + i]) = 1;
  return {{bm.module, direct_sum_map({a.frob, c.frob})},
          LMap(a.module, bm.module, inc),
          LMap(bm.module, c.module, pr)};
}

inline GaloisLevel zero_level(const Integer &ell) {
  LModule z = LModule::zero(ell);
  return {z, LMap::identity(z)};
}

} // namespace detail

/// Level-s pieces of an instance, untwisted.
struct InstanceLevel {
  unsigned s = 1;
  /// Direct sum over orbits of the induced Jacobian torsion.
  GaloisLevel jac;
  /// H_1 tensor Z/ell^s.
  GaloisLevel theta;
  XiModule xi;
  GaloisLevel xi_level, ksigma;
};

inline std::vector<FrobObject> jacobian_blocks(const SingularityInstance &inst) {
  std::vector<FrobObject> out;
  for (const auto &j : inst.jacobians) {
    FrobObject y = abelian_torsion(inst.ell, AbelianData{j.poly, DeclaredSide::Variety});
    out.push_back(induce_from_extension(y, j.f, inst.q));
  }
  return out;
}

inline InstanceLevel instance_level(const SingularityInstance &inst, unsigned s) {
  InstanceLevel L;
  L.s = s;
  const Integer &ell = inst.ell;
  std::vector<LMap> jf;
  for (const auto &b : jacobian_blocks(inst)) jf.push_back(detail::level_of(b, s).frob);
  if (jf.empty()) {
    L.jac = detail::zero_level(ell);
  } else {
    LMap sum = direct_sum_map(jf);
    L.jac = {sum.domain(), sum};
  }
  L.xi = build_xi(inst.graph, inst.divisors, ell, s);
  const bool has_frob = !inst.graph.generators().empty();
  const IntMatrix hm = has_frob ? L.xi.h1.action.front() : IntMatrix::identity(L.xi.h1.rank());
  L.theta = {L.xi.h1_module, LMap(L.xi.h1_module, L.xi.h1_module, hm)};
  L.xi_level = {L.xi.module, has_frob ? L.xi.xi_action.front() : LMap::identity(L.xi.module)};
  L.ksigma = {L.xi.ksigma, has_frob ? L.xi.ksigma_action.front() : LMap::identity(L.xi.ksigma)};
  return L;
}

struct UpsilonReport {
  unsigned s = 1;
  int r = 0;
  ComplexReport sequence;
  LModule structure;
  unsigned n_x_predicted = 0;
  unsigned corank = 0;
  /// corank - n_X; zero when the structure claim holds.
  int defect = 0;
  bool divisible_level = false;
  bool equivariant = false;

  [[nodiscard]] bool structure_matches() const { return defect == 0 && divisible_level; }
};

/// 0 -> I(J(-1)) -> Upsilon -> Q_l/Z_l(-1) tensor H_1 -> 0 at level s, twisted by r.
inline UpsilonReport upsilon_structure(const SingularityInstance &inst, int r, unsigned s) {
  inst.validate();
  InstanceLevel L = instance_level(inst, s);
  GaloisLevel j = detail::twist_level(L.jac, inst.q, r - 1, s);
  GaloisLevel t = detail::twist_level(L.theta, inst.q, r - 1, s);
  detail::SplitExtension u = detail::split_extension(j, t);
  UpsilonReport rep;
  rep.s = s;
  rep.r = r;
  rep.sequence = short_exact_check(u.inclusion, u.projection, "upsilon");
  const std::string tw = "(" + std::to_string(r - 1) + ")";
  rep.sequence.labels = {"0", "I(J{l}" + tw + ")", "Upsilon{l}(" + std::to_string(r) + ")", "Q_l/Z_l" + tw + " x H_1", "0"};
  rep.sequence.modeled = {false, false, true, false, false};
  rep.structure = u.middle.module;
  rep.n_x_predicted = n_x(inst.graph);
  rep.corank = static_cast<unsigned>(u.middle.module.ngens());
  rep.divisible_level = u.middle.module == LModule::homogeneous(inst.ell, s, rep.corank);
  rep.defect = static_cast<int>(rep.corank) - static_cast<int>(rep.n_x_predicted);
  rep.equivariant = detail::equivariant(u.inclusion, j, u.middle) &&
                    detail::equivariant(u.projection, u.middle, t);
  return rep;
}

struct LambdaReport {
  unsigned s = 1;
  LModule structure;
  /// Scalar by which the Frobenius acts on the cyclic cokernel.
  Integer frobenius_scalar;
  bool cyclic_of_level = false;
  bool twist_minus_one = false;

  [[nodiscard]] bool holds() const { return cyclic_of_level && twist_minus_one; }
};

/// Cokernel of the per-component kernels on (component, point) pairs
/// mapping onto the point block, with twist -1.
inline LambdaReport lambda_structure(const SingularityInstance &inst, unsigned s) {
  inst.validate();
  const DualGraph &g = inst.graph;
  const XiLayout l = xi_layout(g, inst.divisors);
  const Integer &ell = inst.ell, mod = ipow(ell, s);
  const std::size_t np = l.pairs.size();
  LModule pairs = LModule::homogeneous(ell, s, static_cast<unsigned>(np));
  LModule comps = LModule::homogeneous(ell, s, static_cast<unsigned>(g.num_components()));
  LModule points = LModule::homogeneous(ell, s, static_cast<unsigned>(l.num_points));
  IntMatrix csum(g.num_components(), np), psum(l.num_points, np);
  for (std::size_t k = 0; k < np; ++k) {
    csum(l.pairs[k].first, k) = 1;
    psum(l.pairs[k].second, k) = 1;
  }
  KernelResult per = kernel(LMap(pairs, comps, csum));
  CokernelResult lam = cokernel(LMap(pairs, points, psum) * per.inclusion);
  LambdaReport rep;
  rep.s = s;
  rep.structure = lam.module;
  rep.cyclic_of_level = lam.module == LModule::cyclic(ell, s);
  // Frobenius on the point block, twisted by -1.
  Permutation ppoint = g.generators().empty() ? identity_permutation(l.num_points)
                                               : xi_point_permutation(g, inst.divisors, l, 0);
  const Integer c = detail::twist_scalar(inst.q, -1, mod);
  LMap fp(points, points, c * permutation_matrix(ppoint));
  if (rep.cyclic_of_level) {
    LMap induced = lam.projection * fp * LMap(lam.module, points, lam.lifts);
    rep.frobenius_scalar = induced.matrix()(0, 0);
    rep.twist_minus_one = rep.frobenius_scalar == mod_floor(c, mod);
  }
  return rep;
}

struct DevissageReport {
  unsigned s = 1;
  int r = 0;
  ComplexReport dev1, dev2, spl1, spl2;
  /// Every map commutes with the twisted Frobenius of its ends.
  bool twist_bookkeeping = false;

  [[nodiscard]] bool exact() const {
    return dev1.exact() && dev2.exact() && spl1.exact() && spl2.exact();
  }
};

/// The two filtrations of Br(K){l}(r-1) at level s.  The middle term is the
/// extension assembled from the outer terms and is marked modeled.
inline DevissageReport build_devissage(const SingularityInstance &inst, int r, unsigned s) {
  inst.validate();
  InstanceLevel L = instance_level(inst, s);
  const Integer &q = inst.q;
  using detail::equivariant;
  using detail::twist_level;
  // Upsilon and the Br model are assembled untwisted at weight -1 and then
  // twisted by r - 1; the outer terms are twisted by r - 2 directly.
  GaloisLevel jm1 = twist_level(L.jac, q, -1, s), tm1 = twist_level(L.theta, q, -1, s);
  GaloisLevel xm1 = twist_level(L.xi_level, q, -1, s);
  detail::SplitExtension ups0 = detail::split_extension(jm1, tm1);
  detail::SplitExtension br0 = detail::split_extension(jm1, xm1);
  GaloisLevel ups = twist_level(ups0.middle, q, r - 1, s);
  GaloisLevel br = twist_level(br0.middle, q, r - 1, s);
  GaloisLevel j2 = twist_level(L.jac, q, r - 2, s), t2 = twist_level(L.theta, q, r - 2, s);
  GaloisLevel x2 = twist_level(L.xi_level, q, r - 2, s), k2 = twist_level(L.ksigma, q, r - 2, s);

  const XiModule &x = L.xi;
  // Upsilon -> Br is the identity on I(J) and iota on the homology part.
  BasedModule ub = direct_sum_based({L.jac.module, L.theta.module});
  BasedModule bb = direct_sum_based({L.jac.module, L.xi_level.module});
  IntMatrix ubm(br.module.ngens(), ups.module.ngens());
  const std::size_t nj = L.jac.module.ngens();
  for (std::size_t i = 0; i < nj; ++i) ubm(bb.position[i], ub.position[i]) = 1;
  for (std::size_t c = 0; c < x.iota.matrix().cols(); ++c)
    for (std::size_t i = 0; i < x.iota.matrix().rows(); ++i)
      ubm(bb.position[nj + i], ub.position[nj + c]) = x.iota.matrix()(i, c);
  LMap ups_to_br(ups.module, br.module, ubm);
  LMap br_to_xi = br0.projection;
  LMap br_to_k = x.phi * br_to_xi;

  DevissageReport rep;
  rep.s = s;
  rep.r = r;
  const std::string tw1 = "(" + std::to_string(r - 1) + ")", tw2 = "(" + std::to_string(r - 2) + ")";
  rep.dev1 = short_exact_check(ups_to_br, br_to_k, "dev1");
  rep.dev1.labels = {"0", "Upsilon{l}" + tw1, "Br(K){l}" + tw1, "Ker(sum)" + tw2, "0"};
  rep.dev1.modeled = {false, true, true, false, false};
  rep.dev2 = short_exact_check(ups0.inclusion, ups0.projection, "dev2");
  rep.dev2.labels = {"0", "I(J{l})" + tw2, "Upsilon{l}" + tw1, "Q_l/Z_l" + tw2 + " x H_1", "0"};
  rep.dev2.modeled = {false, false, true, false, false};
  rep.spl1 = short_exact_check(br0.inclusion, br_to_xi, "spl1");
  rep.spl1.labels = {"0", "I(J{l})" + tw2, "Br(K){l}" + tw1, "Xi" + tw2, "0"};
  rep.spl1.modeled = {false, false, true, false, false};
  rep.spl2 = short_exact_check(x.iota, x.phi, "spl2");
  rep.spl2.labels = {"0", "Q_l/Z_l" + tw2 + " x H_1", "Xi" + tw2, "Ker(sum)" + tw2, "0"};
  rep.spl2.modeled.assign(5, false);
  rep.twist_bookkeeping =
      equivariant(ups_to_br, ups, br) && equivariant(br_to_k, br, k2) &&
      equivariant(ups0.inclusion, j2, ups) && equivariant(ups0.projection, ups, t2) &&
      equivariant(br0.inclusion, j2, br) && equivariant(br_to_xi, br, x2) &&
      equivariant(x.iota, t2, x2) && equivariant(x.phi, x2, k2);
  if (r == 2) rep.spl2.notes.push_back("r = 2: coefficients of the tail are untwisted");
  return rep;
}

struct OnoReport {
  std::size_t left = 0, right = 0;
  [[nodiscard]] bool equal() const { return left == right; }
};

/// Rank of the fixed part of Hom(M, Z_l) under the contragredient action
/// against the rank of the fixed sublattice of M.
inline OnoReport ono_check(std::size_t rank_, const std::vector<IntMatrix> &action, const Integer &ell) {
  OnoReport r;
  r.right = invariant_rank(rank_, action);
  LModule m = LModule::free(ell, static_cast<unsigned>(rank_));
  if (action.empty() || rank_ == 0) {
    r.left = rank_;
    return r;
  }
  IntMatrix stack(0, rank_);
  for (const auto &a : action) {
    Integer det = determinant(a);
    if (det != 1 && det != -1) throw NotWellDefined("action matrix is not unimodular");
    IntMatrix contra = (det * adjugate(a)).transpose();
    stack = vstack(stack, contra - IntMatrix::identity(rank_));
  }
  LModule cod = LModule::free(ell, static_cast<unsigned>(stack.rows()));
  r.left = kernel(LMap(m, cod, stack)).module.free_rank();
  return r;
}

inline OnoReport ono_check(const HomologyLattice &h, const Integer &ell) {
  return ono_check(h.rank(), h.action, ell);
}

/// Tate lattices of the divisible groups around Xi, with the Frobenius.
struct TateData {
  IntMatrix a_action, b_action, p_action;
  /// H_1 into the lattice of Xi, and the lattice of Xi onto the divisor block.
  IntMatrix iota, to_divisors;
  std::size_t a_rank = 0, b_rank = 0, p_rank = 0;
};

inline TateData tate_data(const SingularityInstance &inst) {
  const DualGraph &g = inst.graph;
  const DivisorConfig &d = inst.divisors;
  XiLayout l = xi_layout(g, d);
  TateData t;
  HomologyLattice h = h1_lattice(g);
  IntMatrix bb = integer_kernel(xi_constraints(g, d, l));
  t.a_rank = h.rank();
  t.b_rank = bb.cols();
  t.p_rank = d.size();
  const bool has = !g.generators().empty();
  t.a_action = has ? h.action.front() : IntMatrix::identity(t.a_rank);
  Permutation amb = has ? xi_ambient_permutation(g, d, l, 0) : identity_permutation(l.ambient());
  t.b_action = coordinates_in(bb, permutation_matrix(amb) * bb);
  t.p_action = permutation_matrix(has ? d.action().front() : identity_permutation(d.size()));
  IntMatrix emb(l.ambient(), t.a_rank);
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    for (std::size_t j = 0; j < t.a_rank; ++j)
      emb(l.pair_coord(g.edge(e).first, g.edge(e).second), j) = h.basis(e, j);
  t.iota = coordinates_in(bb, emb);
  t.to_divisors = bb.block(0, d.size(), 0, bb.cols());
  return t;
}

struct BhnLevel {
  unsigned s = 1;
  LModule h1_level;
  bool matches_rho = false;
};

struct JacobianVanishing {
  std::string component;
  VanishingReport probe;
  bool shapiro = false;
};

struct BhnReport {
  /// H^1(k, Q_l/Z_l tensor H_1), held by its dual.
  LModule h1_homology;
  unsigned corank = 0;
  std::size_t rho = 0, rho_character = 0;
  OnoReport ono;
  /// Rank of H^0(k, T_l(H_1^D)).
  std::size_t dual_fixed_rank = 0;
  std::vector<BhnLevel> levels;
  /// F = Ker(H^1(k, A) -> H^1(k, Xi)), held by its dual.
  LModule f_dual;
  std::size_t m = 0;
  bool f_killed_by_m = false;
  /// Kernel of H^3(K) -> sum H^3(K_v) in the model, held by its dual.
  LModule kernel_dual;
  std::vector<JacobianVanishing> jacobians;
  /// Five-term display; terms 2 and 3 are modeled.
  ComplexReport display;
  ComplexReport cohom2_tail;
  bool corestriction_ok = true;
  std::vector<std::string> caveats;

  [[nodiscard]] bool passes() const {
    bool jac = true;
    for (const auto &j : jacobians) jac = jac && j.probe.verdict == Verdict::Vanishes && j.shapiro;
    bool lv = true;
    for (const auto &l : levels) lv = lv && l.matches_rho;
    return corank == rho && rho == rho_character && ono.equal() && dual_fixed_rank == rho &&
           f_killed_by_m && kernel_dual == LModule::free(h1_homology.prime(), static_cast<unsigned>(rho)) &&
           display.exact() && cohom2_tail.exact() && jac && lv && corestriction_ok;
  }
};

namespace detail {

/// Dual of H^1(k, T tensor Q_l/Z_l): Z_l-fixed points of the transpose.
inline KernelResult h1_dual_lattice(const Integer &ell, const IntMatrix &action) {
  const unsigned n = static_cast<unsigned>(action.rows());
  LModule m = LModule::free(ell, n);
  return kernel(LMap(m, m, (action - IntMatrix::identity(n)).transpose()));
}

/// Restriction of the transpose of f to fixed points.
inline LMap restricted_dual(const IntMatrix &f, const KernelResult &src_fixed,
                            const KernelResult &dst_fixed) {
  LMap ft(src_fixed.inclusion.codomain(), dst_fixed.inclusion.codomain(), f.transpose());
  return lift_through(ft * src_fixed.inclusion, dst_fixed.inclusion);
}

} // namespace detail

/// The finite-field Brauer-Hasse-Noether report (r = 2).
inline BhnReport bhn_finite_field_report(const SingularityInstance &inst, std::size_t tree_cap = kDefaultTreeCap) {
  inst.validate();
  const Integer &ell = inst.ell;
  const DualGraph &g = inst.graph;
  BhnReport rep;
  TateData t = tate_data(inst);

  FrobObject a(CarrierKind::Group, LModule::free(ell, static_cast<unsigned>(t.a_rank)), t.a_action, 0, inst.q);
  rep.h1_homology = h1(a).data;
  rep.corank = rep.h1_homology.free_rank();
  rep.rho = rho(g);
  rep.rho_character = rho_by_character(g);
  HomologyLattice h = h1_lattice(g);
  rep.ono = ono_check(h, ell);
  {
    IntMatrix contra = t.a_rank ? IntMatrix((determinant(t.a_action) * adjugate(t.a_action)).transpose())
                                : IntMatrix(0, 0);
    FrobObject dual(CarrierKind::Lattice, LModule::free(ell, static_cast<unsigned>(t.a_rank)), contra, 0, inst.q);
    rep.dual_fixed_rank = h0(dual).data.free_rank();
  }
  for (unsigned s = 1; s <= inst.max_level; ++s) {
    BhnLevel lv;
    lv.s = s;
    lv.h1_level = t.a_rank ? h1_level_adaptive(a, s, inst.precision) : LModule::zero(ell);
    lv.matches_rho = lv.h1_level == LModule::homogeneous(ell, s, static_cast<unsigned>(rep.rho));
    rep.levels.push_back(lv);
  }

  // Duals of H^1 of A = H_1 x Q_l/Z_l, B = Xi, P = sum over divisors, Q_l/Z_l.
  KernelResult fa = detail::h1_dual_lattice(ell, t.a_action);
  KernelResult fb = detail::h1_dual_lattice(ell, t.b_action);
  KernelResult fp = detail::h1_dual_lattice(ell, t.p_action);
  KernelResult fq = detail::h1_dual_lattice(ell, IntMatrix::identity(1));
  LMap d_ab = detail::restricted_dual(t.iota, fb, fa);
  LMap d_bp = detail::restricted_dual(t.to_divisors, fp, fb);
  IntMatrix sum(1, t.p_rank);
  for (std::size_t i = 0; i < t.p_rank; ++i) sum(0, i) = 1;
  LMap d_pq = detail::restricted_dual(sum, fq, fp);
  CokernelResult fcok = cokernel(d_ab);
  rep.f_dual = fcok.module;
  rep.m = m_gamma(g, tree_cap);
  {
    const unsigned vm = valuation(Integer(rep.m), ell);
    rep.f_killed_by_m = rep.f_dual.free_rank() == 0 && rep.f_dual.exponent_bound() <= vm;
  }
  rep.kernel_dual = cokernel(d_bp).module;

  LModule z = LModule::zero(ell);
  std::vector<LMap> dual_maps{LMap::zero(fcok.module, z), fcok.projection, d_ab, d_bp, d_pq,
                              LMap::zero(z, fq.module)};
  rep.display = group_exactness_check(dual_maps, "bhnfin");
  rep.display.labels = {"0", "F", "H^1(k, Q_l/Z_l x H_1)", "H^3(K, Q_l/Z_l(2))",
                        "sum_v H^3(K_v, Q_l/Z_l(2))", "H^1(k, Q_l/Z_l)", "0"};
  rep.display.modeled = {false, false, false, true, true, false, false};
  rep.display.notes = {"H^3(K, Q_l/Z_l(2)) modeled by H^1(k, Xi)",
                       "sum_v H^3(K_v, Q_l/Z_l(2)) modeled by H^1(k, sum over divisors of Q_l/Z_l)"};

  // H^1(k,A) -> H^1(k,Xi) -> H^1(k,Ker sum) -> 0.
  IntMatrix bc = integer_kernel(sum);
  IntMatrix phi_t = coordinates_in(bc, t.to_divisors);
  IntMatrix c_action = coordinates_in(bc, t.p_action * bc);
  KernelResult fc = detail::h1_dual_lattice(ell, c_action);
  LMap d_bc = detail::restricted_dual(phi_t, fc, fb);
  rep.cohom2_tail = group_exactness_check({d_ab, d_bc, LMap::zero(z, fc.module)}, "cohom2");
  rep.cohom2_tail.labels = {"H^1(k, Q_l/Z_l x H_1)", "H^1(k, Xi)", "H^1(k, Ker(sum))", "0"};

  std::vector<FrobObject> blocks = jacobian_blocks(inst);
  for (std::size_t i = 0; i < inst.jacobians.size(); ++i) {
    const auto &j = inst.jacobians[i];
    JacobianVanishing jv;
    jv.component = g.components()[j.orbit_rep].id;
    AbelianData ad{j.poly, DeclaredSide::Variety};
    jv.probe = vanishing_probe(ad, ell, 1, 0, inst.max_level, inst.precision);
    jv.shapiro = h1(blocks[i]) == h1(abelian_torsion(ell, ad));
    rep.jacobians.push_back(jv);
  }
  rep.caveats.push_back("ModeledTermCaveat: H^3(K, Q_l/Z_l(2)) and sum_v H^3(K_v, Q_l/Z_l(2)) are "
                        "modeled by cohomology of Xi and of the divisor block");
  rep.caveats.push_back("corestriction on H^0 with Q_l/Z_l coefficients is surjective for r = 2");
  return rep;
}

} // namespace devissage
