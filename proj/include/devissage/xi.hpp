#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "devissage/complex.hpp"
#include "devissage/graph.hpp"
#include "devissage/lmap.hpp"

namespace devissage {

struct Divisor {
  enum class At { Node, Component };
  std::string id;
  At at = At::Component;
  /// Node index or component index.
  std::size_t where = 0;
};

/// Finitely many horizontal divisors, each meeting the special fibre at one
/// point: a node, or a free point of its own on a component.
class DivisorConfig {
public:
  DivisorConfig() = default;
  /// action[i] permutes divisor indices along generator i of the graph.
  DivisorConfig(const DualGraph &g, std::vector<Divisor> divisors,
                std::vector<Permutation> action)
      : divs_(std::move(divisors)), action_(std::move(action)) {
    validate(g);
  }

  [[nodiscard]] std::size_t size() const { return divs_.size(); }
  [[nodiscard]] const Divisor &operator[](std::size_t i) const { return divs_.at(i); }
  [[nodiscard]] const std::vector<Divisor> &divisors() const { return divs_; }
  [[nodiscard]] const std::vector<Permutation> &action() const { return action_; }

private:
  void validate(const DualGraph &g) {
    if (divs_.empty()) throw ConfigIncompatible("divisor set is empty");
    if (action_.size() != g.generators().size())
      throw ConfigIncompatible("divisor action has " + std::to_string(action_.size()) +
                               " generators, graph has " + std::to_string(g.generators().size()));
    for (const auto &d : divs_) {
      std::size_t bound = d.at == Divisor::At::Node ? g.num_nodes() : g.num_components();
      if (d.where >= bound) throw ConfigIncompatible("divisor " + d.id + " has no location");
    }
    for (std::size_t k = 0; k < action_.size(); ++k) {
      const Permutation &p = action_[k], &vp = g.generators()[k];
      if (p.size() != divs_.size() || !is_permutation(p))
        throw ConfigIncompatible("divisor action is not a permutation");
      for (std::size_t i = 0; i < divs_.size(); ++i) {
        const Divisor &a = divs_[i], &b = divs_[p[i]];
        std::size_t expect = a.at == Divisor::At::Node
                                 ? vp[g.node_vertex(a.where)] - g.num_components()
                                 : vp[a.where];
        if (a.at != b.at || b.where != expect)
          throw ConfigIncompatible("divisor " + a.id + " is not moved with its point");
      }
    }
    std::vector<bool> covered(g.num_components(), false);
    for (const auto &d : divs_)
      if (d.at == Divisor::At::Component) covered[d.where] = true;
    for (const auto &orb : g.component_orbits()) {
      bool any = false;
      for (auto c : orb) any = any || covered[c];
      if (!any)
        throw ConfigIncompatible("component orbit of " + g.components()[orb.front()].id +
                                 " has no free-point divisor");
    }
  }

  std::vector<Divisor> divs_;
  std::vector<Permutation> action_;
};

/// Index sets of the ambient module of Xi: divisor block, then one
/// coordinate per (component, point on it).
struct XiLayout {
  /// Point w: nodes first, then one free point per component divisor.
  std::size_t num_points = 0;
  std::vector<std::optional<std::size_t>> point_divisor;
  /// (component, point) pairs in ambient order after the divisor block.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> pair_index;
  std::size_t num_divisors = 0;

  [[nodiscard]] std::size_t ambient() const { return num_divisors + pairs.size(); }
  [[nodiscard]] std::size_t pair_coord(std::size_t c, std::size_t w) const {
    return num_divisors + pair_index.at({c, w});
  }
};

inline XiLayout xi_layout(const DualGraph &g, const DivisorConfig &d) {
  XiLayout l;
  l.num_divisors = d.size();
  l.num_points = g.num_nodes();
  l.point_divisor.assign(g.num_nodes(), std::nullopt);
  std::vector<std::size_t> free_point(d.size(), 0);
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i].at == Divisor::At::Component) {
      free_point[i] = l.num_points++;
      l.point_divisor.push_back(i);
    }
  for (std::size_t c = 0; c < g.num_components(); ++c) {
    for (const auto &[ci, ni] : g.edges())
      if (ci == c) l.pairs.emplace_back(c, ni);
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d[i].at == Divisor::At::Component && d[i].where == c) l.pairs.emplace_back(c, free_point[i]);
  }
  for (std::size_t k = 0; k < l.pairs.size(); ++k) l.pair_index[l.pairs[k]] = k;
  return l;
}

/// Point of each divisor in the layout.
inline std::size_t divisor_point(const XiLayout &l, const DivisorConfig &d, std::size_t i) {
  if (d[i].at == Divisor::At::Node) return d[i].where;
  for (std::size_t w = 0; w < l.num_points; ++w)
    if (l.point_divisor[w] == i) return w;
  throw InternalError("divisor without a point");
}

/// Integer constraints cutting Xi out of the ambient block: one row per
/// point, then one row per component.
inline IntMatrix xi_constraints(const DualGraph &g, const DivisorConfig &d, const XiLayout &l) {
  IntMatrix m(l.num_points + g.num_components(), l.ambient());
  for (std::size_t i = 0; i < d.size(); ++i) m(divisor_point(l, d, i), i) = 1;
  for (std::size_t k = 0; k < l.pairs.size(); ++k) {
    m(l.pairs[k].second, l.num_divisors + k) = 1;
    m(l.num_points + l.pairs[k].first, l.num_divisors + k) = 1;
  }
  return m;
}

/// Permutation of points induced by generator k.
inline Permutation xi_point_permutation(const DualGraph &g, const DivisorConfig &d,
                                        const XiLayout &l, std::size_t k) {
  const Permutation &vp = g.generators().at(k), &dp = d.action().at(k);
  Permutation p(l.num_points);
  for (std::size_t w = 0; w < l.num_points; ++w)
    p[w] = w < g.num_nodes() ? vp[g.node_vertex(w)] - g.num_components()
                             : divisor_point(l, d, dp[*l.point_divisor[w]]);
  return p;
}

/// Permutation of ambient coordinates induced by generator k.
inline Permutation xi_ambient_permutation(const DualGraph &g, const DivisorConfig &d,
                                          const XiLayout &l, std::size_t k) {
  const Permutation &vp = g.generators().at(k), &dp = d.action().at(k);
  const Permutation pts = xi_point_permutation(g, d, l, k);
  auto move_point = [&](std::size_t w) { return pts[w]; };
  Permutation p(l.ambient());
  for (std::size_t i = 0; i < d.size(); ++i) p[i] = dp[i];
  for (std::size_t k2 = 0; k2 < l.pairs.size(); ++k2) {
    auto [c, w] = l.pairs[k2];
    p[l.num_divisors + k2] = l.pair_coord(vp[c], move_point(w));
  }
  return p;
}

/// Xi at level ell^s with its structure maps.
struct XiModule {
  Integer ell;
  unsigned s = 1;
  XiLayout layout;
  LModule module;
  /// Xi_s into the ambient (Z/ell^s)^n.
  LMap inclusion;
  HomologyLattice h1;
  LModule h1_module;
  /// H_1 tensor Z/ell^s into Xi_s.
  LMap iota;
  LModule ksigma;
  /// Ker(sum) into (Z/ell^s)^D.
  LMap ksigma_inclusion;
  LMap phi;
  ComplexReport spl2;
  bool phi_surjective = false;
  /// Action of each generator on Xi_s and on Ker(sum).
  std::vector<LMap> xi_action, ksigma_action;
};

namespace detail {

inline LMap permutation_action(const LMap &inc, const Permutation &p) {
  return lift_through(LMap(inc.domain(), inc.codomain(), permutation_matrix(p) * inc.matrix()), inc);
}

} // namespace detail

inline XiModule build_xi(const DualGraph &g, const DivisorConfig &d, const Integer &ell, unsigned s) {
  require_prime(ell);
  if (s == 0) throw ConfigIncompatible("level must be positive");
  XiModule x;
  x.ell = ell;
  x.s = s;
  x.layout = xi_layout(g, d);
  const XiLayout &l = x.layout;
  const std::size_t n = l.ambient(), nd = l.num_divisors;

  IntMatrix cons = xi_constraints(g, d, l);
  LModule amb = LModule::homogeneous(ell, s, static_cast<unsigned>(n));
  LModule rows = LModule::homogeneous(ell, s, static_cast<unsigned>(cons.rows()));
  KernelResult kx = kernel(LMap(amb, rows, cons));
  x.module = kx.module;
  x.inclusion = kx.inclusion;

  LModule dblock = LModule::homogeneous(ell, s, static_cast<unsigned>(nd));
  IntMatrix ones(1, nd);
  for (std::size_t i = 0; i < nd; ++i) ones(0, i) = 1;
  KernelResult kk = kernel(LMap(dblock, LModule::cyclic(ell, s), ones));
  x.ksigma = kk.module;
  x.ksigma_inclusion = kk.inclusion;

  IntMatrix proj(nd, n);
  for (std::size_t i = 0; i < nd; ++i) proj(i, i) = 1;
  LMap to_d = LMap(amb, dblock, proj) * x.inclusion;
  x.phi = lift_through(to_d, x.ksigma_inclusion);

  x.h1 = h1_lattice(g);
  x.h1_module = LModule::homogeneous(ell, s, static_cast<unsigned>(x.h1.rank()));
  IntMatrix emb(n, x.h1.rank());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    std::size_t row = l.pair_coord(g.edge(e).first, g.edge(e).second);
    for (std::size_t j = 0; j < x.h1.rank(); ++j) emb(row, j) = x.h1.basis(e, j);
  }
  x.iota = lift_through(LMap(x.h1_module, amb, emb), x.inclusion);
  x.spl2 = short_exact_check(x.iota, x.phi, "spl2");
  x.phi_surjective = is_surjective(x.phi);

  for (std::size_t k = 0; k < g.generators().size(); ++k) {
    Permutation p = xi_ambient_permutation(g, d, l, k);
    x.xi_action.push_back(detail::permutation_action(x.inclusion, p));
    x.ksigma_action.push_back(detail::permutation_action(x.ksigma_inclusion, d.action()[k]));
  }
  return x;
}

struct PsiResult {
  LMap psi;
  std::size_t m = 0;
  bool identity_holds = false;  // phi * psi == m
  bool equivariant = false;
};

/// Checks that the listed trees form one orbit under the action.
inline void require_orbit(const DualGraph &g, const std::vector<EdgeSet> &orbit) {
  if (orbit.empty()) throw NotAnOrbit("empty orbit");
  std::set<EdgeSet> members;
  for (auto t : orbit) {
    std::sort(t.begin(), t.end());
    members.insert(t);
  }
  if (members.size() != orbit.size()) throw NotAnOrbit("repeated tree");
  std::set<EdgeSet> reached{*members.begin()};
  std::vector<EdgeSet> queue{*members.begin()};
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (const auto &vp : g.generators()) {
      Permutation ep = g.edge_permutation(vp);
      EdgeSet img;
      for (auto e : queue[i]) img.push_back(ep[e]);
      std::sort(img.begin(), img.end());
      if (!members.count(img)) throw NotAnOrbit("orbit is not closed under the action");
      if (reached.insert(img).second) queue.push_back(img);
    }
  if (reached.size() != members.size()) throw NotAnOrbit("trees lie in several orbits");
}

/// Ambient image of alpha in Ker(sum) under the splitting built from orbit.
inline std::vector<Integer> psi_ambient(const DualGraph &g, const DivisorConfig &d,
                                        const XiLayout &l, const std::vector<EdgeSet> &orbit,
                                        const std::vector<Integer> &alpha, const Integer &modulus) {
  const std::size_t m = orbit.size();
  std::vector<Integer> beta(l.num_points, 0);
  for (std::size_t i = 0; i < d.size(); ++i) beta[divisor_point(l, d, i)] += alpha[i];
  std::vector<Integer> a(g.num_vertices(), 0);
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i].at == Divisor::At::Component) a[d[i].where] += beta[divisor_point(l, d, i)];
  for (std::size_t n = 0; n < g.num_nodes(); ++n) a[g.node_vertex(n)] = -beta[n];
  std::vector<Integer> out(l.ambient(), 0);
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = Integer(m) * alpha[i];
  for (const auto &t : orbit) {
    std::vector<Integer> x = tree_solve(g, t, a, modulus);
    for (std::size_t e = 0; e < g.num_edges(); ++e)
      out[l.pair_coord(g.edge(e).first, g.edge(e).second)] += x[e];
  }
  for (std::size_t k = 0; k < l.pairs.size(); ++k) {
    std::size_t w = l.pairs[k].second;
    if (w >= g.num_nodes()) out[l.num_divisors + k] = -Integer(m) * beta[w];
  }
  for (auto &v : out) v = mod_floor(v, modulus);
  return out;
}

inline PsiResult build_psi(const DualGraph &g, const DivisorConfig &d, const XiModule &x,
                           const std::vector<EdgeSet> &orbit) {
  require_orbit(g, orbit);
  const Integer mod = ipow(x.ell, x.s);
  const LMap &kin = x.ksigma_inclusion;
  IntMatrix amb(x.layout.ambient(), x.ksigma.ngens());
  for (std::size_t j = 0; j < x.ksigma.ngens(); ++j) {
    std::vector<Integer> alpha = kin.matrix().column(j);
    amb.set_column(j, psi_ambient(g, d, x.layout, orbit, alpha, mod));
  }
  PsiResult r;
  r.m = orbit.size();
  r.psi = lift_through(LMap(x.ksigma, x.inclusion.codomain(), amb), x.inclusion);
  r.identity_holds = x.phi * r.psi == LMap::scalar(x.ksigma, Integer(r.m));
  r.equivariant = true;
  for (std::size_t k = 0; k < x.xi_action.size(); ++k)
    if (x.xi_action[k] * r.psi != r.psi * x.ksigma_action[k]) r.equivariant = false;
  return r;
}

/// Evaluates phi(psi(alpha)) == m alpha on every element of Ker(sum) when
/// |D| <= max_divisors and ell^s <= max_modulus.  Returns the number of
/// elements checked, or nothing when the bounds are exceeded.
inline std::optional<std::size_t> exhaustive_phi_psi(const XiModule &x, const LMap &psi,
                                                     const Integer &m,
                                                     std::size_t max_divisors = 4,
                                                     const Integer &max_modulus = 27) {
  if (x.layout.num_divisors > max_divisors || ipow(x.ell, x.s) > max_modulus) return std::nullopt;
  const LModule &k = x.ksigma;
  LMap comp = x.phi * psi;
  std::vector<Integer> v(k.ngens(), 0);
  std::size_t count = 0;
  for (;;) {
    std::vector<Integer> lhs = comp.apply(v), rhs = v;
    for (auto &c : rhs) c *= m;
    if (lhs != LMap::reduce(k, rhs)) return 0;
    ++count;
    std::size_t i = 0;
    for (; i < v.size(); ++i) {
      if (++v[i] < k.modulus(i)) break;
      v[i] = 0;
    }
    if (i == v.size()) break;
  }
  return count;
}

struct BezoutResult {
  LMap psi_star;
  Integer m;
  std::vector<Integer> coefficients;
  bool identity_holds = false;
};

/// Integer combination of per-orbit splittings with phi * psi* = gcd * Id.
inline BezoutResult bezout_combine(const XiModule &x, const std::vector<PsiResult> &psis,
                                   const Integer &m_gamma) {
  if (psis.empty()) throw GcdShortfall("no splittings supplied");
  BezoutResult b;
  b.m = Integer(psis.front().m);
  b.coefficients.assign(psis.size(), 0);
  b.coefficients[0] = 1;
  for (std::size_t i = 1; i < psis.size(); ++i) {
    auto [gd, u, v] = ext_gcd(b.m, Integer(psis[i].m));
    for (std::size_t j = 0; j < i; ++j) b.coefficients[j] *= u;
    b.coefficients[i] = v;
    b.m = gd;
  }
  if (b.m != m_gamma)
    throw GcdShortfall("orbit sizes have gcd " + b.m.str() + ", m is " + m_gamma.str());
  b.psi_star = b.coefficients[0] * psis[0].psi;
  for (std::size_t i = 1; i < psis.size(); ++i) b.psi_star = b.psi_star + b.coefficients[i] * psis[i].psi;
  b.identity_holds = x.phi * b.psi_star == LMap::scalar(x.ksigma, b.m);
  return b;
}

struct SplittingResult {
  LMap section;
  bool phi_section_identity = false;
  /// [iota | section] is an isomorphism from H_1 + Ker(sum) onto Xi_s.
  bool splits = false;
};

/// The section m^{-1} psi and the splitting it gives, for ell not dividing m.
inline SplittingResult splitting_section(const XiModule &x, const LMap &psi, const Integer &m) {
  if (m % x.ell == 0) throw ConfigIncompatible("m is divisible by " + x.ell.str());
  const Integer mod = ipow(x.ell, x.s);
  SplittingResult r;
  r.section = inverse_mod(m, mod) * psi;
  r.phi_section_identity = x.phi * r.section == LMap::identity(x.ksigma);
  BasedModule sum = direct_sum_based({x.h1_module, x.ksigma});
  IntMatrix cols = hstack(x.iota.matrix(), r.section.matrix());
  IntMatrix m2(cols.rows(), cols.cols());
  for (std::size_t c = 0; c < cols.cols(); ++c)
    for (std::size_t i = 0; i < cols.rows(); ++i) m2(i, sum.position[c]) = cols(i, c);
  r.splits = r.phi_section_identity && is_isomorphism(LMap(sum.module, x.module, m2));
  return r;
}

} // namespace devissage
