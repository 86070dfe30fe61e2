#pragma once

// Brute-force references used by the unit and acceptance tests.  None of
// these go through Smith normal form.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "devissage/dualgraph.hpp"
#include "devissage/lprimary.hpp"

namespace devissage {

inline void PrintTo(const LModule &m, std::ostream *os) { *os << m.str(); }
inline void PrintTo(const CoLGroup &g, std::ostream *os) { *os << g.str(); }

} // namespace devissage

namespace oracle {

using devissage::DualGraph;
using devissage::Integer;
using devissage::IntMatrix;
using devissage::LMap;
using devissage::LModule;
using devissage::Permutation;
using Rational = boost::multiprecision::cpp_rational;

/// Rank over Q by Gaussian elimination on rationals.
inline std::size_t rational_rank(const IntMatrix &a) {
  std::vector<std::vector<Rational>> m(a.rows(), std::vector<Rational>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = Rational(a(i, j));
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && m[p][c] == 0) ++p;
    if (p == a.rows()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < a.cols(); ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

inline bool is_zero(const std::vector<Integer> &v) {
  return std::all_of(v.begin(), v.end(), [](const Integer &x) { return x == 0; });
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

/// Cycle rank: edges minus the rank of the boundary over Q.
inline std::size_t cycle_rank(const DualGraph &g) { return g.num_edges() - rational_rank(g.boundary()); }

/// Every (V - 1)-subset of edges that is acyclic, as sorted edge lists.
inline std::vector<std::vector<std::size_t>> brute_spanning_trees(const DualGraph &g) {
  std::vector<std::vector<std::size_t>> out;
  const std::size_t v = g.num_vertices(), e = g.num_edges();
  if (v == 0) return out;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (pick.size() == v - 1) {
      UnionFind uf(v);
      for (auto k : pick) {
        auto [c, n] = g.edge(k);
        if (!uf.unite(c, g.node_vertex(n))) return;
      }
      out.push_back(pick);
      return;
    }
    for (std::size_t k = start; k < e; ++k) {
      pick.push_back(k);
      rec(k + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return out;
}

/// Closure of the edge permutations induced by the vertex action.
inline std::vector<Permutation> edge_group(const DualGraph &g) {
  std::vector<Permutation> gens;
  for (const auto &p : g.generators()) gens.push_back(g.edge_permutation(p));
  Permutation id(g.num_edges());
  std::iota(id.begin(), id.end(), 0);
  std::vector<Permutation> elems{id};
  std::set<Permutation> seen{id};
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (const auto &s : gens) {
      Permutation q(g.num_edges());
      for (std::size_t k = 0; k < q.size(); ++k) q[k] = s[elems[i][k]];
      if (seen.insert(q).second) elems.push_back(q);
    }
  return elems;
}

/// gcd of the orbit sizes of the spanning trees.
inline std::size_t tree_orbit_gcd(const DualGraph &g) {
  auto trees = brute_spanning_trees(g);
  auto group = edge_group(g);
  std::set<std::vector<std::size_t>> done;
  std::size_t m = 0;
  for (const auto &t : trees) {
    if (done.count(t)) continue;
    std::set<std::vector<std::size_t>> orbit;
    for (const auto &p : group) {
      std::vector<std::size_t> img;
      for (auto k : t) img.push_back(p[k]);
      std::sort(img.begin(), img.end());
      orbit.insert(img);
    }
    done.insert(orbit.begin(), orbit.end());
    m = std::gcd(m, orbit.size());
  }
  return m;
}

/// Rank of the cycles constant on edge orbits: the orbit indicator vectors
/// span the fixed edge chains, so this is #orbits minus the rational rank of
/// the boundary on them.
inline std::size_t fixed_cycle_rank(const DualGraph &g) {
  auto group = edge_group(g);
  std::vector<int> orbit_of(g.num_edges(), -1);
  std::size_t orbits = 0;
  for (std::size_t k = 0; k < g.num_edges(); ++k) {
    if (orbit_of[k] >= 0) continue;
    for (const auto &p : group) orbit_of[p[k]] = static_cast<int>(orbits);
    ++orbits;
  }
  const IntMatrix d = g.boundary();
  IntMatrix ds(d.rows(), orbits);
  for (std::size_t k = 0; k < g.num_edges(); ++k)
    for (std::size_t v = 0; v < d.rows(); ++v) ds(v, static_cast<std::size_t>(orbit_of[k])) += d(v, k);
  return orbits - rational_rank(ds);
}

/// Elements of a finite module, as coordinate vectors.
inline std::vector<std::vector<Integer>> elements(const LModule &m) {
  std::vector<std::vector<Integer>> out{{}};
  for (std::size_t i = 0; i < m.ngens(); ++i) {
    std::vector<std::vector<Integer>> next;
    for (const auto &v : out)
      for (Integer a = 0; a < m.modulus(i); ++a) {
        auto w = v;
        w.push_back(a);
        next.push_back(w);
      }
    out = std::move(next);
  }
  return out;
}

/// For a finite module given only by its elements, the counts of elements
/// killed by ell^k for k = 0..kmax determine the isomorphism class.
inline std::vector<std::size_t> torsion_profile(const std::vector<std::vector<Integer>> &elems,
                                                const std::function<std::vector<Integer>(std::vector<Integer>, const Integer &)> &times,
                                                const Integer &ell, unsigned kmax) {
  std::vector<std::size_t> counts;
  for (unsigned k = 0; k <= kmax; ++k) {
    Integer f = devissage::ipow(ell, k);
    std::size_t c = 0;
    for (const auto &x : elems) c += is_zero(times(x, f));
    counts.push_back(c);
  }
  return counts;
}

/// The same profile computed from a canonical form.
inline std::vector<std::size_t> torsion_profile(const LModule &m, unsigned kmax) {
  std::vector<std::size_t> counts;
  for (unsigned k = 0; k <= kmax; ++k) {
    Integer c = 1;
    for (auto e : m.torsion_exponents()) c *= devissage::ipow(m.prime(), std::min(e, k));
    counts.push_back(static_cast<std::size_t>(c));
  }
  return counts;
}

/// Kernel of a map of finite modules by enumeration.
inline std::vector<std::vector<Integer>> kernel_elements(const LMap &f) {
  std::vector<std::vector<Integer>> out;
  for (const auto &x : elements(f.domain()))
    if (is_zero(f.apply(x))) out.push_back(x);
  return out;
}

/// Size of the image of a map of finite modules by enumeration.
inline std::size_t image_size(const LMap &f) {
  std::set<std::vector<Integer>> img;
  for (const auto &x : elements(f.domain())) img.insert(f.apply(x));
  return img.size();
}

inline std::vector<Integer> scale(const LModule &m, std::vector<Integer> v, const Integer &c) {
  for (auto &x : v) x *= c;
  return LMap::reduce(m, v);
}

} // namespace oracle
