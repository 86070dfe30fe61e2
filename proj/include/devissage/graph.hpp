#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "devissage/errors.hpp"
#include "devissage/matrix.hpp"
#include "devissage/smith.hpp"

namespace devissage {

using Permutation = std::vector<std::size_t>;

inline Permutation compose(const Permutation &a, const Permutation &b) {
  Permutation c(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) c[i] = a[b[i]];
  return c;
}

inline Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

inline bool is_permutation(const Permutation &p) {
  std::vector<bool> seen(p.size(), false);
  for (auto x : p) {
    if (x >= p.size() || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

/// All elements of the group generated by gens, in breadth-first order.
inline std::vector<Permutation> group_closure(const std::vector<Permutation> &gens, std::size_t n,
                                              std::size_t limit = 1'000'000) {
  std::vector<Permutation> out{identity_permutation(n)};
  std::set<Permutation> seen{out.front()};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const auto &g : gens) {
      Permutation p = compose(g, out[i]);
      if (seen.insert(p).second) {
        out.push_back(p);
        if (out.size() > limit) throw EnumerationCapExceeded("group larger than " + std::to_string(limit));
      }
    }
  return out;
}

/// Bipartite resolution graph.  Vertices are the components (indices
/// 0..c-1) followed by the nodes.  Edges run from a component to a node and
/// are sorted by (component, node).
class DualGraph {
public:
  struct Component {
    std::string id;
    unsigned genus = 0;
  };

  DualGraph() = default;
  DualGraph(std::vector<Component> components, std::vector<std::string> nodes,
            std::vector<std::pair<std::size_t, std::size_t>> edges,
            std::vector<Permutation> action = {})
      : comps_(std::move(components)), nodes_(std::move(nodes)), edges_(std::move(edges)),
        action_(std::move(action)) {
    validate();
  }

  [[nodiscard]] std::size_t num_components() const { return comps_.size(); }
  [[nodiscard]] std::size_t num_nodes() const { return nodes_.size(); }
  [[nodiscard]] std::size_t num_vertices() const { return comps_.size() + nodes_.size(); }
  [[nodiscard]] std::size_t num_edges() const { return edges_.size(); }
  [[nodiscard]] const std::vector<Component> &components() const { return comps_; }
  [[nodiscard]] const std::vector<std::string> &nodes() const { return nodes_; }
  [[nodiscard]] unsigned genus(std::size_t c) const { return comps_.at(c).genus; }
  /// (component index, node index).
  [[nodiscard]] const std::pair<std::size_t, std::size_t> &edge(std::size_t e) const {
    return edges_.at(e);
  }
  [[nodiscard]] const std::vector<std::pair<std::size_t, std::size_t>> &edges() const { return edges_; }
  [[nodiscard]] std::size_t node_vertex(std::size_t n) const { return comps_.size() + n; }
  [[nodiscard]] std::string vertex_id(std::size_t v) const {
    return v < comps_.size() ? comps_[v].id : nodes_.at(v - comps_.size());
  }
  [[nodiscard]] std::size_t edge_index(std::size_t c, std::size_t n) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{c, n});
    if (it == edges_.end() || *it != std::pair{c, n}) throw InvalidGraph("no such edge");
    return static_cast<std::size_t>(it - edges_.begin());
  }
  /// Vertex permutations generating the Galois image.
  [[nodiscard]] const std::vector<Permutation> &generators() const { return action_; }

  /// Components of node n.
  [[nodiscard]] std::pair<std::size_t, std::size_t> node_components(std::size_t n) const {
    return node_ends_.at(n);
  }
  /// Edges incident to vertex v.
  [[nodiscard]] std::vector<std::size_t> incident_edges(std::size_t v) const {
    std::vector<std::size_t> out;
    for (std::size_t e = 0; e < edges_.size(); ++e)
      if (edges_[e].first == v || node_vertex(edges_[e].second) == v) out.push_back(e);
    return out;
  }

  /// Induced permutation of edges.
  [[nodiscard]] Permutation edge_permutation(const Permutation &vp) const {
    Permutation p(edges_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      std::size_t c = vp[edges_[e].first], n = vp[node_vertex(edges_[e].second)] - comps_.size();
      p[e] = edge_index(c, n);
    }
    return p;
  }

  /// Boundary Z^E -> Z^V, edge e = node - component.
  [[nodiscard]] IntMatrix boundary() const {
    IntMatrix b(num_vertices(), edges_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      b(edges_[e].first, e) -= 1;
      b(node_vertex(edges_[e].second), e) += 1;
    }
    return b;
  }

  [[nodiscard]] std::vector<Permutation> group_elements(std::size_t limit = 1'000'000) const {
    return group_closure(action_, num_vertices(), limit);
  }

  /// Orbits of components under the action.
  [[nodiscard]] std::vector<std::vector<std::size_t>> component_orbits() const {
    std::vector<std::vector<std::size_t>> orbits;
    std::vector<bool> seen(comps_.size(), false);
    for (std::size_t c = 0; c < comps_.size(); ++c) {
      if (seen[c]) continue;
      std::vector<std::size_t> orb{c};
      seen[c] = true;
      for (std::size_t i = 0; i < orb.size(); ++i)
        for (const auto &g : action_)
          if (!seen[g[orb[i]]]) {
            seen[g[orb[i]]] = true;
            orb.push_back(g[orb[i]]);
          }
      std::sort(orb.begin(), orb.end());
      orbits.push_back(orb);
    }
    return orbits;
  }

private:
  void validate() {
    const std::size_t c = comps_.size(), n = nodes_.size();
    if (c == 0) throw InvalidGraph("no components");
    std::set<std::string> ids;
    for (const auto &x : comps_)
      if (!ids.insert(x.id).second) throw InvalidGraph("duplicate id " + x.id);
    for (const auto &x : nodes_)
      if (!ids.insert(x).second) throw InvalidGraph("duplicate id " + x);
    std::sort(edges_.begin(), edges_.end());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (edges_[e].first >= c || edges_[e].second >= n)
        throw InvalidGraph("edge does not join a component to a node");
      if (e && edges_[e] == edges_[e - 1])
        throw InvalidGraph("node " + nodes_[edges_[e].second] + " meets component " +
                           comps_[edges_[e].first].id + " twice (self-crossing)");
    }
    std::vector<std::vector<std::size_t>> ends(n);
    for (const auto &[ci, ni] : edges_) ends[ni].push_back(ci);
    node_ends_.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (ends[i].size() != 2)
        throw InvalidGraph("node " + nodes_[i] + " has degree " + std::to_string(ends[i].size()) +
                           ", expected 2");
      node_ends_.emplace_back(ends[i][0], ends[i][1]);
    }
    // Connectivity.
    std::vector<std::size_t> parent(c + n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto &[ci, ni] : edges_) parent[find(ci)] = find(c + ni);
    for (std::size_t v = 1; v < c + n; ++v)
      if (find(v) != find(0)) throw InvalidGraph("graph is not connected");
    // Action.
    std::set<std::pair<std::size_t, std::size_t>> eset(edges_.begin(), edges_.end());
    for (const auto &g : action_) {
      if (g.size() != c + n || !is_permutation(g)) throw InvalidGraph("action is not a permutation");
      for (std::size_t v = 0; v < c + n; ++v)
        if ((v < c) != (g[v] < c)) throw InvalidGraph("action mixes components and nodes");
      for (std::size_t v = 0; v < c; ++v)
        if (comps_[v].genus != comps_[g[v]].genus) throw InvalidGraph("action changes a genus");
      for (const auto &[ci, ni] : edges_)
        if (!eset.count({g[ci], g[c + ni] - c})) throw InvalidGraph("action does not preserve edges");
    }
  }

  std::vector<Component> comps_;
  std::vector<std::string> nodes_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<Permutation> action_;
  std::vector<std::pair<std::size_t, std::size_t>> node_ends_;
};

inline unsigned betti(const DualGraph &g) {
  return static_cast<unsigned>(g.num_edges() + 1 - g.num_vertices());
}

inline unsigned n_x(const DualGraph &g) {
  unsigned s = 0;
  for (const auto &c : g.components()) s += c.genus;
  return s + betti(g);
}

/// H_1(Gamma, Z) with the induced action of each generator.
struct HomologyLattice {
  /// Columns span the cycle lattice inside Z^E.
  IntMatrix basis;
  std::vector<IntMatrix> action;
  [[nodiscard]] std::size_t rank() const { return basis.cols(); }
};

/// Integer matrix of a permutation: e_i maps to e_{p(i)}.
inline IntMatrix permutation_matrix(const Permutation &p) {
  IntMatrix m(p.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) m(p[i], i) = 1;
  return m;
}

/// Coordinates in a saturated basis of each column of m.
inline IntMatrix coordinates_in(const IntMatrix &basis, const IntMatrix &m) {
  IntMatrix out(basis.cols(), m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    auto x = solve_integer(basis, m.column(j));
    if (!x) throw InternalError("vector outside the lattice");
    out.set_column(j, *x);
  }
  return out;
}

inline HomologyLattice h1_lattice(const DualGraph &g) {
  HomologyLattice h;
  h.basis = integer_kernel(g.boundary());
  for (const auto &vp : g.generators())
    h.action.push_back(coordinates_in(h.basis, permutation_matrix(g.edge_permutation(vp)) * h.basis));
  return h;
}

/// Rank of the lattice fixed by all action matrices.
inline std::size_t invariant_rank(std::size_t rank_, const std::vector<IntMatrix> &action) {
  if (action.empty() || rank_ == 0) return rank_;
  IntMatrix stack(0, rank_);
  for (const auto &a : action) stack = vstack(stack, a - IntMatrix::identity(rank_));
  return rank_ - rank(stack);
}

inline std::size_t invariant_rank(const HomologyLattice &l) {
  return invariant_rank(l.rank(), l.action);
}

inline std::size_t rho(const DualGraph &g) { return invariant_rank(h1_lattice(g)); }

/// Rank of the invariants by averaging the character of H_1 over the group:
/// chi(h) = fixed edges - fixed vertices + 1.
inline std::size_t rho_by_character(const DualGraph &g) {
  auto elems = g.group_elements();
  long long total = 0;
  for (const auto &p : elems) {
    Permutation ep = g.edge_permutation(p);
    long long fe = 0, fv = 0;
    for (std::size_t e = 0; e < ep.size(); ++e) fe += ep[e] == e;
    for (std::size_t v = 0; v < p.size(); ++v) fv += p[v] == v;
    total += fe - fv + 1;
  }
  if (total % static_cast<long long>(elems.size()) != 0)
    throw InternalError("character average is not an integer");
  return static_cast<std::size_t>(total / static_cast<long long>(elems.size()));
}

using EdgeSet = std::vector<std::size_t>;

inline constexpr std::size_t kDefaultTreeCap = 1'000'000;

/// Spanning-tree count from a Laplacian cofactor.
inline Integer matrix_tree_count(const DualGraph &g) {
  const std::size_t nv = g.num_vertices();
  IntMatrix lap(nv, nv);
  for (const auto &[c, n] : g.edges()) {
    std::size_t a = c, b = g.node_vertex(n);
    lap(a, a) += 1;
    lap(b, b) += 1;
    lap(a, b) -= 1;
    lap(b, a) -= 1;
  }
  return determinant(lap.block(1, nv, 1, nv));
}

/// All spanning trees as sorted edge lists, in lexicographic order.
inline std::vector<EdgeSet> spanning_trees(const DualGraph &g, std::size_t cap = kDefaultTreeCap) {
  const Integer expected = matrix_tree_count(g);
  if (expected > cap)
    throw EnumerationCapExceeded(expected.str() + " spanning trees exceed the cap " +
                                 std::to_string(cap));
  const std::size_t nv = g.num_vertices(), ne = g.num_edges();
  auto ends = [&](std::size_t e) { return std::pair{g.edge(e).first, g.node_vertex(g.edge(e).second)}; };
  std::vector<EdgeSet> out;
  EdgeSet chosen;

  auto find = [](std::vector<std::size_t> &p, std::size_t x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  };
  // Whether chosen edges plus edges from index `from` still connect everything.
  auto can_connect = [&](std::size_t from) {
    std::vector<std::size_t> p(nv);
    std::iota(p.begin(), p.end(), 0);
    std::size_t comps = nv;
    auto join = [&](std::size_t e) {
      auto [a, b] = ends(e);
      std::size_t ra = find(p, a), rb = find(p, b);
      if (ra != rb) {
        p[ra] = rb;
        --comps;
      }
    };
    for (auto e : chosen) join(e);
    for (std::size_t e = from; e < ne; ++e) join(e);
    return comps == 1;
  };
  auto creates_cycle = [&](std::size_t e) {
    std::vector<std::size_t> p(nv);
    std::iota(p.begin(), p.end(), 0);
    for (auto f : chosen) {
      auto [a, b] = ends(f);
      p[find(p, a)] = find(p, b);
    }
    auto [a, b] = ends(e);
    return find(p, a) == find(p, b);
  };
  auto rec = [&](auto &&self, std::size_t e) -> void {
    if (chosen.size() == nv - 1) {
      out.push_back(chosen);
      return;
    }
    if (e == ne) return;
    if (!creates_cycle(e)) {
      chosen.push_back(e);
      self(self, e + 1);
      chosen.pop_back();
    }
    if (can_connect(e + 1)) self(self, e + 1);
  };
  rec(rec, 0);
  if (Integer(out.size()) != expected)
    throw InternalError("enumerated " + std::to_string(out.size()) + " trees, Matrix-Tree gives " +
                        expected.str());
  return out;
}

struct TreeOrbits {
  std::vector<EdgeSet> trees;
  /// Orbits as lists of indices into trees.
  std::vector<std::vector<std::size_t>> orbits;
  std::size_t m = 0;
};

inline TreeOrbits tree_orbits(const DualGraph &g, std::size_t cap = kDefaultTreeCap) {
  TreeOrbits t;
  t.trees = spanning_trees(g, cap);
  std::map<EdgeSet, std::size_t> index;
  for (std::size_t i = 0; i < t.trees.size(); ++i) index[t.trees[i]] = i;
  std::vector<Permutation> eps;
  for (const auto &vp : g.generators()) eps.push_back(g.edge_permutation(vp));
  std::vector<bool> seen(t.trees.size(), false);
  std::size_t m = 0;
  for (std::size_t i = 0; i < t.trees.size(); ++i) {
    if (seen[i]) continue;
    std::vector<std::size_t> orb{i};
    seen[i] = true;
    for (std::size_t k = 0; k < orb.size(); ++k)
      for (const auto &ep : eps) {
        EdgeSet img;
        for (auto e : t.trees[orb[k]]) img.push_back(ep[e]);
        std::sort(img.begin(), img.end());
        std::size_t j = index.at(img);
        if (!seen[j]) {
          seen[j] = true;
          orb.push_back(j);
        }
      }
    std::sort(orb.begin(), orb.end());
    m = std::gcd(m, orb.size());
    t.orbits.push_back(orb);
  }
  t.m = m;
  return t;
}

inline std::size_t m_gamma(const DualGraph &g, std::size_t cap = kDefaultTreeCap) {
  return tree_orbits(g, cap).m;
}

/// The unique edge values supported on tree with, at every vertex, the sum
/// over incident edges equal to a.  Values live in Z/modulus (modulus 0
/// means the integers).
inline std::vector<Integer> tree_solve(const DualGraph &g, const EdgeSet &tree,
                                       const std::vector<Integer> &a, const Integer &modulus) {
  const std::size_t nv = g.num_vertices();
  if (a.size() != nv) throw InternalError("vertex value count mismatch");
  auto red = [&](const Integer &x) { return modulus == 0 ? x : mod_floor(x, modulus); };
  {
    std::set<std::size_t> uniq(tree.begin(), tree.end());
    if (uniq.size() != tree.size() || tree.size() != nv - 1)
      throw NotASpanningTree("need " + std::to_string(nv - 1) + " distinct edges");
    std::vector<std::size_t> p(nv);
    std::iota(p.begin(), p.end(), 0);
    auto find = [&](std::size_t x) {
      while (p[x] != x) x = p[x] = p[p[x]];
      return x;
    };
    for (auto e : tree) {
      if (e >= g.num_edges()) throw NotASpanningTree("edge index out of range");
      std::size_t ra = find(g.edge(e).first), rb = find(g.node_vertex(g.edge(e).second));
      if (ra == rb) throw NotASpanningTree("edge set has a cycle");
      p[ra] = rb;
    }
  }
  Integer s1 = 0, s2 = 0;
  for (std::size_t v = 0; v < nv; ++v) (v < g.num_components() ? s1 : s2) += a[v];
  if (red(s1 - s2) != 0) throw BalanceViolated("component sum differs from node sum");

  std::vector<Integer> x(g.num_edges(), 0), res(a.begin(), a.end());
  std::vector<std::vector<std::size_t>> inc(nv);
  for (auto e : tree) {
    inc[g.edge(e).first].push_back(e);
    inc[g.node_vertex(g.edge(e).second)].push_back(e);
  }
  std::vector<std::size_t> deg(nv);
  for (std::size_t v = 0; v < nv; ++v) deg[v] = inc[v].size();
  std::vector<bool> used(g.num_edges(), false), gone(nv, false);
  for (std::size_t step = 0; step + 1 < nv; ++step) {
    std::size_t leaf = nv;
    for (std::size_t v = 0; v < nv && leaf == nv; ++v)
      if (!gone[v] && deg[v] == 1) leaf = v;
    std::size_t e = 0;
    for (auto f : inc[leaf])
      if (!used[f]) e = f;
    used[e] = true;
    gone[leaf] = true;
    x[e] = red(res[leaf]);
    std::size_t other = g.edge(e).first == leaf ? g.node_vertex(g.edge(e).second) : g.edge(e).first;
    res[other] = red(res[other] - x[e]);
    --deg[other];
  }
  for (std::size_t v = 0; v < nv; ++v)
    if (!gone[v] && red(res[v]) != 0) throw BalanceViolated("residual at the last vertex");
  return x;
}

} // namespace devissage
