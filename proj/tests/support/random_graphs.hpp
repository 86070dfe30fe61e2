#pragma once

// Random legal dual graphs with automorphism actions and divisor layouts.

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "devissage/dualgraph.hpp"

namespace randgraph {

using namespace devissage;

inline std::size_t draw(std::mt19937_64 &rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

struct Shape {
  std::vector<unsigned> genera;
  /// Each node joins two distinct components.
  std::vector<std::pair<std::size_t, std::size_t>> nodes;
};

inline bool connected(const Shape &s) {
  const std::size_t c = s.genera.size();
  std::vector<std::size_t> parent(c);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (auto [a, b] : s.nodes) parent[find(a)] = find(b);
  for (std::size_t i = 0; i < c; ++i)
    if (find(i) != find(0)) return false;
  return true;
}

inline Shape random_shape(std::mt19937_64 &rng, std::size_t max_components, std::size_t max_nodes,
                          unsigned max_genus) {
  for (;;) {
    Shape s;
    const std::size_t c = 2 + draw(rng, max_components - 1);
    for (std::size_t i = 0; i < c; ++i) s.genera.push_back(static_cast<unsigned>(draw(rng, max_genus + 1)));
    const std::size_t n = (c - 1) + draw(rng, max_nodes - c + 2);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t a = draw(rng, c), b = draw(rng, c - 1);
      if (b >= a) ++b;
      s.nodes.emplace_back(std::min(a, b), std::max(a, b));
    }
    if (connected(s)) return s;
  }
}

/// Vertex permutations preserving genera and incidence, by brute force over
/// component permutations and the induced node matchings.
inline std::vector<Permutation> automorphisms(const Shape &s, std::size_t limit = 5000) {
  const std::size_t c = s.genera.size(), n = s.nodes.size();
  std::vector<std::size_t> cp(c);
  std::iota(cp.begin(), cp.end(), 0);
  std::vector<Permutation> out;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < c && ok; ++i) ok = s.genera[cp[i]] == s.genera[i];
    if (!ok) continue;
    // Nodes must map to nodes over the image pair; enumerate matchings.
    std::vector<std::size_t> np(n);
    std::vector<bool> used(n, false);
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (out.size() >= limit) return;
      if (k == n) {
        Permutation p(c + n);
        for (std::size_t i = 0; i < c; ++i) p[i] = cp[i];
        for (std::size_t i = 0; i < n; ++i) p[c + i] = c + np[i];
        out.push_back(p);
        return;
      }
      auto [a, b] = s.nodes[k];
      std::pair<std::size_t, std::size_t> want{std::min(cp[a], cp[b]), std::max(cp[a], cp[b])};
      for (std::size_t t = 0; t < n; ++t) {
        if (used[t] || s.nodes[t] != want) continue;
        used[t] = true;
        np[k] = t;
        rec(k + 1);
        used[t] = false;
      }
    };
    rec(0);
  } while (std::next_permutation(cp.begin(), cp.end()) && out.size() < limit);
  return out;
}

struct RandomInstance {
  DualGraph graph;
  DivisorConfig divisors;
};

/// One free divisor per component plus one divisor on every node of a
/// randomly chosen set of node orbits; the divisor action follows the graph.
inline DivisorConfig divisors_for(const DualGraph &g, std::mt19937_64 &rng) {
  const std::size_t c = g.num_components(), n = g.num_nodes();
  std::vector<Permutation> group = g.group_elements();
  std::vector<bool> on_node(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    if (on_node[k] || draw(rng, 3) != 0) continue;
    for (const auto &p : group) on_node[p[c + k] - c] = true;
  }
  std::vector<Divisor> divs;
  std::vector<std::size_t> at_vertex;
  for (std::size_t i = 0; i < c; ++i) {
    divs.push_back({"D" + std::to_string(i), Divisor::At::Component, i});
    at_vertex.push_back(i);
  }
  for (std::size_t k = 0; k < n; ++k)
    if (on_node[k]) {
      divs.push_back({"E" + std::to_string(k), Divisor::At::Node, k});
      at_vertex.push_back(c + k);
    }
  std::vector<Permutation> action;
  for (const auto &gen : g.generators()) {
    Permutation dp(divs.size());
    for (std::size_t i = 0; i < divs.size(); ++i) {
      auto it = std::find(at_vertex.begin(), at_vertex.end(), gen[at_vertex[i]]);
      dp[i] = static_cast<std::size_t>(it - at_vertex.begin());
    }
    action.push_back(dp);
  }
  return DivisorConfig(g, divs, action);
}

/// A connected graph with a single random automorphism as generator.
inline RandomInstance random_instance(std::mt19937_64 &rng, std::size_t max_components = 4,
                                      std::size_t max_nodes = 5, unsigned max_genus = 1) {
  Shape s = random_shape(rng, max_components, max_nodes, max_genus);
  auto autos = automorphisms(s);
  Permutation gen = autos[draw(rng, autos.size())];
  std::vector<DualGraph::Component> comps;
  for (std::size_t i = 0; i < s.genera.size(); ++i) comps.push_back({"v" + std::to_string(i), s.genera[i]});
  std::vector<std::string> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t k = 0; k < s.nodes.size(); ++k) {
    nodes.push_back("n" + std::to_string(k));
    edges.emplace_back(s.nodes[k].first, k);
    edges.emplace_back(s.nodes[k].second, k);
  }
  RandomInstance r;
  r.graph = DualGraph(comps, nodes, edges, {gen});
  r.divisors = divisors_for(r.graph, rng);
  return r;
}

} // namespace randgraph
