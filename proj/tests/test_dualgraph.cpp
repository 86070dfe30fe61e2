#include <random>

#include <gtest/gtest.h>

#include "devissage/dualgraph.hpp"
#include "support/oracles.hpp"
#include "support/random_graphs.hpp"

using namespace devissage;

namespace {

std::size_t draw(std::mt19937_64 &rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

/// Two components v1, v2 meeting at nodes p, q.  Vertex order v1, v2, p, q.
DualGraph banana(bool swap_nodes, unsigned g1 = 0, unsigned g2 = 0) {
  std::vector<Permutation> action;
  if (swap_nodes) action.push_back({0, 1, 3, 2});
  return DualGraph({{"v1", g1}, {"v2", g2}}, {"p", "q"}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, action);
}

DualGraph banana_trivial() { return DualGraph({{"v1", 0}, {"v2", 0}}, {"p", "q"}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {{0, 1, 2, 3}}); }

DualGraph tree_graph() { return DualGraph({{"v1", 0}, {"v2", 0}}, {"p"}, {{0, 0}, {1, 0}}); }

/// The banana with a third component v3 joined to v1 at a new node r.
DualGraph banana_with_tail(bool swap_nodes) {
  std::vector<Permutation> action;
  if (swap_nodes) action.push_back({0, 1, 2, 4, 3, 5});
  return DualGraph({{"v1", 0}, {"v2", 0}, {"v3", 1}}, {"p", "q", "r"},
                   {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 2}, {2, 2}}, action);
}

/// Two bananas a1-a2 and b1-b2 hanging off a fixed component c, exchanged
/// by the action.
DualGraph swapped_bananas() {
  // Components a1 a2 b1 b2 c = 0..4; nodes p1 q1 p2 q2 r1 r2 = 5..10.
  std::vector<std::pair<std::size_t, std::size_t>> e{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 2}, {3, 2},
                                                     {2, 3}, {3, 3}, {4, 4}, {0, 4}, {4, 5}, {2, 5}};
  Permutation s{2, 3, 0, 1, 4, 7, 8, 5, 6, 10, 9};
  return DualGraph({{"a1", 0}, {"a2", 0}, {"b1", 0}, {"b2", 0}, {"c", 0}},
                   {"p1", "q1", "p2", "q2", "r1", "r2"}, e, {s});
}

DivisorConfig free_divisors(const DualGraph &g) {
  std::vector<Divisor> d;
  for (std::size_t c = 0; c < g.num_components(); ++c)
    d.push_back({"D" + std::to_string(c + 1), Divisor::At::Component, c});
  std::vector<Permutation> act;
  for (const auto &vp : g.generators()) act.emplace_back(vp.begin(), vp.begin() + static_cast<long>(d.size()));
  return {g, d, act};
}

IntMatrix h1_action_of(const DualGraph &g, const Permutation &p) {
  DualGraph h(g.components(), g.nodes(), g.edges(), {p});
  return h1_lattice(h).action.at(0);
}

/// x supported on the tree with vertex sums a.
bool solves(const DualGraph &g, const EdgeSet &tree, const std::vector<Integer> &a,
            const std::vector<Integer> &x, const Integer &mod) {
  std::vector<Integer> sums(g.num_vertices(), 0);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (x[e] != 0 && std::find(tree.begin(), tree.end(), e) == tree.end()) return false;
    sums[g.edge(e).first] += x[e];
    sums[g.node_vertex(g.edge(e).second)] += x[e];
  }
  for (std::size_t v = 0; v < sums.size(); ++v)
    if (mod_floor(sums[v] - a[v], mod) != 0) return false;
  return true;
}

} // namespace

TEST(Graph, BettiOnSmallGraphs) {
  EXPECT_EQ(betti(tree_graph()), 0U);
  EXPECT_EQ(betti(banana(true)), 1U);
  EXPECT_EQ(betti(banana_with_tail(false)), 1U);
  EXPECT_EQ(banana_with_tail(false).num_vertices(), 6U);
  EXPECT_EQ(oracle::cycle_rank(banana_with_tail(false)), 1U);
  EXPECT_EQ(n_x(banana(false, 1, 0)), 2U);
  EXPECT_EQ(n_x(tree_graph()), 0U);
  EXPECT_EQ(n_x(swapped_bananas()), betti(swapped_bananas()));
}

TEST(Graph, HomologyLatticeAndAction) {
  EXPECT_EQ(h1_lattice(tree_graph()).rank(), 0U);
  HomologyLattice h = h1_lattice(banana(true));
  ASSERT_EQ(h.rank(), 1U);
  EXPECT_EQ(h.action.at(0), IntMatrix{{-1}});
  EXPECT_EQ(h1_lattice(banana_trivial()).action.at(0), IntMatrix{{1}});
  EXPECT_TRUE((banana(true).boundary() * h.basis).is_zero());
}

TEST(Graph, InvariantRank) {
  EXPECT_EQ(rho(banana(true)), 0U);
  EXPECT_EQ(rho(banana_trivial()), 1U);
  EXPECT_EQ(rho(banana(false)), 1U);
  DualGraph s = swapped_bananas();
  EXPECT_EQ(betti(s), 2U);
  EXPECT_EQ(rho(s), 1U);
  EXPECT_EQ(rho_by_character(s), 1U);
  EXPECT_EQ(oracle::fixed_cycle_rank(s), 1U);
  EXPECT_EQ(oracle::fixed_cycle_rank(banana(true)), 0U);
}

TEST(Graph, SpanningTreesAndMatrixTree) {
  auto t = spanning_trees(tree_graph());
  ASSERT_EQ(t.size(), 1U);
  EXPECT_EQ(t[0], (EdgeSet{0, 1}));
  DualGraph g = banana(true);
  auto trees = spanning_trees(g);
  EXPECT_EQ(trees.size(), 4U);
  EXPECT_EQ(matrix_tree_count(g), 4);
  EXPECT_EQ(oracle::brute_spanning_trees(g), trees);
  EXPECT_THROW(spanning_trees(g, 2), EnumerationCapExceeded);
}

TEST(Graph, TreeOrbitGcd) {
  TreeOrbits o = tree_orbits(banana(true));
  ASSERT_EQ(o.orbits.size(), 2U);
  EXPECT_EQ(o.orbits[0].size(), 2U);
  EXPECT_EQ(o.orbits[1].size(), 2U);
  EXPECT_EQ(o.m, 2U);
  EXPECT_EQ(oracle::tree_orbit_gcd(banana(true)), 2U);
  EXPECT_EQ(m_gamma(banana_trivial()), 1U);
  EXPECT_EQ(m_gamma(banana(false)), 1U);
  EXPECT_EQ(m_gamma(swapped_bananas()), oracle::tree_orbit_gcd(swapped_bananas()));
}

TEST(Graph, RejectsIllegalGraphs) {
  // Three components all meeting two nodes: every node has degree 3.
  EXPECT_THROW(DualGraph({{"a", 0}, {"b", 0}, {"c", 0}}, {"p", "q"},
                         {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}}),
               InvalidGraph);
  EXPECT_THROW(DualGraph({{"a", 0}, {"b", 0}}, {"p"}, {{0, 0}, {0, 0}}), InvalidGraph);
  EXPECT_THROW(DualGraph({{"a", 0}, {"b", 0}, {"c", 0}, {"d", 0}}, {"p", "q"},
                         {{0, 0}, {1, 0}, {2, 1}, {3, 1}}),
               InvalidGraph);
  EXPECT_THROW(DualGraph({{"a", 1}, {"b", 0}}, {"p"}, {{0, 0}, {1, 0}}, {{1, 0, 2}}), InvalidGraph);
  EXPECT_THROW(DualGraph({{"a", 0}, {"b", 0}}, {"p"}, {{0, 0}, {1, 0}}, {{0, 2, 1}}), InvalidGraph);
  EXPECT_THROW(DualGraph({{"a", 0}, {"a", 0}}, {"p"}, {{0, 0}, {1, 0}}), InvalidGraph);
  EXPECT_THROW(DualGraph({}, {}, {}), InvalidGraph);
}

TEST(TreeSolve, LeavesAreForced) {
  // Component c carries nodes n1..n3; each n_i also lies on a leaf l_i.
  DualGraph g({{"c", 0}, {"l1", 0}, {"l2", 0}, {"l3", 0}}, {"n1", "n2", "n3"},
              {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {2, 1}, {3, 2}});
  EdgeSet tree{0, 1, 2, 3, 4, 5};
  // l_i = 1, 2, 3; each node takes the sum of its two edges.
  std::vector<Integer> a{Integer(0), 1, 2, 3, 1, 2, 3};
  auto x = tree_solve(g, tree, a, 0);
  EXPECT_EQ(x[g.edge_index(1, 0)], 1);
  EXPECT_EQ(x[g.edge_index(2, 1)], 2);
  EXPECT_EQ(x[g.edge_index(3, 2)], 3);
  EXPECT_TRUE(solves(g, tree, a, x, 1'000'000));
}

TEST(TreeSolve, BananaMinusAnEdge) {
  DualGraph g = banana(false);
  const Integer mod = 9;
  for (std::size_t drop = 0; drop < 4; ++drop) {
    EdgeSet tree;
    for (std::size_t e = 0; e < 4; ++e)
      if (e != drop) tree.push_back(e);
    std::vector<Integer> a{Integer(1), 1, 1, 1};
    auto x = tree_solve(g, tree, a, mod);
    EXPECT_TRUE(solves(g, tree, a, x, mod));
    EXPECT_EQ(x[drop], 0);
    // Any edit on the dropped edge leaves the tree support.
    auto y = x;
    y[drop] = 1;
    EXPECT_FALSE(solves(g, tree, a, y, mod));
    EXPECT_TRUE(oracle::is_zero(tree_solve(g, tree, std::vector<Integer>(4, 0), mod)));
  }
}

TEST(TreeSolve, LinearAndUniqueOnRandomGraphs) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 20; ++t) {
    auto inst = randgraph::random_instance(rng);
    const DualGraph &g = inst.graph;
    auto trees = spanning_trees(g);
    const EdgeSet &tree = trees[draw(rng, trees.size())];
    const Integer mod = 27;
    auto balanced = [&] {
      std::vector<Integer> a(g.num_vertices());
      for (auto &v : a) v = Integer(static_cast<long long>(draw(rng, 27)));
      Integer s = 0;
      for (std::size_t v = 0; v < g.num_components(); ++v) s += a[v];
      for (std::size_t v = g.num_components() + 1; v < a.size(); ++v) s -= a[v];
      a[g.num_components()] = mod_floor(s, mod);
      return a;
    };
    auto a = balanced(), b = balanced();
    auto xa = tree_solve(g, tree, a, mod), xb = tree_solve(g, tree, b, mod);
    EXPECT_TRUE(solves(g, tree, a, xa, mod));
    std::vector<Integer> ab(a.size()), sum(xa.size());
    for (std::size_t v = 0; v < a.size(); ++v) ab[v] = a[v] + b[v];
    for (std::size_t e = 0; e < xa.size(); ++e) sum[e] = mod_floor(xa[e] + xb[e], mod);
    EXPECT_EQ(tree_solve(g, tree, ab, mod), sum);
    a[0] += 1;
    EXPECT_THROW(tree_solve(g, tree, a, mod), BalanceViolated);
  }
}

TEST(TreeSolve, RejectsNonTrees) {
  DualGraph g = banana(false);
  std::vector<Integer> a(4, 0);
  EXPECT_THROW(tree_solve(g, {0, 1}, a, 3), NotASpanningTree);
  EXPECT_THROW(tree_solve(g, {0, 0, 1}, a, 3), NotASpanningTree);
  EXPECT_THROW(tree_solve(tree_graph(), {0, 1, 1}, std::vector<Integer>(3, 0), 3), NotASpanningTree);
  EXPECT_THROW(tree_solve(g, {0, 1, 7}, a, 3), NotASpanningTree);
}

TEST(Xi, TreeGraphIsTheDivisorKernel) {
  DualGraph g = tree_graph();
  XiModule x = build_xi(g, free_divisors(g), 3, 1);
  EXPECT_EQ(x.h1_module, LModule::zero(3));
  EXPECT_EQ(x.module, LModule::cyclic(3, 1));
  EXPECT_EQ(x.ksigma, LModule::cyclic(3, 1));
  EXPECT_TRUE(is_isomorphism(x.phi));
  EXPECT_TRUE(x.spl2.exact());
}

TEST(Xi, BananaKernelOfPhiIsOneCycle) {
  DualGraph g = banana_trivial();
  for (unsigned s = 1; s <= 3; ++s) {
    XiModule x = build_xi(g, free_divisors(g), 3, s);
    EXPECT_EQ(kernel(x.phi).module, LModule::cyclic(3, s));
    EXPECT_TRUE(x.spl2.exact());
    EXPECT_TRUE(x.phi_surjective);
  }
}

TEST(Xi, DivisorConfigValidation) {
  DualGraph g = banana(true);
  EXPECT_THROW(DivisorConfig(g, {}, {{}}), ConfigIncompatible);
  EXPECT_THROW(DivisorConfig(g, {{"D", Divisor::At::Node, 0}}, {{0}}), ConfigIncompatible);
  // A node divisor must follow its node.
  EXPECT_THROW(DivisorConfig(g, {{"D1", Divisor::At::Component, 0}, {"E", Divisor::At::Node, 0}}, {{0, 1}}),
               ConfigIncompatible);
  EXPECT_THROW(DivisorConfig(g, {{"D1", Divisor::At::Component, 0}}, {}), ConfigIncompatible);
  EXPECT_THROW(DivisorConfig(g, {{"D1", Divisor::At::Component, 5}}, {{0}}), ConfigIncompatible);
  EXPECT_THROW(build_xi(g, free_divisors(g), 3, 0), ConfigIncompatible);
}

TEST(Psi, NodeSwapOrbitExhaustive) {
  DualGraph g = banana(true);
  DivisorConfig d = free_divisors(g);
  XiModule x = build_xi(g, d, 3, 1);
  TreeOrbits o = tree_orbits(g);
  for (const auto &orb : o.orbits) {
    std::vector<EdgeSet> trees;
    for (auto i : orb) trees.push_back(o.trees[i]);
    PsiResult p = build_psi(g, d, x, trees);
    EXPECT_EQ(p.m, 2U);
    EXPECT_TRUE(p.identity_holds);
    EXPECT_TRUE(p.equivariant);
    // 3^{|D| - 1} elements of Ker(sum).
    EXPECT_EQ(exhaustive_phi_psi(x, p.psi, 2), std::optional<std::size_t>(3));
  }
  EXPECT_THROW(build_psi(g, d, x, {o.trees[o.orbits[0][0]]}), NotAnOrbit);
  EXPECT_THROW(build_psi(g, d, x, {}), NotAnOrbit);
}

TEST(Psi, TrivialActionSplits) {
  DualGraph g = banana_trivial();
  DivisorConfig d = free_divisors(g);
  for (unsigned s = 1; s <= 3; ++s) {
    XiModule x = build_xi(g, d, 3, s);
    auto trees = spanning_trees(g);
    PsiResult p = build_psi(g, d, x, {trees[1]});
    EXPECT_EQ(p.m, 1U);
    EXPECT_TRUE(p.identity_holds);
    EXPECT_EQ(x.phi * p.psi, LMap::identity(x.ksigma));
    EXPECT_TRUE(splitting_section(x, p.psi, 1).splits);
    XiLayout l = xi_layout(g, d);
    EXPECT_TRUE(oracle::is_zero(psi_ambient(g, d, l, {trees[1]}, {Integer(0), 0}, 27)));
  }
}

TEST(Psi, SwapSplitsAwayFromTwo) {
  DualGraph g = banana(true);
  DivisorConfig d = free_divisors(g);
  TreeOrbits o = tree_orbits(g);
  std::vector<EdgeSet> orb;
  for (auto i : o.orbits[0]) orb.push_back(o.trees[i]);
  for (unsigned s = 1; s <= 3; ++s) {
    XiModule x = build_xi(g, d, 3, s);
    PsiResult p = build_psi(g, d, x, orb);
    EXPECT_TRUE(splitting_section(x, p.psi, 2).splits);
  }
  XiModule x2 = build_xi(g, d, 2, 1);
  EXPECT_THROW(splitting_section(x2, build_psi(g, d, x2, orb).psi, 2), ConfigIncompatible);
}

TEST(Bezout, GcdArithmetic) {
  DualGraph g = tree_graph();
  DivisorConfig d = free_divisors(g);
  XiModule x = build_xi(g, d, 5, 2);
  PsiResult base = build_psi(g, d, x, spanning_trees(g));
  auto scaled = [&](std::size_t m) {
    PsiResult r = base;
    r.m = m;
    r.psi = Integer(m) * base.psi;
    return r;
  };
  BezoutResult one = bezout_combine(x, {base}, 1);
  EXPECT_EQ(one.psi_star, base.psi);
  BezoutResult b = bezout_combine(x, {scaled(2), scaled(3)}, 1);
  EXPECT_EQ(b.m, 1);
  EXPECT_TRUE(b.identity_holds);
  EXPECT_EQ(b.coefficients[0] * 2 + b.coefficients[1] * 3, 1);
  BezoutResult c = bezout_combine(x, {scaled(4), scaled(6)}, 2);
  EXPECT_EQ(c.m, 2);
  EXPECT_TRUE(c.identity_holds);
  EXPECT_THROW(bezout_combine(x, {scaled(4), scaled(6)}, 1), GcdShortfall);
  EXPECT_THROW(bezout_combine(x, {}, 1), GcdShortfall);
}

TEST(RandomGraphs, InvariantsAgreeWithOracles) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 50; ++t) {
    auto inst = randgraph::random_instance(rng);
    const DualGraph &g = inst.graph;
    HomologyLattice h = h1_lattice(g);
    EXPECT_EQ(betti(g), h.rank());
    EXPECT_EQ(betti(g), oracle::cycle_rank(g));
    auto trees = spanning_trees(g);
    EXPECT_EQ(Integer(trees.size()), matrix_tree_count(g));
    EXPECT_EQ(trees, oracle::brute_spanning_trees(g));
    EXPECT_EQ(rho(g), rho_by_character(g));
    EXPECT_EQ(rho(g), oracle::fixed_cycle_rank(g));
    EXPECT_EQ(m_gamma(g), oracle::tree_orbit_gcd(g));
    // Words of length up to 4 in the generator and its inverse.
    const Permutation &s = g.generators()[0];
    Permutation inv(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) inv[s[i]] = i;
    Permutation w = identity_permutation(s.size());
    IntMatrix mw = IntMatrix::identity(h.rank());
    IntMatrix ms = h.action[0], mi = h1_action_of(g, inv);
    for (int k = 0; k < 4; ++k) {
      const bool fwd = draw(rng, 2) != 0;
      w = compose(fwd ? s : inv, w);
      mw = (fwd ? ms : mi) * mw;
      EXPECT_EQ(h1_action_of(g, w), mw);
    }
  }
}

TEST(RandomGraphs, SplittingOnRandomInstances) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 10; ++t) {
    auto inst = randgraph::random_instance(rng);
    const DualGraph &g = inst.graph;
    TreeOrbits o = tree_orbits(g);
    for (Integer ell : {Integer(2), Integer(3)}) {
      XiModule x = build_xi(g, inst.divisors, ell, 2);
      EXPECT_TRUE(x.spl2.exact());
      std::vector<PsiResult> psis;
      for (const auto &orb : o.orbits) {
        std::vector<EdgeSet> trees;
        for (auto i : orb) trees.push_back(o.trees[i]);
        psis.push_back(build_psi(g, inst.divisors, x, trees));
        EXPECT_TRUE(psis.back().identity_holds);
        EXPECT_TRUE(psis.back().equivariant);
      }
      BezoutResult b = bezout_combine(x, psis, Integer(o.m));
      EXPECT_TRUE(b.identity_holds);
    }
  }
}
