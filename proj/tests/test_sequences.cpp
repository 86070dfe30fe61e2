#include <random>
#include <string>

#include <gtest/gtest.h>

#include "devissage/instance_json.hpp"
#include "devissage/sequences.hpp"
#include "devissage/suites.hpp"
#include "support/oracles.hpp"
#include "support/random_graphs.hpp"

using namespace devissage;

namespace {

SingularityInstance fixture(const std::string &name) {
  return load_instance(std::string(DEVISSAGE_FIXTURES) + "/" + name + ".json");
}

/// Corank forced by the exact sequence: 2g per Jacobian orbit member plus
/// the rank of H_1, counted without any module arithmetic.
unsigned sequence_corank(const SingularityInstance &inst) {
  unsigned c = static_cast<unsigned>(oracle::cycle_rank(inst.graph));
  for (const auto &comp : inst.graph.components()) c += 2 * comp.genus;
  return c;
}

SingularityInstance random_genus0(std::mt19937_64 &rng, const Integer &ell, const Integer &q) {
  auto r = randgraph::random_instance(rng, 4, 5, 0);
  SingularityInstance inst;
  inst.name = "random";
  inst.graph = r.graph;
  inst.divisors = r.divisors;
  inst.ell = ell;
  inst.q = q;
  inst.max_level = 3;
  return inst;
}

/// Fixed rank of the contragredient by rational elimination on A^T - 1.
std::size_t dual_fixed_rank(std::size_t n, const std::vector<IntMatrix> &action) {
  if (action.empty()) return n;
  IntMatrix stack(0, n);
  for (const auto &a : action) stack = vstack(stack, a.transpose() - IntMatrix::identity(n));
  return n - oracle::rational_rank(stack);
}

} // namespace

TEST(Upsilon, TreeIsZero) {
  auto inst = fixture("g2_tree");
  for (unsigned s = 1; s <= 4; ++s) {
    auto u = upsilon_structure(inst, 1, s);
    EXPECT_TRUE(u.structure.is_zero());
    EXPECT_EQ(u.n_x_predicted, 0U);
    EXPECT_TRUE(u.structure_matches());
    EXPECT_TRUE(u.sequence.exact());
  }
}

TEST(Upsilon, BananaGenusZero) {
  for (const char *name : {"g1_trivial", "g1_swap"}) {
    auto inst = fixture(name);
    for (unsigned s = 1; s <= 4; ++s) {
      auto u = upsilon_structure(inst, 1, s);
      EXPECT_EQ(u.structure, LModule::cyclic(3, s)) << name;
      EXPECT_EQ(u.n_x_predicted, 1U);
      EXPECT_EQ(u.defect, 0);
      EXPECT_TRUE(u.sequence.exact());
      EXPECT_TRUE(u.equivariant);
    }
  }
}

TEST(Upsilon, GenusOneMatchesTheSequenceCount) {
  // The middle term has corank 2g + rank H_1; n_X counts each genus once.
  for (const char *name : {"g1_genus10", "g1_tail"}) {
    auto inst = fixture(name);
    for (unsigned s = 1; s <= 4; ++s) {
      auto u = upsilon_structure(inst, 1, s);
      EXPECT_TRUE(u.sequence.exact()) << name;
      EXPECT_TRUE(u.divisible_level);
      EXPECT_EQ(u.corank, sequence_corank(inst));
      EXPECT_EQ(u.n_x_predicted, n_x(inst.graph));
      EXPECT_EQ(u.defect, static_cast<int>(sequence_corank(inst)) - static_cast<int>(n_x(inst.graph)));
    }
  }
}

TEST(Lambda, CyclicWithInverseTwist) {
  for (const char *name : {"g2_tree", "g1_trivial", "g1_swap", "g1_genus10", "g1_tail"}) {
    auto inst = fixture(name);
    for (unsigned s = 1; s <= 4; ++s) {
      auto l = lambda_structure(inst, s);
      EXPECT_TRUE(l.holds()) << name << " s=" << s;
      const Integer mod = ipow(inst.ell, s);
      EXPECT_EQ(mod_floor(l.frobenius_scalar * inst.q, mod), 1);
    }
  }
}

TEST(Devissage, FixturesAreExact) {
  for (const char *name : {"g2_tree", "g1_trivial", "g1_swap", "g1_genus10", "g1_tail"}) {
    auto inst = fixture(name);
    for (unsigned s = 1; s <= 3; ++s)
      for (int r = 0; r <= 3; ++r) {
        auto d = build_devissage(inst, r, s);
        EXPECT_TRUE(d.exact()) << name << " s=" << s << " r=" << r;
        EXPECT_TRUE(d.twist_bookkeeping) << name << " s=" << s << " r=" << r;
      }
  }
  auto d = build_devissage(fixture("g1_swap"), 2, 1);
  ASSERT_FALSE(d.spl2.notes.empty());
}

TEST(Devissage, TreeBrIsTheDivisorBlock) {
  auto inst = fixture("g2_tree");
  auto d = build_devissage(inst, 2, 2);
  // H_1 = 0 and no Jacobians: Br model = Xi = Ker(sum).
  EXPECT_EQ(d.dev1.terms[2], LModule::cyclic(3, 2));
  EXPECT_EQ(d.dev1.terms[3], LModule::cyclic(3, 2));
  EXPECT_TRUE(d.dev1.terms[1].is_zero());
}

TEST(Devissage, RandomInstancesAreExact) {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 10; ++t) {
    auto inst = random_genus0(rng, t % 2 ? 3 : 2, t % 2 ? 7 : 5);
    for (unsigned s = 1; s <= 3; ++s) {
      auto d = build_devissage(inst, static_cast<int>(s) - 1, s);
      EXPECT_TRUE(d.exact());
      EXPECT_TRUE(d.twist_bookkeeping);
    }
  }
}

TEST(Ono, SmallLattices) {
  auto neg = ono_check(1, {IntMatrix{{-1}}}, 3);
  EXPECT_EQ(neg.left, 0U);
  EXPECT_EQ(neg.right, 0U);
  auto triv = ono_check(1, {IntMatrix{{1}}}, 3);
  EXPECT_EQ(triv.left, 1U);
  EXPECT_EQ(triv.right, 1U);
  auto g = fixture("g1_swap");
  auto h = ono_check(h1_lattice(g.graph), 3);
  EXPECT_EQ(h.left, 0U);
  EXPECT_EQ(h.right, 0U);
}

TEST(Ono, RandomLatticesAgreeWithRationalRanks) {
  std::mt19937_64 rng(52);
  for (int t = 0; t < 200; ++t) {
    auto l = detail::random_g_lattice(rng, 6, 8);
    EXPECT_LE(l.order, 8U);
    auto r = ono_check(l.rank, l.action, 3);
    EXPECT_TRUE(r.equal());
    EXPECT_EQ(r.left, dual_fixed_rank(l.rank, l.action));
  }
}

TEST(Bhn, NodeSwapBanana) {
  auto b = bhn_finite_field_report(fixture("g1_swap"));
  EXPECT_EQ(b.rho, 0U);
  EXPECT_EQ(b.corank, 0U);
  EXPECT_EQ(b.m, 2U);
  EXPECT_TRUE(b.f_killed_by_m);
  EXPECT_EQ(b.kernel_dual, LModule::zero(3));
  EXPECT_TRUE(b.display.exact());
  EXPECT_TRUE(b.passes());
  ASSERT_FALSE(b.caveats.empty());
  EXPECT_NE(b.caveats.front().find("ModeledTermCaveat"), std::string::npos);
}

TEST(Bhn, TrivialBanana) {
  auto inst = fixture("g1_trivial");
  auto b = bhn_finite_field_report(inst);
  EXPECT_EQ(b.rho, 1U);
  EXPECT_EQ(b.corank, 1U);
  for (const auto &lv : b.levels) EXPECT_EQ(lv.h1_level, LModule::cyclic(3, lv.s));
  EXPECT_TRUE(b.passes());
}

TEST(Bhn, TreeDegenerates) {
  auto b = bhn_finite_field_report(fixture("g2_tree"));
  EXPECT_TRUE(b.h1_homology.is_zero());
  EXPECT_TRUE(b.kernel_dual.is_zero());
  EXPECT_TRUE(b.f_dual.is_zero());
  EXPECT_TRUE(b.passes());
}

TEST(Bhn, JacobianFixtures) {
  for (const char *name : {"g1_genus10", "g1_tail"}) {
    auto b = bhn_finite_field_report(fixture(name));
    ASSERT_EQ(b.jacobians.size(), 1U) << name;
    EXPECT_EQ(b.jacobians[0].probe.verdict, Verdict::Vanishes);
    EXPECT_TRUE(b.jacobians[0].shapiro);
    EXPECT_TRUE(b.passes()) << name;
  }
}

TEST(Bhn, RandomInstances) {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 10; ++t) {
    auto inst = random_genus0(rng, 3, 7);
    auto b = bhn_finite_field_report(inst);
    EXPECT_EQ(b.corank, b.rho);
    EXPECT_EQ(b.rho, oracle::fixed_cycle_rank(inst.graph));
    EXPECT_TRUE(b.f_killed_by_m);
    EXPECT_TRUE(b.passes());
  }
}

TEST(Complexes, ExactnessCheck) {
  const LModule z = LModule::cyclic(3, 1), zero = LModule::zero(3);
  auto ok = exactness_check({LMap::zero(zero, z), LMap(z, z, IntMatrix{{1}}), LMap::zero(z, zero)}, "id");
  EXPECT_TRUE(ok.exact());
  auto bad = exactness_check({LMap::zero(zero, z), LMap(z, z, IntMatrix{{0}}), LMap::zero(z, zero)}, "zero");
  EXPECT_TRUE(bad.is_complex);
  EXPECT_FALSE(bad.exact());
  auto spl2 = build_devissage(fixture("g1_swap"), 1, 1).spl2;
  EXPECT_TRUE(spl2.exact());
}

TEST(Instance, ValidationErrors) {
  auto inst = fixture("g1_genus10");
  auto bad = inst;
  bad.q = 3;
  EXPECT_THROW(bad.validate(), MismatchedBase);
  bad = inst;
  bad.jacobians.clear();
  EXPECT_THROW(bad.validate(), ConfigIncompatible);
  bad = inst;
  bad.precision = 2;
  EXPECT_THROW(bad.validate(), ConfigIncompatible);
}
