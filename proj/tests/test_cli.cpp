#include <string>

#include <gtest/gtest.h>

#include "devissage/instance_json.hpp"
#include "devissage/suites.hpp"

using namespace devissage;

namespace {

std::string path(const std::string &name) { return std::string(DEVISSAGE_FIXTURES) + "/" + name + ".json"; }

const char *kBanana = R"({
  "components": [{"id": "v1", "genus": 0}, {"id": "v2", "genus": 0}],
  "nodes": ["p", "q"],
  "edges": [["p", "v1"], ["v1", "q"], ["v2", "p"], ["v2", "q"]],
  "action": [["v1", "v2"]],
  "divisors": [{"id": "D1", "at": {"component": "v1"}}, {"id": "D2", "at": {"component": "v2"}},
               {"id": "E", "at": {"node": "p"}}],
  "ell": 3, "q": 5
})";

std::string error_of(const std::string &text) {
  try {
    parse_instance(text, "case");
  } catch (const std::exception &e) {
    return e.what();
  }
  return {};
}

SuiteConfig config_for(const SingularityInstance &inst) {
  SuiteConfig c;
  c.ell = inst.ell;
  c.level = 3;
  return c;
}

} // namespace

TEST(Parser, BananaWithAutoDivisorAction) {
  auto inst = parse_instance(kBanana);
  EXPECT_EQ(inst.graph.num_edges(), 4U);
  ASSERT_EQ(inst.graph.generators().size(), 1U);
  // Swapping v1 and v2 swaps D1 and D2 and fixes E.
  EXPECT_EQ(inst.divisors.action()[0], (Permutation{1, 0, 2}));
  EXPECT_EQ(inst.ell, 3);
  EXPECT_EQ(inst.q, 5);
  EXPECT_EQ(inst.name, "input");
}

TEST(Parser, GeneratorListAndExplicitDivisorCycles) {
  std::string text = kBanana;
  text.replace(text.find(R"("action": [["v1", "v2"]])"), 24, R"("action": [[["v1", "v2"], ["D1", "D2"]]])");
  auto inst = parse_instance(text);
  EXPECT_EQ(inst.divisors.action()[0], (Permutation{1, 0, 2}));
  std::string wrong = kBanana;
  wrong.replace(wrong.find(R"("action": [["v1", "v2"]])"), 24, R"("action": [[["v1", "v2"], ["D1"]]])");
  EXPECT_THROW(parse_instance(wrong), ConfigIncompatible);
}

TEST(Parser, Diagnostics) {
  EXPECT_NE(error_of("{\"components\": [}").find("malformed JSON"), std::string::npos);
  EXPECT_NE(error_of("{\"components\": [}").find("line 1"), std::string::npos);
  EXPECT_NE(error_of("[]").find("expected an object"), std::string::npos);
  EXPECT_NE(error_of(R"({"components": [{"id": "a"}], "nodes": [], "edges": []})").find("/components/0"),
            std::string::npos);
  std::string mixed = kBanana;
  mixed.replace(mixed.find(R"(["v1", "v2"]])"), 13, R"(["v1", "D1"]])");
  EXPECT_NE(error_of(mixed).find("mixes divisors"), std::string::npos);
  std::string unknown = kBanana;
  unknown.replace(unknown.find(R"("node": "p")"), 11, R"("node": "z")");
  EXPECT_NE(error_of(unknown).find("unknown node z"), std::string::npos);
  EXPECT_THROW(load_instance(path("bad_syntax")), ParseError);
  EXPECT_THROW(load_instance(path("bad_degree3")), InvalidGraph);
  EXPECT_THROW(load_instance(path("missing")), ParseError);
  std::string coprime = kBanana;
  coprime.replace(coprime.find("\"q\": 5"), 6, "\"q\": 6");
  EXPECT_THROW(parse_instance(coprime), MismatchedBase);
}

TEST(Parser, JacobianDefaults) {
  auto inst = load_instance(path("g1_genus10"));
  ASSERT_EQ(inst.jacobians.size(), 1U);
  EXPECT_EQ(inst.jacobians[0].f, 1U);
  EXPECT_EQ(inst.jacobians[0].poly.q, 5);
  EXPECT_EQ(inst.graph.genus(inst.jacobians[0].orbit_rep), 1U);
}

TEST(Suites, FixturesPass) {
  for (const char *name : {"g1_swap", "g1_trivial", "g2_tree"}) {
    auto inst = load_instance(path(name));
    for (const char *suite : {"graph", "splitting", "devissage", "bhn"}) {
      auto r = run_suite(suite, config_for(inst), &inst);
      EXPECT_TRUE(r.pass()) << name << " " << suite << " " << to_json(r, false).dump();
    }
  }
}

TEST(Suites, GraphReportOnNodeSwap) {
  auto inst = load_instance(path("g1_swap"));
  auto j = to_json(run_suite("bhn", config_for(inst), &inst), false);
  EXPECT_EQ(j["verdict"], "PASS");
  bool saw_rho = false;
  for (const auto &c : j["checks"])
    if (c["check"] == "corank_equals_rho") {
      saw_rho = true;
      EXPECT_EQ(c["detail"]["rho"], 0);
    }
  EXPECT_TRUE(saw_rho);
}

TEST(Suites, TreeCapIsALimitError) {
  auto inst = load_instance(path("g1_swap"));
  SuiteConfig c = config_for(inst);
  c.tree_cap = 2;
  auto r = run_suite("graph", c, &inst);
  EXPECT_FALSE(r.pass());
  ASSERT_TRUE(r.error.has_value());
  EXPECT_EQ(r.error_code, 3);
  EXPECT_THROW(run_suite("nosuch", c, &inst), ConfigIncompatible);
}

TEST(Suites, ReportsAreDeterministic) {
  auto inst = load_instance(path("g1_trivial"));
  SuiteConfig c = config_for(inst);
  for (const char *suite : {"boxcalc", "graph", "splitting", "bhn"}) {
    std::string a = to_json(run_suite(suite, c, &inst), false).dump(2);
    std::string b = to_json(run_suite(suite, c, &inst), false).dump(2);
    EXPECT_EQ(a, b) << suite;
    EXPECT_EQ(a.find("seconds"), std::string::npos);
  }
  EXPECT_NE(to_json(run_suite("graph", c, &inst), true).dump().find("seconds"), std::string::npos);
}
