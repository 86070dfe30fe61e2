#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "devissage/sequences.hpp"

namespace devissage {

using Json = nlohmann::ordered_json;

inline const std::vector<std::string> &suite_names() {
  static const std::vector<std::string> names{"boxcalc", "torsionlevels", "vanishing", "graph",
                                              "splitting", "devissage", "bhn"};
  return names;
}

inline bool suite_needs_instance(const std::string &s) {
  return s == "graph" || s == "splitting" || s == "devissage" || s == "bhn";
}

struct SuiteConfig {
  Integer ell = 3;
  unsigned precision = kDefaultPrecision;
  unsigned level = 4;
  std::uint64_t seed = 20240101;
  std::size_t tree_cap = kDefaultTreeCap;
  /// Random trials for the box-calculus laws.
  std::size_t box_trials = 100;
  /// Random lattices for the rank equality over fixed points.
  std::size_t lattice_trials = 200;
  /// Orbits built explicitly in the splitting suite.
  std::size_t max_orbits = 64;
};

struct Check {
  std::string name;
  bool pass = false;
  Json detail = Json::object();
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;
  /// Set when the suite stopped on an exception.
  std::optional<std::string> error;
  /// 3 for precision or enumeration limits, 2 otherwise.
  int error_code = 0;
  double seconds = 0;

  [[nodiscard]] bool pass() const {
    if (error) return false;
    for (const auto &c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Serialization.

inline Json to_json(const ComplexReport &r) {
  Json j;
  j["sequence"] = r.name;
  j["side"] = r.side == Side::Lattice ? "module" : "group";
  Json terms = Json::array();
  for (std::size_t i = 0; i < r.length(); ++i) {
    Json t;
    if (i < r.labels.size() && !r.labels[i].empty()) t["label"] = r.labels[i];
    t["structure"] = r.term_str(i);
    if (i < r.modeled.size() && r.modeled[i]) t["status"] = "MODELED";
    else t["status"] = "COMPUTED";
    if (r.is_complex) t["homology"] = r.homology_str(i);
    terms.push_back(t);
  }
  j["terms"] = terms;
  j["is_complex"] = r.is_complex;
  j["verdict"] = r.exact() ? "EXACT" : "NOT_EXACT";
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

inline Json to_json(const SuiteResult &s, bool timings) {
  Json j;
  j["suite"] = s.suite;
  j["verdict"] = s.pass() ? "PASS" : "FAIL";
  Json checks = Json::array();
  for (const auto &c : s.checks) {
    Json x;
    x["check"] = c.name;
    x["verdict"] = c.pass ? "PASS" : "FAIL";
    if (!c.detail.empty()) x["detail"] = c.detail;
    checks.push_back(x);
  }
  j["checks"] = checks;
  if (s.error) j["error"] = *s.error;
  if (timings) j["seconds"] = s.seconds;
  return j;
}

namespace detail {

/// Deterministic generator for a suite.
inline std::mt19937_64 suite_rng(std::uint64_t seed, const std::string &suite) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : suite) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
  return std::mt19937_64(seed ^ h);
}

inline std::size_t draw(std::mt19937_64 &rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

inline CoLGroup random_group(std::mt19937_64 &rng, const Integer &ell) {
  unsigned corank = static_cast<unsigned>(draw(rng, 3));
  std::vector<unsigned> exps;
  for (std::size_t k = draw(rng, 3); k > 0; --k) exps.push_back(1 + static_cast<unsigned>(draw(rng, 3)));
  return CoLGroup(LModule(ell, corank, exps));
}

inline IntMatrix signed_permutation(std::mt19937_64 &rng, std::size_t n) {
  Permutation p = identity_permutation(n);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[draw(rng, i)]);
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(p[i], i) = draw(rng, 2) ? 1 : -1;
  return m;
}

/// Closure of a set of signed permutation matrices, or nothing past limit.
inline std::optional<std::size_t> matrix_group_order(const std::vector<IntMatrix> &gens, std::size_t limit) {
  const std::size_t n = gens.front().rows();
  std::vector<IntMatrix> elems{IntMatrix::identity(n)};
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (const auto &g : gens) {
      IntMatrix p = g * elems[i];
      if (std::find(elems.begin(), elems.end(), p) == elems.end()) {
        elems.push_back(p);
        if (elems.size() > limit) return std::nullopt;
      }
    }
  return elems.size();
}

/// A unimodular matrix and its inverse, from random elementary operations.
inline std::pair<IntMatrix, IntMatrix> random_unimodular(std::mt19937_64 &rng, std::size_t n) {
  IntMatrix u = IntMatrix::identity(n), v = IntMatrix::identity(n);
  if (n < 2) return {u, v};
  for (int k = 0; k < 6; ++k) {
    std::size_t i = draw(rng, n), j = draw(rng, n - 1);
    if (j >= i) ++j;
    Integer c = Integer(static_cast<long long>(draw(rng, 5))) - 2;
    IntMatrix e = IntMatrix::identity(n), ei = IntMatrix::identity(n);
    e(i, j) = c;
    ei(i, j) = -c;
    u = e * u;
    v = v * ei;
  }
  return {u, v};
}

struct RandomLattice {
  std::size_t rank = 0;
  std::vector<IntMatrix> action;
  std::size_t order = 1;
};

/// A G-lattice of rank <= max_rank with |G| <= max_order: signed
/// permutations conjugated by a unimodular change of basis.
inline RandomLattice random_g_lattice(std::mt19937_64 &rng, std::size_t max_rank, std::size_t max_order) {
  for (;;) {
    RandomLattice l;
    l.rank = 1 + draw(rng, max_rank);
    std::vector<IntMatrix> gens;
    for (std::size_t k = 1 + draw(rng, 2); k > 0; --k) gens.push_back(signed_permutation(rng, l.rank));
    auto order = matrix_group_order(gens, max_order);
    if (!order) continue;
    l.order = *order;
    auto [u, v] = random_unimodular(rng, l.rank);
    for (const auto &g : gens) l.action.push_back(u * g * v);
    return l;
  }
}

template <class F> void run_guarded(SuiteResult &res, F &&body) {
  auto t0 = std::chrono::steady_clock::now();
  try {
    body();
  } catch (const PrecisionExhausted &e) {
    res.error = e.what();
    res.error_code = 3;
  } catch (const EnumerationCapExceeded &e) {
    res.error = e.what();
    res.error_code = 3;
  } catch (const std::exception &e) {
    res.error = e.what();
    res.error_code = 2;
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace detail

// Suites.

inline SuiteResult boxcalc_suite(const SuiteConfig &cfg) {
  SuiteResult res;
  res.suite = "boxcalc";
  detail::run_guarded(res, [&] {
    auto rng = detail::suite_rng(cfg.seed, res.suite);
    const Integer &ell = cfg.ell;
    const CoLGroup qz = CoLGroup::qz(ell);
    std::size_t unit_ok = 0, assoc_ok = 0, dist_ok = 0;
    Json first_failure;
    for (std::size_t i = 0; i < cfg.box_trials; ++i) {
      CoLGroup a = detail::random_group(rng, ell);
      if (box(a, qz) == a && box(qz, a) == a) ++unit_ok;
      else if (first_failure.is_null()) first_failure = a.str();
    }
    for (std::size_t i = 0; i < cfg.box_trials; ++i) {
      CoLGroup a = detail::random_group(rng, ell), b = detail::random_group(rng, ell),
               c = detail::random_group(rng, ell);
      if (box(box(a, b), c) == box(a, box(b, c))) ++assoc_ok;
      if (box(a, group_direct_sum(b, c)) == group_direct_sum(box(a, b), box(a, c))) ++dist_ok;
    }
    res.checks.push_back({"box_unit", unit_ok == cfg.box_trials,
                          {{"trials", cfg.box_trials}, {"passed", unit_ok}}});
    if (!first_failure.is_null()) res.checks.back().detail["first_failure"] = first_failure;
    res.checks.push_back({"box_associative", assoc_ok == cfg.box_trials,
                          {{"trials", cfg.box_trials}, {"passed", assoc_ok}}});
    res.checks.push_back({"box_distributive", dist_ok == cfg.box_trials,
                          {{"trials", cfg.box_trials}, {"passed", dist_ok}}});

    std::size_t tor_ok = 0, tor_total = 0;
    for (unsigned n = 1; n <= 5; ++n)
      for (unsigned m = 1; m <= 5; ++m) {
        ++tor_total;
        if (tor_box(CoLGroup::finite(ell, {n}), CoLGroup::finite(ell, {m})) ==
            CoLGroup::finite(ell, {std::min(n, m)}))
          ++tor_ok;
      }
    res.checks.push_back({"tor_box_min", tor_ok == tor_total, {{"pairs", tor_total}, {"passed", tor_ok}}});

    // Multiplication by ell on Q_l/Z_l, then boxed with Z/l.
    const LModule z1 = LModule::free(ell, 1);
    LMap mult_dual(z1, z1, IntMatrix{{ell}});
    const bool surjective = is_injective(mult_dual);
    const CoLGroup zl = CoLGroup::finite(ell, {1});
    const CoLGroup boxed = box(zl, qz);
    LMap boxed_dual = tensor_map(LMap::identity(zl.dual()), mult_dual);
    const bool zero_after = boxed_dual.is_zero();
    res.checks.push_back({"right_exactness_witness", surjective && boxed == zl && zero_after,
                          {{"multiplication_surjective", surjective},
                           {"boxed_group", boxed.str()},
                           {"boxed_map_zero", zero_after},
                           {"cokernel", CoLGroup(kernel(boxed_dual).module).str()}}});
  });
  return res;
}

inline SuiteResult torsionlevels_suite(const SuiteConfig &cfg) {
  SuiteResult res;
  res.suite = "torsionlevels";
  detail::run_guarded(res, [&] {
    const Integer &ell = cfg.ell;
    std::size_t cases = 0, ok = 0, evaluations = 0;
    bool all_exhaustive = true;
    Json failures = Json::array();
    std::size_t tors_ok = 0, tors_cases = 0;
    for (unsigned c = 1; c <= 2; ++c) {
      CoLGroup a = CoLGroup::divisible(ell, c);
      for (unsigned n = 1; n <= 3; ++n) {
        for (unsigned s = 1; s <= 3; ++s) {
          ++tors_cases;
          if (level_box_commutes(a, n, s)) ++tors_ok;
        }
        for (unsigned t = 2; t <= 3; ++t)
          for (unsigned s = 1; s < t; ++s) {
            TorsbisResult r = torsbis_maps(a, s, t, n);
            ++cases;
            evaluations += r.evaluated;
            all_exhaustive = all_exhaustive && r.exhaustive;
            const bool good = r.commutes && r.matches_direct_system && r.pointwise_commutes && r.lift_independent;
            if (good) ++ok;
            else failures.push_back({{"corank", c}, {"n", n}, {"s", s}, {"t", t}});
          }
      }
    }
    res.checks.push_back({"level_of_box_power", tors_ok == tors_cases, {{"cases", tors_cases}, {"passed", tors_ok}}});
    Check c{"torsbis_square", ok == cases && all_exhaustive,
            {{"cases", cases}, {"passed", ok}, {"evaluations", evaluations}, {"exhaustive", all_exhaustive}}};
    if (!failures.empty()) c.detail["failures"] = failures;
    res.checks.push_back(c);
  });
  return res;
}

struct VanishingRow {
  std::string name;
  unsigned j = 0;
  int r = 0;
  VanishingReport probe;
  DualityReport duality;
  bool expected_nontrivial = false;
  [[nodiscard]] bool pass() const {
    const bool verdict = (probe.verdict == Verdict::Nontrivial) == expected_nontrivial;
    return verdict && probe.consistent() && probe.level_monotone() && duality.agree();
  }
};

/// Probes over a list of Weil polynomials, skipping those over a field of
/// characteristic ell.
inline std::vector<VanishingRow> vanishing_grid(const std::vector<CatalogEntry> &entries, const Integer &ell,
                                                unsigned max_j, int max_r, unsigned levels, unsigned precision) {
  std::vector<VanishingRow> rows;
  for (const auto &e : entries) {
    if (e.poly.q % ell == 0) continue;
    AbelianData a{e.poly, DeclaredSide::DualVariety};
    for (unsigned j = 0; j <= max_j; ++j)
      for (int r = -max_r; r <= max_r; ++r) {
        VanishingRow row;
        row.name = e.name;
        row.j = j;
        row.r = r;
        row.probe = vanishing_probe(a, ell, j, r, levels, precision);
        row.duality = duality_crosscheck(a, ell, j, r, levels, precision);
        row.expected_nontrivial = static_cast<int>(j) == -2 * r;
        rows.push_back(std::move(row));
      }
  }
  return rows;
}

inline SuiteResult vanishing_suite(const SuiteConfig &cfg, const SingularityInstance *inst = nullptr) {
  SuiteResult res;
  res.suite = "vanishing";
  detail::run_guarded(res, [&] {
    std::vector<CatalogEntry> cat = weil_catalog();
    std::size_t admissible = 0;
    for (const auto &e : cat) admissible += weil_weight_check(e.poly);
    res.checks.push_back({"weil_fixtures", admissible == cat.size() && admissible >= 5,
                          {{"fixtures", cat.size()}, {"admissible", admissible}}});
    const CharPoly bad = CharPoly::from_descending({1, -6, 5}, 5);
    res.checks.push_back({"weil_rejects_non_weil", !weil_weight_check(bad), {{"polynomial", bad.str()}}});

    if (inst)
      for (const auto &j : inst->jacobians)
        cat.push_back({"instance:" + inst->graph.components()[j.orbit_rep].id, j.poly});
    const unsigned levels = std::min(cfg.level, 4U);
    auto rows = vanishing_grid(cat, cfg.ell, 4, 3, levels, cfg.precision);
    auto rows2 = vanishing_grid(weil_catalog_genus2(), cfg.ell, 2, 1, std::min(levels, 2U), cfg.precision);
    rows.insert(rows.end(), rows2.begin(), rows2.end());
    std::size_t ok = 0, nontrivial = 0, sign_variant = 0, dual_ok = 0;
    Json failures = Json::array(), excluded = Json::array(), variants = Json::array();
    for (const auto &r : rows) {
      if (r.pass()) ++ok;
      else failures.push_back({{"poly", r.name}, {"j", r.j}, {"r", r.r}, {"verdict", verdict_name(r.probe.verdict)}});
      if (r.duality.agree()) ++dual_ok;
      if (r.probe.excluded_case) {
        ++nontrivial;
        excluded.push_back({{"poly", r.name}, {"j", r.j}, {"r", r.r},
                            {"verdict", verdict_name(r.probe.verdict)},
                            {"corank", r.probe.exact_corank},
                            {"unit_root_multiplicity", r.probe.unit_root_multiplicity}});
      }
      if (r.probe.sign_variant && r.j > 0) {
        ++sign_variant;
        variants.push_back({{"poly", r.name}, {"j", r.j}, {"r", r.r}, {"verdict", verdict_name(r.probe.verdict)}});
      }
    }
    Check grid{"h1_vanishing_grid", ok == rows.size() && !rows.empty(),
               {{"probes", rows.size()}, {"passed", ok}, {"levels", levels}}};
    if (!failures.empty()) grid.detail["failures"] = failures;
    res.checks.push_back(grid);
    res.checks.push_back({"excluded_case_nontrivial", true, {{"cases", nontrivial}, {"rows", excluded}}});
    res.checks.back().pass = [&] {
      for (const auto &r : rows)
        if (r.probe.excluded_case && r.probe.verdict != Verdict::Nontrivial) return false;
      return nontrivial > 0;
    }();
    res.checks.push_back({"sign_variant_reported", true, {{"cases", sign_variant}, {"rows", variants}}});
    res.checks.push_back({"duality_crosscheck", dual_ok == rows.size(), {{"probes", rows.size()}, {"agree", dual_ok}}});
  });
  return res;
}

/// Induced matrices on words of length <= max_len agree whenever the
/// permutations agree.
inline bool action_coherent(const DualGraph &g, const HomologyLattice &h, unsigned max_len = 4) {
  std::map<Permutation, IntMatrix> seen;
  std::vector<std::pair<Permutation, IntMatrix>> frontier{
      {identity_permutation(g.num_vertices()), IntMatrix::identity(h.rank())}};
  seen.emplace(frontier.front());
  for (unsigned len = 0; len < max_len; ++len) {
    std::vector<std::pair<Permutation, IntMatrix>> next;
    for (const auto &[p, m] : frontier)
      for (std::size_t k = 0; k < g.generators().size(); ++k) {
        Permutation q = compose(g.generators()[k], p);
        IntMatrix mq = h.action[k] * m;
        auto it = seen.find(q);
        if (it == seen.end()) {
          seen.emplace(q, mq);
          next.emplace_back(q, mq);
        } else if (it->second != mq) {
          return false;
        }
      }
    frontier = std::move(next);
  }
  return true;
}

inline SuiteResult graph_suite(const SuiteConfig &cfg, const SingularityInstance &inst) {
  SuiteResult res;
  res.suite = "graph";
  detail::run_guarded(res, [&] {
    const DualGraph &g = inst.graph;
    HomologyLattice h = h1_lattice(g);
    const unsigned b = betti(g);
    res.checks.push_back({"betti_equals_h1_rank", b == h.rank(), {{"betti", b}, {"h1_rank", h.rank()}}});
    const Integer mt = matrix_tree_count(g);
    auto trees = spanning_trees(g, cfg.tree_cap);
    res.checks.push_back({"matrix_tree_count", Integer(trees.size()) == mt,
                          {{"enumerated", trees.size()}, {"cofactor", mt.str()}}});
    const std::size_t r1 = rho(g), r2 = rho_by_character(g);
    res.checks.push_back({"rho_two_ways", r1 == r2, {{"rho", r1}, {"rho_character", r2}}});
    TreeOrbits to = tree_orbits(g, cfg.tree_cap);
    Json sizes = Json::array();
    for (const auto &o : to.orbits) sizes.push_back(o.size());
    res.checks.push_back({"m_gamma", to.m >= 1, {{"m", to.m}, {"orbit_sizes", sizes}}});
    res.checks.push_back({"action_coherent", action_coherent(g, h), {{"generators", g.generators().size()}}});
    res.checks.push_back({"n_x", true, {{"n_x", n_x(g)}, {"betti", b}}});
  });
  return res;
}

inline SuiteResult splitting_suite(const SuiteConfig &cfg, const SingularityInstance &inst) {
  SuiteResult res;
  res.suite = "splitting";
  detail::run_guarded(res, [&] {
    const DualGraph &g = inst.graph;
    TreeOrbits to = tree_orbits(g, cfg.tree_cap);
    const Integer m = Integer(to.m);
    for (unsigned s = 1; s <= cfg.level; ++s) {
      XiModule x = build_xi(g, inst.divisors, cfg.ell, s);
      const std::string tag = "s=" + std::to_string(s);
      res.checks.push_back({"spl2_exact " + tag, x.spl2.exact() && x.phi_surjective,
                            {{"xi", x.module.str()}, {"ker_sum", x.ksigma.str()}, {"sequence", to_json(x.spl2)}}});
      std::vector<PsiResult> psis;
      std::size_t ident = 0, equiv = 0, exhaustive = 0;
      std::size_t built = 0;
      Integer running = 0;
      for (const auto &o : to.orbits) {
        const bool needed = gcd(running, Integer(o.size())) != running || running == 0;
        if (built >= cfg.max_orbits && !needed) continue;
        std::vector<EdgeSet> orbit;
        for (auto i : o) orbit.push_back(to.trees[i]);
        PsiResult p = build_psi(g, inst.divisors, x, orbit);
        ++built;
        ident += p.identity_holds;
        equiv += p.equivariant;
        if (auto n = exhaustive_phi_psi(x, p.psi, Integer(p.m)); n && *n > 0) ++exhaustive;
        else if (n && *n == 0) ident = 0;
        if (needed) {
          running = gcd(running, Integer(o.size()));
          psis.push_back(p);
        }
      }
      res.checks.push_back({"phi_psi_equals_m " + tag, ident == built && built > 0,
                            {{"orbits_built", built}, {"identity", ident}, {"exhaustive", exhaustive}}});
      res.checks.push_back({"psi_equivariant " + tag, equiv == built, {{"orbits_built", built}, {"equivariant", equiv}}});
      BezoutResult bz = bezout_combine(x, psis, m);
      Json coeffs = Json::array();
      for (const auto &c : bz.coefficients) coeffs.push_back(c.str());
      res.checks.push_back({"bezout_m_gamma " + tag, bz.identity_holds && bz.m == m,
                            {{"m", bz.m.str()}, {"coefficients", coeffs}}});
      if (m % cfg.ell != 0) {
        SplittingResult sp = splitting_section(x, bz.psi_star, bz.m);
        res.checks.push_back({"section_splits " + tag, sp.splits, {{"m", m.str()}}});
      }
    }
  });
  return res;
}

inline SuiteResult devissage_suite(const SuiteConfig &cfg, const SingularityInstance &inst) {
  SuiteResult res;
  res.suite = "devissage";
  detail::run_guarded(res, [&] {
    for (unsigned s = 1; s <= cfg.level; ++s) {
      const std::string tag = "s=" + std::to_string(s);
      UpsilonReport u = upsilon_structure(inst, 0, s);
      res.checks.push_back({"upsilon_exact " + tag, u.sequence.exact() && u.equivariant, {{"sequence", to_json(u.sequence)}}});
      res.checks.push_back({"upsilon_structure " + tag, u.structure_matches(),
                            {{"structure", u.structure.str()},
                             {"predicted", LModule::homogeneous(inst.ell, s, u.n_x_predicted).str()},
                             {"n_x", u.n_x_predicted},
                             {"corank", u.corank},
                             {"defect", u.defect}}});
      LambdaReport l = lambda_structure(inst, s);
      res.checks.push_back({"lambda_structure " + tag, l.holds(),
                            {{"structure", l.structure.str()}, {"frobenius_scalar", l.frobenius_scalar.str()}}});
      for (int r = 0; r <= 3; ++r) {
        DevissageReport d = build_devissage(inst, r, s);
        res.checks.push_back({"dev_spl r=" + std::to_string(r) + " " + tag, d.exact() && d.twist_bookkeeping,
                              {{"twist_bookkeeping", d.twist_bookkeeping},
                               {"dev1", to_json(d.dev1)},
                               {"dev2", to_json(d.dev2)},
                               {"spl1", to_json(d.spl1)},
                               {"spl2", to_json(d.spl2)}}});
      }
    }
  });
  return res;
}

inline SuiteResult bhn_suite(const SuiteConfig &cfg, const SingularityInstance &inst) {
  SuiteResult res;
  res.suite = "bhn";
  detail::run_guarded(res, [&] {
    BhnReport b = bhn_finite_field_report(inst, cfg.tree_cap);
    Json levels = Json::array();
    bool lv = true;
    for (const auto &l : b.levels) {
      levels.push_back({{"s", l.s}, {"h1", l.h1_level.str()}});
      lv = lv && l.matches_rho;
    }
    res.checks.push_back({"corank_equals_rho", b.corank == b.rho && b.rho == b.rho_character && lv,
                          {{"h1", group_str(b.h1_homology)},
                           {"corank", b.corank},
                           {"rho", b.rho},
                           {"rho_character", b.rho_character},
                           {"levels", levels}}});
    res.checks.push_back({"dual_fixed_rank", b.dual_fixed_rank == b.rho && b.ono.equal(),
                          {{"dual_fixed_rank", b.dual_fixed_rank}, {"ono_left", b.ono.left}, {"ono_right", b.ono.right}}});
    res.checks.push_back({"f_killed_by_m", b.f_killed_by_m, {{"F", group_str(b.f_dual)}, {"m", b.m}}});
    res.checks.push_back({"kernel_model", b.kernel_dual == LModule::free(inst.ell, static_cast<unsigned>(b.rho)),
                          {{"kernel", group_str(b.kernel_dual)}}});
    res.checks.push_back({"display_exact", b.display.exact() && b.cohom2_tail.exact(),
                          {{"bhnfin", to_json(b.display)}, {"cohom2", to_json(b.cohom2_tail)}}});
    Json jac = Json::array();
    bool jok = true;
    for (const auto &j : b.jacobians) {
      jac.push_back({{"component", j.component}, {"verdict", verdict_name(j.probe.verdict)}, {"shapiro", j.shapiro}});
      jok = jok && j.probe.verdict == Verdict::Vanishes && j.shapiro;
    }
    res.checks.push_back({"jacobian_h1_vanishes", jok, {{"jacobians", jac}}});
    auto rng = detail::suite_rng(cfg.seed, res.suite);
    std::size_t ok = 0;
    for (std::size_t i = 0; i < cfg.lattice_trials; ++i) {
      detail::RandomLattice l = detail::random_g_lattice(rng, 6, 8);
      ok += ono_check(l.rank, l.action, inst.ell).equal();
    }
    res.checks.push_back({"ono_random_lattices", ok == cfg.lattice_trials, {{"trials", cfg.lattice_trials}, {"passed", ok}}});
    res.checks.push_back({"modeled_caveat", true, {{"caveats", b.caveats}}});
  });
  return res;
}

inline SuiteResult run_suite(const std::string &name, const SuiteConfig &cfg, const SingularityInstance *inst) {
  if (name == "boxcalc") return boxcalc_suite(cfg);
  if (name == "torsionlevels") return torsionlevels_suite(cfg);
  if (name == "vanishing") return vanishing_suite(cfg, inst);
  if (!inst) throw ConfigIncompatible("suite " + name + " needs an instance");
  if (name == "graph") return graph_suite(cfg, *inst);
  if (name == "splitting") return splitting_suite(cfg, *inst);
  if (name == "devissage") return devissage_suite(cfg, *inst);
  if (name == "bhn") return bhn_suite(cfg, *inst);
  throw ConfigIncompatible("unknown suite " + name);
}

} // namespace devissage
