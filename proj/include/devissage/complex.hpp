#pragma once

#include <optional>
#include <string>
#include <vector>

#include "devissage/lmap.hpp"

namespace devissage {

/// Which objects a report's terms describe.  Group reports hold the dual
/// complex of a sequence of cofinitely generated groups, in reversed order.
enum class Side { Lattice, Group };

/// ASCII notation for the group whose Pontryagin dual is m.
inline std::string group_str(const LModule &dual) {
  if (dual.is_zero()) return "0";
  std::string p = dual.prime().str();
  std::string out;
  if (dual.free_rank()) {
    out = "(Q_" + p + "/Z_" + p + ")";
    if (dual.free_rank() > 1) out += "^" + std::to_string(dual.free_rank());
  }
  if (!dual.is_free()) {
    LModule fin(dual.prime(), 0, dual.torsion_exponents());
    out += (out.empty() ? "" : " + ") + fin.str();
  }
  return out;
}

struct ComplexReport {
  std::string name;
  Side side = Side::Lattice;
  std::vector<LModule> terms;
  std::vector<LMap> maps;
  bool is_complex = false;
  /// Homology at each term (only when is_complex).
  std::vector<LModule> homology;
  /// Positions at which exactness is claimed.
  std::vector<std::size_t> claimed;
  std::vector<bool> exact_at;
  std::vector<std::string> labels;
  std::vector<bool> modeled;
  std::vector<std::string> notes;

  [[nodiscard]] bool exact() const {
    if (!is_complex) return false;
    for (std::size_t p : claimed)
      if (!exact_at[p]) return false;
    return true;
  }

  /// Term i in the orientation of the original sequence.
  [[nodiscard]] std::string term_str(std::size_t i) const {
    if (side == Side::Lattice) return terms[i].str();
    return group_str(terms[terms.size() - 1 - i]);
  }
  [[nodiscard]] std::string homology_str(std::size_t i) const {
    if (!is_complex) return "?";
    if (side == Side::Lattice) return homology[i].str();
    return group_str(homology[terms.size() - 1 - i]);
  }
  [[nodiscard]] std::size_t length() const { return terms.size(); }
};

/// Verifies that consecutive composites vanish and computes homology at
/// every term.  By default exactness is claimed at each interior term.
inline ComplexReport exactness_check(const std::vector<LMap> &maps, std::string name = {},
                                     std::optional<std::vector<std::size_t>> claimed = {}) {
  if (maps.empty()) throw NotComposable("empty complex");
  for (std::size_t i = 0; i + 1 < maps.size(); ++i)
    if (maps[i].codomain() != maps[i + 1].domain())
      throw NotComposable("map " + std::to_string(i) + " does not compose with map " +
                          std::to_string(i + 1));
  ComplexReport r;
  r.name = std::move(name);
  r.maps = maps;
  r.terms.push_back(maps.front().domain());
  for (const auto &m : maps) r.terms.push_back(m.codomain());
  const std::size_t n = r.terms.size();
  if (claimed) {
    r.claimed = *claimed;
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) r.claimed.push_back(i);
  }
  r.labels.assign(n, "");
  r.modeled.assign(n, false);
  r.is_complex = true;
  for (std::size_t i = 0; i + 1 < maps.size(); ++i)
    if (!(maps[i + 1] * maps[i]).is_zero()) r.is_complex = false;
  r.exact_at.assign(n, false);
  if (!r.is_complex) return r;
  for (std::size_t i = 0; i < n; ++i) {
    LModule h;
    if (i == 0)
      h = kernel(maps[0]).module;
    else if (i == n - 1)
      h = cokernel(maps[n - 2]).module;
    else
      h = homology(maps[i - 1], maps[i]);
    r.homology.push_back(h);
    r.exact_at[i] = h.is_zero();
  }
  return r;
}

/// The same check instantiated for 0 -> A -> B -> C -> 0.
inline ComplexReport short_exact_check(const LMap &f, const LMap &g, std::string name = {}) {
  LModule z = LModule::zero(f.prime());
  std::vector<LMap> maps{LMap::zero(z, f.domain()), f, g, LMap::zero(g.codomain(), z)};
  return exactness_check(maps, std::move(name));
}

/// Exactness of a sequence of groups given by the dual maps, each dual map
/// running opposite to the group map it represents.
inline ComplexReport group_exactness_check(const std::vector<LMap> &dual_maps, std::string name = {}) {
  std::vector<LMap> rev(dual_maps.rbegin(), dual_maps.rend());
  ComplexReport r = exactness_check(rev, std::move(name));
  r.side = Side::Group;
  return r;
}

} // namespace devissage
