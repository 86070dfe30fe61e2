#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "devissage/errors.hpp"
#include "devissage/integer.hpp"
#include "devissage/matrix.hpp"
#include "devissage/smith.hpp"

namespace devissage {

inline void require_prime(const Integer &ell) {
  if (ell < 2 || ell > INT64_MAX || !is_prime(static_cast<std::int64_t>(ell)))
    throw MismatchedPrime(ell.str() + " is not a prime");
}

/// Z_ell^free_rank + sum Z/ell^e_i, stored canonically.
///
/// Generators are ordered free part first, then torsion by decreasing
/// exponent.  Generator i has modulus 0 (free) or ell^e.
class LModule {
public:
  LModule() : ell_(2) {}
  LModule(Integer ell, unsigned free_rank, std::vector<unsigned> torsion = {})
      : ell_(std::move(ell)), free_rank_(free_rank), torsion_(std::move(torsion)) {
    require_prime(ell_);
    for (unsigned e : torsion_)
      if (e == 0) throw InternalError("torsion exponent must be positive");
    std::sort(torsion_.begin(), torsion_.end(), std::greater<>());
  }

  static LModule zero(const Integer &ell) { return {ell, 0, {}}; }
  static LModule free(const Integer &ell, unsigned r) { return {ell, r, {}}; }
  static LModule cyclic(const Integer &ell, unsigned e) {
    return e == 0 ? zero(ell) : LModule(ell, 0, {e});
  }
  /// (Z/ell^e)^n.
  static LModule homogeneous(const Integer &ell, unsigned e, unsigned n) {
    return e == 0 ? zero(ell) : LModule(ell, 0, std::vector<unsigned>(n, e));
  }

  [[nodiscard]] const Integer &prime() const { return ell_; }
  [[nodiscard]] unsigned free_rank() const { return free_rank_; }
  [[nodiscard]] const std::vector<unsigned> &torsion_exponents() const {
    return torsion_;
  }
  [[nodiscard]] std::size_t ngens() const { return free_rank_ + torsion_.size(); }
  [[nodiscard]] bool is_zero() const { return ngens() == 0; }
  [[nodiscard]] bool is_finite() const { return free_rank_ == 0; }
  [[nodiscard]] bool is_free() const { return torsion_.empty(); }

  /// Exponent of generator i, or nullopt for a free generator.
  [[nodiscard]] std::optional<unsigned> exponent(std::size_t i) const {
    if (i < free_rank_) return std::nullopt;
    return torsion_.at(i - free_rank_);
  }
  [[nodiscard]] Integer modulus(std::size_t i) const {
    auto e = exponent(i);
    return e ? ipow(ell_, *e) : Integer(0);
  }
  /// Sum of torsion exponents: log_ell of the order of the torsion part.
  [[nodiscard]] unsigned torsion_length() const {
    return std::accumulate(torsion_.begin(), torsion_.end(), 0U);
  }
  /// Largest torsion exponent (0 if torsion free).
  [[nodiscard]] unsigned exponent_bound() const {
    return torsion_.empty() ? 0U : torsion_.front();
  }

  /// Diagonal relation matrix (generators x torsion generators).
  [[nodiscard]] IntMatrix relations() const {
    IntMatrix r(ngens(), torsion_.size());
    for (std::size_t t = 0; t < torsion_.size(); ++t)
      r(free_rank_ + t, t) = ipow(ell_, torsion_[t]);
    return r;
  }

  friend bool operator==(const LModule &a, const LModule &b) {
    return a.ell_ == b.ell_ && a.free_rank_ == b.free_rank_ &&
           a.torsion_ == b.torsion_;
  }
  friend bool operator!=(const LModule &a, const LModule &b) { return !(a == b); }

  [[nodiscard]] std::string str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    const std::string p = ell_.str();
    bool first = true;
    auto sep = [&] {
      if (!first) os << " + ";
      first = false;
    };
    if (free_rank_) {
      sep();
      os << "Z_" << p;
      if (free_rank_ > 1) os << '^' << free_rank_;
    }
    for (std::size_t i = 0; i < torsion_.size();) {
      std::size_t j = i;
      while (j < torsion_.size() && torsion_[j] == torsion_[i]) ++j;
      sep();
      std::string cyc = "Z/" + p + (torsion_[i] > 1 ? "^" + std::to_string(torsion_[i]) : "");
      if (j - i > 1)
        os << '(' << cyc << ")^" << (j - i);
      else
        os << cyc;
      i = j;
    }
    return os.str();
  }

private:
  Integer ell_;
  unsigned free_rank_ = 0;
  std::vector<unsigned> torsion_;
};

inline void require_same_prime(const LModule &a, const LModule &b) {
  if (a.prime() != b.prime())
    throw MismatchedPrime(a.prime().str() + " vs " + b.prime().str());
}

/// Generators with integer relations, one relation per row.
struct Presentation {
  std::size_t num_generators = 0;
  IntMatrix relation_rows;
  Integer ell = 2;
};

inline LModule canonicalize(const Presentation &p) {
  require_prime(p.ell);
  IntMatrix rel = p.relation_rows;
  if (rel.cols() != p.num_generators) {
    if (rel.rows() == 0)
      rel = IntMatrix(0, p.num_generators);
    else
      throw InternalError("relation row length differs from generator count");
  }
  SmithForm s = smith_normal_form(rel, p.ell);
  std::vector<unsigned> tors;
  for (const Integer &d : s.invariant_factors()) {
    unsigned v = valuation(d, p.ell);
    if (v) tors.push_back(v);
  }
  return {p.ell, static_cast<unsigned>(p.num_generators - s.rank), tors};
}

/// Canonical module with an explicit basis: position[i] is the canonical
/// generator index of input component i.
struct BasedModule {
  LModule module;
  std::vector<std::size_t> position;
};

/// Canonical form of a list of cyclic components given by exponent (0 = free).
inline BasedModule arrange_components(const Integer &ell,
                                      const std::vector<unsigned> &exps) {
  std::vector<std::size_t> order(exps.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if ((exps[a] == 0) != (exps[b] == 0)) return exps[a] == 0;
    return exps[a] > exps[b];
  });
  unsigned fr = 0;
  std::vector<unsigned> tors;
  std::vector<std::size_t> pos(exps.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    pos[order[k]] = k;
    if (exps[order[k]] == 0)
      ++fr;
    else
      tors.push_back(exps[order[k]]);
  }
  return {LModule(ell, fr, tors), pos};
}

inline std::vector<unsigned> component_exponents(const LModule &m) {
  std::vector<unsigned> e(m.ngens(), 0);
  for (std::size_t i = m.free_rank(); i < m.ngens(); ++i) e[i] = *m.exponent(i);
  return e;
}

/// Direct sum with the position of each summand's generators.
inline BasedModule direct_sum_based(const std::vector<LModule> &parts) {
  if (parts.empty()) throw InternalError("empty direct sum");
  std::vector<unsigned> exps;
  for (const auto &p : parts) {
    require_same_prime(p, parts.front());
    auto e = component_exponents(p);
    exps.insert(exps.end(), e.begin(), e.end());
  }
  return arrange_components(parts.front().prime(), exps);
}

inline LModule direct_sum(const LModule &a, const LModule &b) {
  return direct_sum_based({a, b}).module;
}

/// Tensor product; position indexed by i * b.ngens() + j.
inline BasedModule tensor_based(const LModule &a, const LModule &b) {
  require_same_prime(a, b);
  std::vector<unsigned> exps;
  exps.reserve(a.ngens() * b.ngens());
  for (std::size_t i = 0; i < a.ngens(); ++i)
    for (std::size_t j = 0; j < b.ngens(); ++j) {
      auto ea = a.exponent(i), eb = b.exponent(j);
      if (!ea && !eb)
        exps.push_back(0);
      else if (!ea)
        exps.push_back(*eb);
      else if (!eb)
        exps.push_back(*ea);
      else
        exps.push_back(std::min(*ea, *eb));
    }
  return arrange_components(a.prime(), exps);
}

inline LModule tensor(const LModule &a, const LModule &b) {
  return tensor_based(a, b).module;
}

/// Tor_1 over Z_ell in closed form.
inline LModule tor1(const LModule &a, const LModule &b) {
  require_same_prime(a, b);
  std::vector<unsigned> tors;
  for (unsigned x : a.torsion_exponents())
    for (unsigned y : b.torsion_exponents()) tors.push_back(std::min(x, y));
  return {a.prime(), 0, tors};
}

inline LModule tensor_power(const LModule &a, unsigned n) {
  LModule r = LModule::free(a.prime(), 1);
  for (unsigned i = 0; i < n; ++i) r = tensor(r, a);
  return r;
}

/// ell^s-torsion of a finitely generated module's torsion part together
/// with the truncation M / ell^s.
inline LModule reduce_mod_power(const LModule &m, unsigned s) {
  std::vector<unsigned> tors(m.free_rank(), s);
  for (unsigned e : m.torsion_exponents()) tors.push_back(std::min(e, s));
  if (s == 0) return LModule::zero(m.prime());
  return {m.prime(), 0, tors};
}

} // namespace devissage
