#pragma once

#include <algorithm>
#include <vector>

#include "devissage/errors.hpp"
#include "devissage/lmodule.hpp"
#include "devissage/matrix.hpp"
#include "devissage/smith.hpp"

namespace devissage {

inline constexpr unsigned kDefaultPrecision = 8;

/// Morphism of LModules given on canonical generators.
///
/// The matrix has one column per domain generator.  Rows belonging to
/// torsion generators of the codomain are kept reduced into [0, ell^e).
class LMap {
public:
  LMap() = default;
  LMap(LModule domain, LModule codomain, IntMatrix matrix,
       unsigned precision = kDefaultPrecision)
      : dom_(std::move(domain)), cod_(std::move(codomain)), mat_(std::move(matrix)),
        precision_(precision) {
    require_same_prime(dom_, cod_);
    if (mat_.rows() != cod_.ngens() || mat_.cols() != dom_.ngens())
      throw NotComposable("matrix is " + std::to_string(mat_.rows()) + "x" +
                          std::to_string(mat_.cols()) + ", expected " +
                          std::to_string(cod_.ngens()) + "x" +
                          std::to_string(dom_.ngens()));
    normalize();
    check_well_defined();
  }

  static LMap identity(const LModule &m) {
    return {m, m, IntMatrix::identity(m.ngens())};
  }
  static LMap zero(const LModule &dom, const LModule &cod) {
    return {dom, cod, IntMatrix(cod.ngens(), dom.ngens())};
  }
  static LMap scalar(const LModule &m, const Integer &c) {
    return {m, m, c * IntMatrix::identity(m.ngens())};
  }

  [[nodiscard]] const LModule &domain() const { return dom_; }
  [[nodiscard]] const LModule &codomain() const { return cod_; }
  [[nodiscard]] const IntMatrix &matrix() const { return mat_; }
  [[nodiscard]] unsigned precision() const { return precision_; }
  [[nodiscard]] const Integer &prime() const { return dom_.prime(); }

  [[nodiscard]] bool is_zero() const { return mat_.is_zero(); }

  /// Image of a coordinate vector, reduced in the codomain.
  [[nodiscard]] std::vector<Integer> apply(const std::vector<Integer> &x) const {
    return reduce(cod_, mat_.apply(x));
  }

  static std::vector<Integer> reduce(const LModule &m, std::vector<Integer> v) {
    for (std::size_t i = m.free_rank(); i < m.ngens(); ++i)
      v[i] = mod_floor(v[i], m.modulus(i));
    return v;
  }

  friend bool operator==(const LMap &a, const LMap &b) {
    return a.dom_ == b.dom_ && a.cod_ == b.cod_ && a.mat_ == b.mat_;
  }
  friend bool operator!=(const LMap &a, const LMap &b) { return !(a == b); }

  /// g * f is g after f.
  friend LMap operator*(const LMap &g, const LMap &f) {
    if (f.cod_ != g.dom_)
      throw NotComposable(f.cod_.str() + " is not " + g.dom_.str());
    return {f.dom_, g.cod_, g.mat_ * f.mat_, std::max(f.precision_, g.precision_)};
  }
  friend LMap operator+(const LMap &a, const LMap &b) {
    if (a.dom_ != b.dom_ || a.cod_ != b.cod_) throw NotComposable("sum of unlike maps");
    return {a.dom_, a.cod_, a.mat_ + b.mat_, std::max(a.precision_, b.precision_)};
  }
  friend LMap operator-(const LMap &a, const LMap &b) {
    if (a.dom_ != b.dom_ || a.cod_ != b.cod_) throw NotComposable("difference of unlike maps");
    return {a.dom_, a.cod_, a.mat_ - b.mat_, std::max(a.precision_, b.precision_)};
  }
  friend LMap operator*(const Integer &c, const LMap &f) {
    return {f.dom_, f.cod_, c * f.mat_, f.precision_};
  }

private:
  void normalize() {
    for (std::size_t i = cod_.free_rank(); i < cod_.ngens(); ++i) {
      const Integer m = cod_.modulus(i);
      for (std::size_t j = 0; j < mat_.cols(); ++j) mat_(i, j) = mod_floor(mat_(i, j), m);
    }
  }
  void check_well_defined() const {
    for (std::size_t j = dom_.free_rank(); j < dom_.ngens(); ++j) {
      const Integer order = dom_.modulus(j);
      for (std::size_t i = 0; i < cod_.ngens(); ++i) {
        if (mat_(i, j) == 0) continue;
        if (i < cod_.free_rank() || (order * mat_(i, j)) % cod_.modulus(i) != 0)
          throw NotWellDefined("generator " + std::to_string(j) + " of order " +
                               order.str() + " has image of larger order");
      }
    }
  }

  LModule dom_, cod_;
  IntMatrix mat_;
  unsigned precision_ = kDefaultPrecision;
};

/// The ell-local module L / R for lattices R within L within Z^a, with a
/// coordinate function from L to canonical coordinates.
class Subquotient {
public:
  Subquotient(const Integer &ell, const IntMatrix &lattice_gens,
              const IntMatrix &relations) {
    require_prime(ell);
    const std::size_t a = lattice_gens.rows();
    SmithForm s1 = smith_normal_form(lattice_gens, ell);
    k_ = s1.rank;
    u1_ = s1.U;
    d1_ = s1.invariant_factors();
    IntMatrix basis(a, k_);
    for (std::size_t j = 0; j < k_; ++j)
      for (std::size_t i = 0; i < a; ++i) basis(i, j) = s1.Uinv(i, j) * d1_[j];

    IntMatrix c(k_, relations.cols());
    for (std::size_t j = 0; j < relations.cols(); ++j) {
      auto z = lattice_coords(relations.column(j));
      if (!z) throw InternalError("relation lattice is not contained in the lattice");
      c.set_column(j, *z);
    }
    SmithForm s2 = smith_normal_form(c, ell);
    u2_ = s2.U;

    std::vector<unsigned> exps;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < k_; ++i) {
      if (i < s2.rank) {
        unsigned v = valuation(s2.D(i, i), ell);
        if (v == 0) continue;
        exps.push_back(v);
      } else {
        exps.push_back(0);
      }
      idx.push_back(i);
    }
    BasedModule bm = arrange_components(ell, exps);
    module_ = bm.module;
    comp_.assign(idx.size(), 0);
    for (std::size_t t = 0; t < idx.size(); ++t) comp_[bm.position[t]] = idx[t];

    IntMatrix g = basis * s2.Uinv;
    gens_ = IntMatrix(a, comp_.size());
    for (std::size_t t = 0; t < comp_.size(); ++t)
      for (std::size_t i = 0; i < a; ++i) gens_(i, t) = g(i, comp_[t]);
  }

  [[nodiscard]] const LModule &module() const { return module_; }
  /// Ambient representatives of the canonical generators, one per column.
  [[nodiscard]] const IntMatrix &generators() const { return gens_; }

  [[nodiscard]] bool contains(const std::vector<Integer> &x) const {
    return lattice_coords(x).has_value();
  }

  /// Canonical coordinates of an ambient vector lying in the lattice.
  [[nodiscard]] std::vector<Integer> coords(const std::vector<Integer> &x) const {
    auto z = lattice_coords(x);
    if (!z) throw NotLiftable("vector does not lie in the lattice");
    std::vector<Integer> w = u2_.apply(*z);
    std::vector<Integer> out(comp_.size());
    for (std::size_t t = 0; t < comp_.size(); ++t) out[t] = w[comp_[t]];
    return LMap::reduce(module_, out);
  }

  [[nodiscard]] IntMatrix coords_matrix(const IntMatrix &cols) const {
    IntMatrix m(comp_.size(), cols.cols());
    for (std::size_t j = 0; j < cols.cols(); ++j) m.set_column(j, coords(cols.column(j)));
    return m;
  }

private:
  [[nodiscard]] std::optional<std::vector<Integer>>
  lattice_coords(const std::vector<Integer> &x) const {
    std::vector<Integer> y = u1_.apply(x);
    std::vector<Integer> z(k_);
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (i < k_) {
        if (y[i] % d1_[i] != 0) return std::nullopt;
        z[i] = y[i] / d1_[i];
      } else if (y[i] != 0) {
        return std::nullopt;
      }
    }
    return z;
  }

  std::size_t k_ = 0;
  IntMatrix u1_, u2_, gens_;
  std::vector<Integer> d1_;
  std::vector<std::size_t> comp_;
  LModule module_;
};

struct KernelResult {
  LModule module;
  LMap inclusion;
};

struct CokernelResult {
  LModule module;
  LMap projection;
  /// Codomain representatives of the cokernel generators, one per column.
  IntMatrix lifts;
};

struct ImageResult {
  LModule module;
  LMap inclusion;
  LMap corestriction;
};

inline KernelResult kernel(const LMap &f) {
  const LModule &M = f.domain(), &N = f.codomain();
  const std::size_t a = M.ngens();
  IntMatrix w = hstack(f.matrix(), N.relations());
  IntMatrix ker = integer_kernel(w);
  IntMatrix lgens = ker.block(0, a, 0, ker.cols());
  Subquotient sq(f.prime(), lgens, M.relations());
  return {sq.module(), LMap(sq.module(), M, sq.generators(), f.precision())};
}

inline CokernelResult cokernel(const LMap &f) {
  const LModule &N = f.codomain();
  const std::size_t b = N.ngens();
  Subquotient sq(f.prime(), IntMatrix::identity(b), hstack(f.matrix(), N.relations()));
  LMap proj(N, sq.module(), sq.coords_matrix(IntMatrix::identity(b)), f.precision());
  return {sq.module(), proj, sq.generators()};
}

inline ImageResult image(const LMap &f) {
  const LModule &N = f.codomain();
  Subquotient sq(f.prime(), hstack(f.matrix(), N.relations()), N.relations());
  LMap inc(sq.module(), N, sq.generators(), f.precision());
  LMap cor(f.domain(), sq.module(), sq.coords_matrix(f.matrix()), f.precision());
  return {sq.module(), inc, cor};
}

inline bool is_injective(const LMap &f) { return kernel(f).module.is_zero(); }
inline bool is_surjective(const LMap &f) { return cokernel(f).module.is_zero(); }
inline bool is_isomorphism(const LMap &f) { return is_injective(f) && is_surjective(f); }

/// The unique g with inc * g = h, for an injective inc.
inline LMap lift_through(const LMap &h, const LMap &inc) {
  if (h.codomain() != inc.codomain())
    throw NotComposable("lift target codomains differ");
  const LModule &B = inc.codomain(), &K = inc.domain();
  const Integer &ell = h.prime();
  const std::size_t k = K.ngens();
  IntMatrix w = hstack(inc.matrix(), B.relations());
  SmithForm s = smith_normal_form(w, ell);
  IntMatrix out(k, h.domain().ngens());
  for (std::size_t col = 0; col < h.domain().ngens(); ++col) {
    std::vector<Integer> y = s.U.apply(h.matrix().column(col));
    Integer unit = 1;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (i >= s.rank) {
        if (y[i] != 0) throw NotLiftable("column " + std::to_string(col) + " is outside the image");
        continue;
      }
      const Integer &d = s.D(i, i);
      if (y[i] == 0) continue;
      Integer need = d / gcd(d, y[i]);
      if (need % ell == 0)
        throw NotLiftable("column " + std::to_string(col) + " is outside the image");
      unit *= need / gcd(unit, need);
    }
    std::vector<Integer> z(w.cols(), 0);
    for (std::size_t i = 0; i < s.rank; ++i) z[i] = unit * y[i] / s.D(i, i);
    std::vector<Integer> sol = s.V.apply(z);
    for (std::size_t i = 0; i < k; ++i) {
      if (unit == 1) {
        out(i, col) = sol[i];
      } else if (auto e = K.exponent(i)) {
        Integer m = ipow(ell, *e);
        out(i, col) = mod_floor(sol[i] * inverse_mod(unit, m), m);
      } else {
        if (sol[i] % unit != 0)
          throw NotLiftable("lift needs a denominator prime to the prime");
        out(i, col) = sol[i] / unit;
      }
    }
  }
  return {h.domain(), K, out, std::max(h.precision(), inc.precision())};
}

/// ker(g) / im(f) for a complex A -f-> B -g-> C.
inline LModule homology(const LMap &f, const LMap &g) {
  if (f.codomain() != g.domain()) throw NotComposable("homology of non-composable maps");
  if (!(g * f).is_zero()) throw NotComposable("composite is not zero");
  KernelResult kg = kernel(g);
  return cokernel(lift_through(f, kg.inclusion)).module;
}

/// Pontryagin dual of a map between finite modules, in canonical coordinates.
inline LMap dual_finite_map(const LMap &f) {
  const LModule &M = f.domain(), &N = f.codomain();
  if (!M.is_finite() || !N.is_finite())
    throw UnsupportedCarrier("dual of a map with non-finite ends");
  const Integer &ell = f.prime();
  IntMatrix d(M.ngens(), N.ngens());
  for (std::size_t i = 0; i < M.ngens(); ++i)
    for (std::size_t j = 0; j < N.ngens(); ++j) {
      int shift = static_cast<int>(*M.exponent(i)) - static_cast<int>(*N.exponent(j));
      const Integer &x = f.matrix()(j, i);
      if (shift >= 0)
        d(i, j) = x * ipow(ell, static_cast<unsigned>(shift));
      else
        d(i, j) = x / ipow(ell, static_cast<unsigned>(-shift));
    }
  return {N, M, d, f.precision()};
}

/// Transposed matrix as a map between the same modules in reverse.  This is
/// the dual for maps between free modules.
inline LMap transpose_map(const LMap &f) {
  return {f.codomain(), f.domain(), f.matrix().transpose(), f.precision()};
}

/// f tensor g in canonical coordinates.
inline LMap tensor_map(const LMap &f, const LMap &g) {
  BasedModule src = tensor_based(f.domain(), g.domain());
  BasedModule dst = tensor_based(f.codomain(), g.codomain());
  IntMatrix k = kron(f.matrix(), g.matrix());
  IntMatrix m(dst.module.ngens(), src.module.ngens());
  for (std::size_t r = 0; r < k.rows(); ++r)
    for (std::size_t c = 0; c < k.cols(); ++c) m(dst.position[r], src.position[c]) = k(r, c);
  return {src.module, dst.module, m, std::max(f.precision(), g.precision())};
}

/// Block-diagonal sum of maps in canonical coordinates.
inline LMap direct_sum_map(const std::vector<LMap> &maps) {
  std::vector<LModule> ds, cs;
  for (const auto &f : maps) {
    ds.push_back(f.domain());
    cs.push_back(f.codomain());
  }
  BasedModule src = direct_sum_based(ds), dst = direct_sum_based(cs);
  IntMatrix m(dst.module.ngens(), src.module.ngens());
  std::size_t r0 = 0, c0 = 0;
  for (const auto &f : maps) {
    for (std::size_t r = 0; r < f.matrix().rows(); ++r)
      for (std::size_t c = 0; c < f.matrix().cols(); ++c)
        m(dst.position[r0 + r], src.position[c0 + c]) = f.matrix()(r, c);
    r0 += f.matrix().rows();
    c0 += f.matrix().cols();
  }
  return {src.module, dst.module, m};
}

/// Module given by an arbitrary list of cyclic components (exponent 0 = free)
/// in the given order, with the change of coordinates to canonical order.
struct OrderedModule {
  LModule module;
  std::vector<std::size_t> position;
  std::vector<unsigned> exps;

  explicit OrderedModule(const Integer &ell, std::vector<unsigned> e)
      : exps(std::move(e)) {
    BasedModule bm = arrange_components(ell, exps);
    module = bm.module;
    position = bm.position;
  }

  /// Permutes a matrix whose rows are in component order.
  [[nodiscard]] IntMatrix rows_to_canonical(const IntMatrix &m) const {
    IntMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) out(position[i], j) = m(i, j);
    return out;
  }
  [[nodiscard]] IntMatrix cols_to_canonical(const IntMatrix &m) const {
    IntMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) out(i, position[j]) = m(i, j);
    return out;
  }
  [[nodiscard]] std::vector<Integer> to_canonical(const std::vector<Integer> &v) const {
    std::vector<Integer> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[position[i]] = v[i];
    return out;
  }
  [[nodiscard]] std::vector<Integer> from_canonical(const std::vector<Integer> &v) const {
    std::vector<Integer> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[position[i]];
    return out;
  }
  [[nodiscard]] std::size_t size() const { return exps.size(); }
};

/// Map between ordered modules given by a matrix in component order.
inline LMap ordered_map(const OrderedModule &dom, const OrderedModule &cod,
                        const IntMatrix &m) {
  return {dom.module, cod.module, dom.cols_to_canonical(cod.rows_to_canonical(m))};
}

} // namespace devissage
