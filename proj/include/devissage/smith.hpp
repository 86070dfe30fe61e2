#pragma once

#include <optional>
#include <vector>

#include "devissage/integer.hpp"
#include "devissage/matrix.hpp"

namespace devissage {

/// U * A * V = D with U, V unimodular and d_1 | d_2 | ... on the diagonal.
struct SmithForm {
  IntMatrix U, Uinv, D, V;
  std::size_t rank = 0;

  [[nodiscard]] std::vector<Integer> invariant_factors() const {
    std::vector<Integer> d;
    for (std::size_t i = 0; i < rank; ++i) d.push_back(D(i, i));
    return d;
  }
};

namespace detail {

// Left-multiply rows (a, b) of M by [[s, t], [u, v]].
inline void combine_rows(IntMatrix &m, std::size_t a, std::size_t b,
                         const Integer &s, const Integer &t, const Integer &u,
                         const Integer &v) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Integer x = m(a, j), y = m(b, j);
    m(a, j) = s * x + t * y;
    m(b, j) = u * x + v * y;
  }
}

// Right-multiply columns (a, b) of M by [[s, u], [t, v]].
inline void combine_cols(IntMatrix &m, std::size_t a, std::size_t b,
                         const Integer &s, const Integer &t, const Integer &u,
                         const Integer &v) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer x = m(i, a), y = m(i, b);
    m(i, a) = s * x + t * y;
    m(i, b) = u * x + v * y;
  }
}

} // namespace detail

/// Smith normal form over the integers.  With pivot_prime > 1 the pivot of
/// each stage is the entry of smallest valuation at that prime; otherwise the
/// entry of smallest absolute value.  Ties go to the first entry in row-major
/// order.
inline SmithForm smith_normal_form(const IntMatrix &a,
                                   const Integer &pivot_prime = 0) {
  const std::size_t m = a.rows(), n = a.cols();
  SmithForm r{IntMatrix::identity(m), IntMatrix::identity(m), a,
              IntMatrix::identity(n), 0};
  IntMatrix &D = r.D;
  const bool local = pivot_prime > 1;

  auto better = [&](const Integer &x, const Integer &best) {
    if (local) {
      unsigned vx = valuation(x, pivot_prime), vb = valuation(best, pivot_prime);
      if (vx != vb) return vx < vb;
      return false;
    }
    return abs_value(x) < abs_value(best);
  };

  // Row op on D mirrored into U and Uinv.
  auto row_op = [&](std::size_t p, std::size_t i, const Integer &s,
                    const Integer &t, const Integer &u, const Integer &v) {
    detail::combine_rows(D, p, i, s, t, u, v);
    detail::combine_rows(r.U, p, i, s, t, u, v);
    // inverse of [[s,t],[u,v]] (det 1) is [[v,-t],[-u,s]]; Uinv <- Uinv * E^-1
    detail::combine_cols(r.Uinv, p, i, v, -u, -t, s);
  };
  auto col_op = [&](std::size_t p, std::size_t j, const Integer &s,
                    const Integer &t, const Integer &u, const Integer &v) {
    detail::combine_cols(D, p, j, s, t, u, v);
    detail::combine_cols(r.V, p, j, s, t, u, v);
  };

  const std::size_t lim = std::min(m, n);
  for (std::size_t k = 0; k < lim; ++k) {
    std::optional<std::pair<std::size_t, std::size_t>> piv;
    for (std::size_t i = k; i < m; ++i)
      for (std::size_t j = k; j < n; ++j) {
        if (D(i, j) == 0) continue;
        if (!piv || better(D(i, j), D(piv->first, piv->second))) piv = {{i, j}};
      }
    if (!piv) break;
    D.swap_rows(k, piv->first);
    r.U.swap_rows(k, piv->first);
    r.Uinv.swap_cols(k, piv->first);
    D.swap_cols(k, piv->second);
    r.V.swap_cols(k, piv->second);

    for (;;) {
      bool dirty = false;
      for (std::size_t i = k + 1; i < m; ++i) {
        if (D(i, k) == 0) continue;
        const Integer p = D(k, k), x = D(i, k);
        if (x % p == 0) {
          row_op(k, i, 1, 0, -(x / p), 1);
        } else {
          auto [g, s, t] = ext_gcd(p, x);
          row_op(k, i, s, t, -(x / g), p / g);
        }
      }
      for (std::size_t j = k + 1; j < n; ++j) {
        if (D(k, j) == 0) continue;
        const Integer p = D(k, k), x = D(k, j);
        if (x % p == 0) {
          col_op(k, j, 1, 0, -(x / p), 1);
        } else {
          auto [g, s, t] = ext_gcd(p, x);
          col_op(k, j, s, t, -(x / g), p / g);
          dirty = true;
        }
      }
      if (dirty) continue;
      bool col_clear = true;
      for (std::size_t i = k + 1; i < m; ++i)
        if (D(i, k) != 0) col_clear = false;
      if (!col_clear) continue;
      // Divisibility of the remaining block by the pivot.
      std::optional<std::size_t> bad;
      for (std::size_t i = k + 1; i < m && !bad; ++i)
        for (std::size_t j = k + 1; j < n; ++j)
          if (D(i, j) % D(k, k) != 0) {
            bad = i;
            break;
          }
      if (!bad) break;
      row_op(k, *bad, 1, 1, 0, 1);
    }
    if (D(k, k) < 0) {
      for (std::size_t j = 0; j < n; ++j) D(k, j) = -D(k, j);
      for (std::size_t j = 0; j < m; ++j) r.U(k, j) = -r.U(k, j);
      for (std::size_t i = 0; i < m; ++i) r.Uinv(i, k) = -r.Uinv(i, k);
    }
    r.rank = k + 1;
  }
  return r;
}

inline std::size_t rank(const IntMatrix &a) { return smith_normal_form(a).rank; }

/// Z-basis of the integer kernel {x : A x = 0} as columns.
inline IntMatrix integer_kernel(const IntMatrix &a) {
  SmithForm s = smith_normal_form(a);
  return s.V.block(0, a.cols(), s.rank, a.cols());
}

/// Some integer x with A x = b, if one exists.
inline std::optional<std::vector<Integer>> solve_integer(const IntMatrix &a,
                                                         const std::vector<Integer> &b) {
  SmithForm s = smith_normal_form(a);
  std::vector<Integer> y = s.U.apply(b);
  std::vector<Integer> z(a.cols(), 0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (i < s.rank) {
      if (y[i] % s.D(i, i) != 0) return std::nullopt;
      z[i] = y[i] / s.D(i, i);
    } else if (y[i] != 0) {
      return std::nullopt;
    }
  }
  return s.V.apply(z);
}

} // namespace devissage
