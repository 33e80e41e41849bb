#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "relcoh/fg_group.hpp"
#include "relcoh/integer.hpp"
#include "relcoh/matrix.hpp"

namespace relcoh {

/// u * m * v == d with u, v unimodular and d diagonal, d[i] >= 0, d[i] | d[i+1].
struct SmithForm {
  ExactMatrix u;
  ExactMatrix d;
  ExactMatrix v;
  std::size_t rank = 0;

  IntVector diagonal() const {
    IntVector out;
    for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i) out.push_back(d.at(i, i));
    return out;
  }
};

namespace detail {

using DenseRows = std::vector<IntVector>;

inline void row_axpy(DenseRows& a, std::size_t dst, std::size_t src, const Integer& f) {
  if (f.is_zero()) return;
  for (std::size_t j = 0; j < a[dst].size(); ++j)
    if (!a[src][j].is_zero()) a[dst][j].sub_mul(f, a[src][j]);
}

inline void col_axpy(DenseRows& a, std::size_t dst, std::size_t src, const Integer& f) {
  if (f.is_zero()) return;
  for (auto& row : a)
    if (!row[src].is_zero()) row[dst].sub_mul(f, row[src]);
}

inline void swap_cols(DenseRows& a, std::size_t i, std::size_t j) {
  for (auto& row : a) std::swap(row[i], row[j]);
}

/// [s t; -b/g a/g]: unimodular, sends (a, b) to (g, 0).
struct GcdCoefficients {
  Integer s, t, a_g, b_g;
};

inline GcdCoefficients gcd_coefficients(const Integer& a, const Integer& b) {
  auto e = ext_gcd(a, b);
  return {e.s, e.t, div_exact(a, e.g), div_exact(b, e.g)};
}

inline void row_mix(DenseRows& a, std::size_t p, std::size_t q, const GcdCoefficients& c) {
  for (std::size_t j = 0; j < a[p].size(); ++j) {
    if (a[p][j].is_zero() && a[q][j].is_zero()) continue;
    Integer x = c.s * a[p][j] + c.t * a[q][j];
    Integer y = c.a_g * a[q][j] - c.b_g * a[p][j];
    a[p][j] = std::move(x);
    a[q][j] = std::move(y);
  }
}

inline void col_mix(DenseRows& a, std::size_t p, std::size_t q, const GcdCoefficients& c) {
  for (auto& row : a) {
    if (row[p].is_zero() && row[q].is_zero()) continue;
    Integer x = c.s * row[p] + c.t * row[q];
    Integer y = c.a_g * row[q] - c.b_g * row[p];
    row[p] = std::move(x);
    row[q] = std::move(y);
  }
}

/// Dense Smith reduction; u/v accumulate the transforms when non-null.
inline std::size_t smith_reduce(DenseRows& d, DenseRows* u, DenseRows* v, std::size_t nrows, std::size_t ncols) {
  std::size_t t = 0;
  for (; t < std::min(nrows, ncols); ++t) {
    // Pivot: smallest nonzero in the trailing block.
    std::size_t pi = nrows, pj = ncols;
    for (std::size_t i = t; i < nrows; ++i)
      for (std::size_t j = t; j < ncols; ++j)
        if (!d[i][j].is_zero() && (pi == nrows || abs(d[i][j]) < abs(d[pi][pj]))) {
          pi = i;
          pj = j;
        }
    if (pi == nrows) break;
    std::swap(d[t], d[pi]);
    if (u) std::swap((*u)[t], (*u)[pi]);
    swap_cols(d, t, pj);
    if (v) swap_cols(*v, t, pj);

    for (;;) {
      bool changed = false;
      for (std::size_t i = t + 1; i < nrows; ++i) {
        if (d[i][t].is_zero()) continue;
        if ((d[i][t] % d[t][t]).is_zero()) {
          Integer q = div_exact(d[i][t], d[t][t]);
          row_axpy(d, i, t, q);
          if (u) row_axpy(*u, i, t, q);
        } else {
          auto c = gcd_coefficients(d[t][t], d[i][t]);
          row_mix(d, t, i, c);
          if (u) row_mix(*u, t, i, c);
          changed = true;
        }
      }
      for (std::size_t j = t + 1; j < ncols; ++j) {
        if (d[t][j].is_zero()) continue;
        if ((d[t][j] % d[t][t]).is_zero()) {
          Integer q = div_exact(d[t][j], d[t][t]);
          col_axpy(d, j, t, q);
          if (v) col_axpy(*v, j, t, q);
        } else {
          auto c = gcd_coefficients(d[t][t], d[t][j]);
          col_mix(d, t, j, c);
          if (v) col_mix(*v, t, j, c);
          changed = true;
        }
      }
      if (changed) continue;
      // Divisibility: fold a row holding a non-multiple into the pivot row.
      std::size_t bad = nrows;
      for (std::size_t i = t + 1; i < nrows && bad == nrows; ++i)
        for (std::size_t j = t + 1; j < ncols; ++j)
          if (!(d[i][j] % d[t][t]).is_zero()) {
            bad = i;
            break;
          }
      if (bad == nrows) break;
      row_axpy(d, t, bad, Integer(-1));
      if (u) row_axpy(*u, t, bad, Integer(-1));
    }
    if (d[t][t].sign() < 0) {
      for (auto& x : d[t]) x = -x;
      if (u)
        for (auto& x : (*u)[t]) x = -x;
    }
  }
  return t;
}

inline DenseRows identity_rows(std::size_t n) {
  DenseRows r(n, IntVector(n));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = Integer(1);
  return r;
}

}  // namespace detail

/// Smith normal form with both transforms.
inline SmithForm snf(const ExactMatrix& m) {
  auto d = m.to_rows();
  auto u = detail::identity_rows(m.rows());
  auto v = detail::identity_rows(m.cols());
  std::size_t r = detail::smith_reduce(d, &u, &v, m.rows(), m.cols());
  SmithForm out;
  out.rank = r;
  out.u = ExactMatrix::from_rows(m.rows(), m.rows(), u);
  out.v = ExactMatrix::from_rows(m.cols(), m.cols(), v);
  out.d = ExactMatrix::from_rows(m.rows(), m.cols(), d);
  return out;
}

/// Nonzero Smith diagonal without transforms (dense path, small inputs).
inline IntVector smith_diagonal_dense(const ExactMatrix& m) {
  auto d = m.to_rows();
  std::size_t r = detail::smith_reduce(d, nullptr, nullptr, m.rows(), m.cols());
  IntVector out;
  for (std::size_t i = 0; i < r; ++i) out.push_back(d[i][i]);
  return out;
}

/// Row-style Hermite normal form of the lattice spanned by the rows of m:
/// echelon, positive pivots, entries above a pivot reduced into [0, pivot).
/// Zero rows are dropped, so equal lattices give equal results.
inline std::vector<IntVector> hermite_rows(std::vector<IntVector> a, std::size_t ncols) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < a.size(); ++c) {
    for (;;) {
      std::size_t p = a.size();
      for (std::size_t i = r; i < a.size(); ++i)
        if (!a[i][c].is_zero() && (p == a.size() || abs(a[i][c]) < abs(a[p][c]))) p = i;
      if (p == a.size()) break;
      std::swap(a[r], a[p]);
      bool clean = true;
      for (std::size_t i = r + 1; i < a.size(); ++i) {
        if (a[i][c].is_zero()) continue;
        detail::row_axpy(a, i, r, div_floor(a[i][c], a[r][c]));
        clean = clean && a[i][c].is_zero();
      }
      if (clean) break;
    }
    if (a[r][c].is_zero()) continue;
    if (a[r][c].sign() < 0)
      for (auto& x : a[r]) x = -x;
    for (std::size_t i = 0; i < r; ++i) detail::row_axpy(a, i, r, div_floor(a[i][c], a[r][c]));
    ++r;
  }
  a.resize(r);
  return a;
}

inline ExactMatrix hermite_form(const ExactMatrix& m) {
  auto h = hermite_rows(m.to_rows(), m.cols());
  return ExactMatrix::from_rows(h.size(), m.cols(), h);
}

/// Saturated lattice basis of {x : m x = 0}, canonicalized by Hermite form.
inline std::vector<IntVector> kernel_basis(const ExactMatrix& m) {
  SmithForm s = snf(m);
  std::vector<IntVector> basis;
  for (std::size_t j = s.rank; j < m.cols(); ++j) {
    IntVector col(m.cols());
    for (std::size_t i = 0; i < m.cols(); ++i) col[i] = s.v.at(i, j);
    basis.push_back(std::move(col));
  }
  return hermite_rows(std::move(basis), m.cols());
}

/// Structure of Z^rows / image(m).
inline FgAbGroup cokernel_structure(const ExactMatrix& m) {
  IntVector diag = smith_diagonal_dense(m);
  return FgAbGroup(diag, m.rows() - diag.size());
}

/// Some integer solution of m x = b, if one exists.
inline std::optional<IntVector> solve_integer(const ExactMatrix& m, const IntVector& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("right-hand side length mismatch");
  SmithForm s = snf(m);
  IntVector c = s.u * b;
  IntVector y(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i < s.rank) {
      Integer di = s.d.at(i, i);
      if (!(c[i] % di).is_zero()) return std::nullopt;
      y[i] = c[i] / di;
    } else if (!c[i].is_zero()) {
      return std::nullopt;
    }
  }
  return s.v * y;
}

inline std::size_t rank(const ExactMatrix& m) { return smith_diagonal_dense(m).size(); }

}  // namespace relcoh
