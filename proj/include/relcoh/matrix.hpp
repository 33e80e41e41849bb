#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "relcoh/integer.hpp"

namespace relcoh {

using IntVector = std::vector<Integer>;

struct SparseEntry {
  std::uint32_t col;
  Integer value;
};
using SparseRow = std::vector<SparseEntry>;

struct Triplet {
  std::size_t row;
  std::size_t col;
  Integer value;
};

/// Integer matrix with dense or sparse row storage.
///
/// The storage is picked from the density of the input (sparse when at most
/// one entry in ten is nonzero) and is invisible to callers: entry access,
/// products and equality behave identically for both.
class ExactMatrix {
 public:
  enum class Storage { dense, sparse };

  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), storage_(Storage::sparse), sparse_(rows) {}

  static ExactMatrix from_rows(const std::vector<IntVector>& rows) {
    std::size_t c = rows.empty() ? 0 : rows.front().size();
    for (const auto& r : rows) {
      if (r.size() != c) throw std::invalid_argument("ragged matrix rows");
    }
    return from_rows(rows.size(), c, rows);
  }

  /// As above, but keeps the column count when there are no rows.
  static ExactMatrix from_rows(std::size_t nrows, std::size_t ncols, const std::vector<IntVector>& rows) {
    if (rows.size() != nrows) throw std::invalid_argument("row count mismatch");
    ExactMatrix m;
    m.rows_ = nrows;
    m.cols_ = ncols;
    m.storage_ = Storage::dense;
    m.dense_.reserve(nrows * ncols);
    for (const auto& r : rows) {
      if (r.size() != ncols) throw std::invalid_argument("ragged matrix rows");
      m.dense_.insert(m.dense_.end(), r.begin(), r.end());
    }
    m.choose_storage();
    return m;
  }

  /// Duplicate coordinates are summed; zeros are dropped.
  static ExactMatrix from_triplets(std::size_t nrows, std::size_t ncols, std::vector<Triplet> entries) {
    ExactMatrix m(nrows, ncols);
    std::sort(entries.begin(), entries.end(),
              [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    for (auto& t : entries) {
      if (t.row >= nrows || t.col >= ncols) throw std::out_of_range("triplet outside matrix");
      auto& row = m.sparse_[t.row];
      if (!row.empty() && row.back().col == t.col) {
        row.back().value += t.value;
      } else {
        row.push_back({static_cast<std::uint32_t>(t.col), std::move(t.value)});
      }
    }
    for (auto& row : m.sparse_) std::erase_if(row, [](const SparseEntry& e) { return e.value.is_zero(); });
    m.choose_storage();
    return m;
  }

  /// Takes ownership of prepared rows (sorted by column, no zeros).
  static ExactMatrix from_sparse_rows(std::size_t ncols, std::vector<SparseRow> rows) {
    ExactMatrix m;
    m.rows_ = rows.size();
    m.cols_ = ncols;
    m.storage_ = Storage::sparse;
    m.sparse_ = std::move(rows);
    for (const auto& row : m.sparse_) {
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (row[k].col >= ncols || row[k].value.is_zero() || (k > 0 && row[k - 1].col >= row[k].col))
          throw std::invalid_argument("malformed sparse row");
      }
    }
    return m;
  }

  static ExactMatrix identity(std::size_t n) { return diagonal(n, n, IntVector(n, Integer(1))); }

  static ExactMatrix diagonal(std::size_t nrows, std::size_t ncols, const IntVector& diag) {
    if (diag.size() > std::min(nrows, ncols)) throw std::invalid_argument("diagonal too long");
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < diag.size(); ++i) t.push_back({i, i, diag[i]});
    return from_triplets(nrows, ncols, std::move(t));
  }

  static ExactMatrix column(const IntVector& v) {
    std::vector<IntVector> rows;
    for (const auto& x : v) rows.push_back({x});
    return from_rows(v.size(), 1, rows);
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Storage storage() const noexcept { return storage_; }
  bool is_sparse() const noexcept { return storage_ == Storage::sparse; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    if (is_sparse()) {
      for (const auto& r : sparse_) n += r.size();
    } else {
      for (const auto& x : dense_) n += !x.is_zero();
    }
    return n;
  }

  Integer at(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw std::out_of_range("matrix index out of range");
    if (!is_sparse()) return dense_[i * cols_ + j];
    const auto& row = sparse_[i];
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const SparseEntry& e, std::size_t c) { return e.col < c; });
    return (it != row.end() && it->col == j) ? it->value : Integer(0);
  }

  template <class F>
  void for_each_in_row(std::size_t i, F&& f) const {
    if (is_sparse()) {
      for (const auto& e : sparse_[i]) f(static_cast<std::size_t>(e.col), e.value);
    } else {
      for (std::size_t j = 0; j < cols_; ++j) {
        const auto& x = dense_[i * cols_ + j];
        if (!x.is_zero()) f(j, x);
      }
    }
  }

  SparseRow sparse_row(std::size_t i) const {
    if (is_sparse()) return sparse_[i];
    SparseRow r;
    for_each_in_row(i, [&](std::size_t j, const Integer& x) { r.push_back({static_cast<std::uint32_t>(j), x}); });
    return r;
  }

  std::vector<IntVector> to_rows() const {
    std::vector<IntVector> out(rows_, IntVector(cols_));
    for (std::size_t i = 0; i < rows_; ++i) for_each_in_row(i, [&](std::size_t j, const Integer& x) { out[i][j] = x; });
    return out;
  }

  ExactMatrix with_storage(Storage s) const {
    ExactMatrix m = *this;
    m.convert(s);
    return m;
  }

  ExactMatrix transpose() const {
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < rows_; ++i)
      for_each_in_row(i, [&](std::size_t j, const Integer& x) { t.push_back({j, i, x}); });
    return from_triplets(cols_, rows_, std::move(t));
  }

  IntVector operator*(const IntVector& v) const {
    if (v.size() != cols_) throw std::invalid_argument("vector length mismatch");
    IntVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for_each_in_row(i, [&](std::size_t j, const Integer& x) {
        if (!v[j].is_zero()) out[i] += x * v[j];
      });
    return out;
  }

  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
    std::vector<SparseRow> brows(b.rows_);
    for (std::size_t k = 0; k < b.rows_; ++k) brows[k] = b.sparse_row(k);
    std::vector<Triplet> t;
    IntVector acc(b.cols_);
    std::vector<std::size_t> touched;
    std::vector<char> mark(b.cols_, 0);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      a.for_each_in_row(i, [&](std::size_t k, const Integer& x) {
        for (const auto& e : brows[k]) {
          if (!mark[e.col]) {
            mark[e.col] = 1;
            touched.push_back(e.col);
          }
          acc[e.col] += x * e.value;
        }
      });
      std::sort(touched.begin(), touched.end());
      for (auto j : touched) {
        if (!acc[j].is_zero()) t.push_back({i, j, acc[j]});
        acc[j] = Integer(0);
        mark[j] = 0;
      }
      touched.clear();
    }
    return from_triplets(a.rows_, b.cols_, std::move(t));
  }

  friend ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum shape mismatch");
    std::vector<Triplet> t;
    for (const auto* m : {&a, &b})
      for (std::size_t i = 0; i < m->rows_; ++i)
        m->for_each_in_row(i, [&](std::size_t j, const Integer& x) { t.push_back({i, j, x}); });
    return from_triplets(a.rows_, a.cols_, std::move(t));
  }

  ExactMatrix scaled(const Integer& s) const {
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < rows_; ++i)
      for_each_in_row(i, [&](std::size_t j, const Integer& x) { t.push_back({i, j, x * s}); });
    return from_triplets(rows_, cols_, std::move(t));
  }

  bool is_zero() const { return nonzeros() == 0; }

  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t i = 0; i < a.rows_; ++i) {
      if (a.sparse_row(i).size() != b.sparse_row(i).size()) return false;
      bool same = true;
      a.for_each_in_row(i, [&](std::size_t j, const Integer& x) { same = same && b.at(i, j) == x; });
      if (!same) return false;
    }
    return true;
  }

 private:
  void choose_storage() {
    std::size_t cells = rows_ * cols_;
    convert(cells > 0 && nonzeros() * 10 <= cells ? Storage::sparse : Storage::dense);
  }

  void convert(Storage s) {
    if (s == storage_) return;
    if (s == Storage::sparse) {
      std::vector<SparseRow> rows(rows_);
      for (std::size_t i = 0; i < rows_; ++i) rows[i] = sparse_row(i);
      sparse_ = std::move(rows);
      dense_.clear();
      dense_.shrink_to_fit();
    } else {
      dense_.assign(rows_ * cols_, Integer(0));
      for (std::size_t i = 0; i < rows_; ++i)
        for (auto& e : sparse_[i]) dense_[i * cols_ + e.col] = std::move(e.value);
      sparse_.clear();
      sparse_.shrink_to_fit();
    }
    storage_ = s;
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Storage storage_ = Storage::sparse;
  std::vector<Integer> dense_;
  std::vector<SparseRow> sparse_;
};

/// Fraction-free (Bareiss) determinant of a square matrix.
inline Integer determinant(const ExactMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  auto a = m.to_rows();
  std::size_t n = a.size();
  Integer sign(1), prev(1);
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k].is_zero()) {
      std::size_t p = k + 1;
      while (p < n && a[p][k].is_zero()) ++p;
      if (p == n) return Integer(0);
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = div_exact(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev);
      }
    }
    prev = a[k][k];
  }
  return n == 0 ? Integer(1) : sign * a[n - 1][n - 1];
}

}  // namespace relcoh
