#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "relcoh/fg_group.hpp"
#include "relcoh/integer.hpp"
#include "relcoh/matrix.hpp"
#include "relcoh/smith.hpp"

namespace relcoh {

/// Exact integers. Only +-1 counts as a unit; other pivots go through the
/// Euclidean phase.
struct IntegerRing {
  using Value = Integer;
  static constexpr bool is_field = false;
  Value from(const Integer& x) const { return x; }
  bool is_zero(const Value& x) const { return x.is_zero(); }
  bool is_unit(const Value& x) const { return x.is_unit(); }
  /// Multiplier f with a - f * pivot == 0 for a unit pivot.
  Value cancel_factor(const Value& a, const Value& pivot) const { return pivot.sign() > 0 ? a : -a; }
  void sub_mul(Value& x, const Value& f, const Value& y) const { x.sub_mul(f, y); }
  Value neg_mul(const Value& f, const Value& y) const { return -(f * y); }
};

namespace detail {

/// Sparse Gaussian elimination that consumes unit pivots first, choosing the
/// sparsest column and within it the shortest row, so fill-in stays low.
/// Non-unit leftovers (integers only) are finished by Euclidean row/column
/// reduction. Each recorded pivot is isolated in its row and column, so the
/// pivot multiset determines the cokernel.
template <class Ring>
class SparseEliminator {
 public:
  using Value = typename Ring::Value;
  struct Entry {
    std::uint32_t col;
    Value v;
  };
  using Row = std::vector<Entry>;

  SparseEliminator(Ring ring, const ExactMatrix& m) : ring_(ring), ncols_(m.cols()) {
    rows_.resize(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
      m.for_each_in_row(i, [&](std::size_t j, const Integer& x) {
        Value v = ring_.from(x);
        if (!ring_.is_zero(v)) rows_[i].push_back({static_cast<std::uint32_t>(j), std::move(v)});
      });
    }
    init();
  }

  std::size_t rank() const { return rank_; }
  const std::vector<Integer>& nonunit_pivots() const { return nonunit_; }

  /// Eliminates unit pivots until none remain or `stop_rank` is reached.
  void eliminate_units(std::size_t stop_rank) {
    std::priority_queue<Key, std::vector<Key>, std::greater<>> heap;
    for (std::size_t c = 0; c < ncols_; ++c)
      if (!col_rows_[c].empty()) heap.push({col_rows_[c].size(), static_cast<std::uint32_t>(c)});
    while (!heap.empty() && rank_ < stop_rank) {
      auto [key, c] = heap.top();
      heap.pop();
      if (col_state_[c] != live) continue;
      std::size_t count = refresh_column(c);
      if (count == 0) {
        col_state_[c] = done;
        continue;
      }
      if (count > key) {
        heap.push({count, c});
        continue;
      }
      std::size_t best = npos;
      for (auto r : col_rows_[c]) {
        const Entry* e = find(r, c);
        if (ring_.is_unit(e->v) && (best == npos || rows_[r].size() < rows_[best].size())) best = r;
      }
      if (best == npos) {
        col_state_[c] = deferred;
        continue;
      }
      pivot_on(best, c);
      col_state_[c] = done;
      ++rank_;
      for (const auto& e : rows_[best])
        if (col_state_[e.col] == live) heap.push({col_rows_[e.col].size(), e.col});
      release(best);
    }
  }

  /// Euclidean phase for the non-unit remainder (integer ring only).
  void eliminate_general() {
    for (;;) {
      std::uint32_t c = 0;
      std::size_t best = 0;
      for (std::size_t j = 0; j < ncols_; ++j) {
        if (col_state_[j] == done) continue;
        std::size_t n = refresh_column(static_cast<std::uint32_t>(j));
        if (n == 0) {
          col_state_[j] = done;
        } else if (best == 0 || n < best) {
          best = n;
          c = static_cast<std::uint32_t>(j);
        }
      }
      if (best == 0) return;
      reduce_column_general(c);
    }
  }

 private:
  using Key = std::pair<std::size_t, std::uint32_t>;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  enum State : unsigned char { live, deferred, done };

  void init() {
    col_rows_.assign(ncols_, {});
    col_state_.assign(ncols_, live);
    active_.assign(rows_.size(), 1);
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (const auto& e : rows_[i]) col_rows_[e.col].push_back(static_cast<std::uint32_t>(i));
  }

  const Entry* find(std::size_t r, std::uint32_t c) const {
    const auto& row = rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c, [](const Entry& e, std::uint32_t x) { return e.col < x; });
    return (it != row.end() && it->col == c) ? &*it : nullptr;
  }

  /// Drops stale row references from a column list; returns the live count.
  std::size_t refresh_column(std::uint32_t c) {
    auto& list = col_rows_[c];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    std::erase_if(list, [&](std::uint32_t r) { return !active_[r] || find(r, c) == nullptr; });
    return list.size();
  }

  /// rows_[dst] -= f * rows_[src], registering fill-in.
  void axpy(std::size_t dst, std::size_t src, const Value& f) {
    const Row& a = rows_[dst];
    const Row& b = rows_[src];
    Row out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].col < b[j].col)) {
        out.push_back(a[i++]);
      } else if (i == a.size() || b[j].col < a[i].col) {
        out.push_back({b[j].col, ring_.neg_mul(f, b[j].v)});
        col_rows_[b[j].col].push_back(static_cast<std::uint32_t>(dst));
        ++j;
      } else {
        Value v = a[i].v;
        ring_.sub_mul(v, f, b[j].v);
        if (!ring_.is_zero(v)) out.push_back({a[i].col, std::move(v)});
        ++i;
        ++j;
      }
    }
    rows_[dst] = std::move(out);
  }

  void pivot_on(std::size_t pr, std::uint32_t c) {
    const Value pv = find(pr, c)->v;
    std::vector<std::uint32_t> targets = col_rows_[c];
    for (auto r : targets) {
      if (r == pr) continue;
      Value f = ring_.cancel_factor(find(r, c)->v, pv);
      axpy(r, pr, f);
    }
    col_rows_[c].clear();
  }

  void release(std::size_t r) {
    active_[r] = 0;
    Row().swap(rows_[r]);
  }

  void reduce_column_general(std::uint32_t c) {
    for (;;) {
      refresh_column(c);
      const auto& list = col_rows_[c];
      if (list.empty()) {
        col_state_[c] = done;
        return;
      }
      std::size_t pr = list.front();
      for (auto r : list) {
        const auto& a = find(r, c)->v;
        const auto& b = find(pr, c)->v;
        if (abs(a) < abs(b) || (abs(a) == abs(b) && rows_[r].size() < rows_[pr].size())) pr = r;
      }
      bool clean = true;
      std::vector<std::uint32_t> targets = list;
      for (auto r : targets) {
        if (r == pr) continue;
        Integer q = div_floor(find(r, c)->v, find(pr, c)->v);
        axpy(r, pr, q);
        clean = clean && find(r, c) == nullptr;
      }
      if (!clean) continue;
      // Column c now meets only row pr; column operations touch row pr alone.
      Integer p = find(pr, c)->v;
      Row& row = rows_[pr];
      std::uint32_t next = c;
      Integer smallest;
      for (auto& e : row) {
        if (e.col == c) continue;
        e.v = e.v - div_floor(e.v, p) * p;
        if (!e.v.is_zero() && (next == c || abs(e.v) < smallest)) {
          smallest = abs(e.v);
          next = e.col;
        }
      }
      std::erase_if(row, [](const Entry& e) { return e.v.is_zero(); });
      if (next == c) {
        nonunit_.push_back(abs(p));
        ++rank_;
        col_state_[c] = done;
        release(pr);
        return;
      }
      c = next;
    }
  }

  Ring ring_;
  std::size_t ncols_;
  std::vector<Row> rows_;
  std::vector<std::vector<std::uint32_t>> col_rows_;
  std::vector<State> col_state_;
  std::vector<char> active_;
  std::size_t rank_ = 0;
  std::vector<Integer> nonunit_;
};

}  // namespace detail

/// Rank and torsion of the Smith form, without transforms.
struct SmithInvariants {
  std::size_t rank = 0;
  std::vector<Integer> torsion;  // invariant factors > 1
};

/// Transform-free Smith invariants by sparse exact elimination. Suited to the
/// large, very sparse differential matrices of the cochain complexes.
inline SmithInvariants smith_invariants(const ExactMatrix& m) {
  bool transpose = m.rows() < m.cols();
  detail::SparseEliminator<IntegerRing> e(IntegerRing{}, transpose ? m.transpose() : m);
  e.eliminate_units(static_cast<std::size_t>(-1));
  e.eliminate_general();
  return {e.rank(), FgAbGroup(e.nonunit_pivots()).invariant_factors()};
}

/// Structure of Z^rows / image(m) for large sparse m.
inline FgAbGroup cokernel_structure_sparse(const ExactMatrix& m) {
  auto inv = smith_invariants(m);
  return FgAbGroup(inv.torsion, m.rows() - inv.rank);
}

namespace detail {

/// Z/p^e for a prime p, with p^e < 2^31.
struct LocalRing {
  std::uint32_t p;
  std::uint32_t q;

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return static_cast<std::uint32_t>(std::uint64_t{a} * b % q); }
  std::uint32_t sub_mul(std::uint32_t x, std::uint32_t f, std::uint32_t y) const {
    std::uint32_t t = mul(f, y);
    return x >= t ? x - t : x + q - t;
  }
  bool is_unit(std::uint32_t a) const { return a % p != 0; }
  std::uint32_t inverse(std::uint32_t a) const {
    std::int64_t t = 0, nt = 1, r = q, nr = a;
    while (nr != 0) {
      std::int64_t k = r / nr;
      t = std::exchange(nt, t - k * nt);
      r = std::exchange(nr, r - k * nr);
    }
    return static_cast<std::uint32_t>((t % static_cast<std::int64_t>(q) + q) % q);
  }
};

using LocalRow = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

/// Row echelon over Z/p^e that pivots on any unit entry. Pivot rows are
/// normalized to 1 at their pivot column and vanish at every pivot column
/// left of it, so reducing a row by ascending pivot column terminates and
/// clears all pivot columns. Rows without a unit entry after reduction lie
/// in p * (row space) and are returned as the residual.
class LocalEchelon {
 public:
  LocalEchelon(LocalRing ring, std::size_t ncols)
      : ring_(ring), pivot_of_(ncols, npos), occurs_(ncols), acc_(ncols, 0), touched_mark_(ncols, 0), queued_(ncols, 0) {}

  std::size_t rank() const noexcept { return pivots_.size(); }

  /// Adds a row; returns false if it joined the residual.
  bool insert(const LocalRow& row) {
    LocalRow r = reduce(row);
    if (r.empty()) return true;
    auto it = std::find_if(r.begin(), r.end(), [&](const auto& e) { return ring_.is_unit(e.second); });
    if (it == r.end()) {
      residual_.push_back(std::move(r));
      return false;
    }
    add_pivot(std::move(r), it->first);
    return true;
  }

  /// Residual rows reduced against the final pivots, zero rows dropped.
  std::vector<LocalRow> take_residual() {
    std::vector<LocalRow> out;
    for (const auto& r : residual_) {
      LocalRow x = reduce(r);
      if (!x.empty()) out.push_back(std::move(x));
    }
    residual_.clear();
    return out;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  LocalRow reduce(const LocalRow& in) {
    std::vector<std::uint32_t> heap, touched;
    auto touch = [&](std::uint32_t c) {
      if (!touched_mark_[c]) {
        touched_mark_[c] = 1;
        touched.push_back(c);
      }
      if (pivot_of_[c] != npos && !queued_[c]) {
        queued_[c] = 1;
        heap.push_back(c);
        std::push_heap(heap.begin(), heap.end(), std::greater<>());
      }
    };
    for (const auto& [c, v] : in) {
      acc_[c] = static_cast<std::uint32_t>((std::uint64_t{acc_[c]} + v) % ring_.q);
      touch(c);
    }
    while (!heap.empty()) {
      std::pop_heap(heap.begin(), heap.end(), std::greater<>());
      std::uint32_t c = heap.back();
      heap.pop_back();
      queued_[c] = 0;
      std::uint32_t v = std::exchange(acc_[c], 0);
      if (v == 0) continue;
      for (const auto& [cc, w] : pivots_[pivot_of_[c]]) {
        if (cc == c) continue;
        acc_[cc] = ring_.sub_mul(acc_[cc], v, w);
        touch(cc);
      }
    }
    std::sort(touched.begin(), touched.end());
    LocalRow out;
    for (auto c : touched) {
      touched_mark_[c] = 0;
      if (acc_[c] != 0) out.push_back({c, acc_[c]});
      acc_[c] = 0;
    }
    return out;
  }

  void add_pivot(LocalRow r, std::uint32_t col) {
    std::uint32_t inv = ring_.inverse(std::find_if(r.begin(), r.end(), [&](const auto& e) { return e.first == col; })->second);
    for (auto& e : r) e.second = ring_.mul(e.second, inv);
    // Restore the invariant for older pivots right of col that meet it.
    auto holders = std::exchange(occurs_[col], {});
    std::sort(holders.begin(), holders.end());
    holders.erase(std::unique(holders.begin(), holders.end()), holders.end());
    for (auto id : holders) {
      if (pivot_col_[id] < col) continue;
      LocalRow& a = pivots_[id];
      auto it = std::lower_bound(a.begin(), a.end(), std::make_pair(col, std::uint32_t{0}));
      if (it == a.end() || it->first != col) continue;
      std::uint32_t f = it->second;
      LocalRow merged;
      merged.reserve(a.size() + r.size());
      std::size_t i = 0, j = 0;
      while (i < a.size() || j < r.size()) {
        if (j == r.size() || (i < a.size() && a[i].first < r[j].first)) {
          merged.push_back(a[i++]);
        } else if (i == a.size() || r[j].first < a[i].first) {
          merged.push_back({r[j].first, ring_.sub_mul(0, f, r[j].second)});
          occurs_[r[j].first].push_back(static_cast<std::uint32_t>(id));
          ++j;
        } else {
          std::uint32_t v = ring_.sub_mul(a[i].second, f, r[j].second);
          if (v != 0) merged.push_back({a[i].first, v});
          ++i;
          ++j;
        }
      }
      a = std::move(merged);
    }
    auto id = static_cast<std::uint32_t>(pivots_.size());
    for (const auto& e : r)
      if (e.first != col) occurs_[e.first].push_back(id);
    pivot_of_[col] = pivots_.size();
    pivot_col_.push_back(col);
    pivots_.push_back(std::move(r));
  }

  LocalRing ring_;
  std::vector<std::size_t> pivot_of_;
  std::vector<std::uint32_t> pivot_col_;
  std::vector<LocalRow> pivots_;
  std::vector<std::vector<std::uint32_t>> occurs_;
  std::vector<LocalRow> residual_;
  std::vector<std::uint32_t> acc_;
  std::vector<char> touched_mark_;
  std::vector<char> queued_;
};

inline std::vector<LocalRow> local_rows(const ExactMatrix& m, std::uint32_t q) {
  std::vector<LocalRow> rows(m.rows());
  const Integer mod(static_cast<std::int64_t>(q));
  for (std::size_t i = 0; i < m.rows(); ++i)
    m.for_each_in_row(i, [&](std::size_t j, const Integer& x) {
      auto v = static_cast<std::uint32_t>(mod_floor(x, mod).to_int64());
      if (v != 0) rows[i].push_back({static_cast<std::uint32_t>(j), v});
    });
  return rows;
}

}  // namespace detail

/// Smith form over Z/p^e: `units` diagonal entries are units and each
/// exponent a in [1, e) stands for an entry p^a. The remaining entries are 0.
struct LocalSmith {
  std::size_t units = 0;
  std::vector<std::uint32_t> exponents;
};

inline LocalSmith local_smith(const ExactMatrix& m, std::uint32_t p, std::uint32_t e) {
  if (p < 2 || e == 0) throw std::invalid_argument("local_smith needs a prime and a positive exponent");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    q *= p;
    if (q >= (std::uint64_t{1} << 31)) throw std::invalid_argument("p^e must stay below 2^31");
  }
  std::optional<ExactMatrix> flipped;
  if (m.rows() < m.cols()) flipped = m.transpose();
  const ExactMatrix& src = flipped ? *flipped : m;
  auto rows = detail::local_rows(src, static_cast<std::uint32_t>(q));
  LocalSmith out;
  // The residual is p times a matrix over Z/p^(e-1); recurse on the quotient.
  for (std::uint32_t shift = 0; shift < e && !rows.empty(); ++shift, q /= p) {
    detail::LocalEchelon ech({p, static_cast<std::uint32_t>(q)}, src.cols());
    for (std::size_t i = rows.size(); i-- > 0;) ech.insert(rows[i]);
    if (shift == 0) {
      out.units = ech.rank();
    } else {
      out.exponents.insert(out.exponents.end(), ech.rank(), shift);
    }
    rows = ech.take_residual();
    for (auto& r : rows)
      for (auto& entry : r) entry.second /= p;
  }
  std::sort(out.exponents.begin(), out.exponents.end());
  return out;
}

inline constexpr std::uint32_t default_rank_prime = 2147483629u;  // largest prime below 2^31

/// Rank over Z/p, stopping early once `stop_at` pivots are found. Never
/// exceeds the rational rank.
inline std::size_t rank_mod_p(const ExactMatrix& m, std::uint32_t p = default_rank_prime,
                              std::size_t stop_at = static_cast<std::size_t>(-1)) {
  std::optional<ExactMatrix> flipped;
  if (m.rows() < m.cols()) flipped = m.transpose();
  const ExactMatrix& src = flipped ? *flipped : m;
  auto rows = detail::local_rows(src, p);
  detail::LocalEchelon ech({p, p}, src.cols());
  for (std::size_t i = rows.size(); i-- > 0 && ech.rank() < stop_at;) ech.insert(rows[i]);
  return ech.rank();
}

}  // namespace relcoh
