#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "relcoh/fg_group.hpp"
#include "relcoh/groups.hpp"
#include "relcoh/integer.hpp"
#include "relcoh/matrix.hpp"
#include "relcoh/sparse_elim.hpp"

namespace relcoh {

/// Refusal threshold on orbit representatives enumerated at the top level of
/// a chain (tuples with first coordinate at the base point).
inline constexpr std::size_t default_tuple_cap = 5'000'000;

using Tuple = std::vector<Element>;

/// Which cochains a chain is built on. `full` is I(K^m) itself; `normalized`
/// keeps only the orbits of tuples without two equal neighbours, a
/// subcomplex with the same homology.
enum class ChainBasis { full, normalized };

/// Orbits of the diagonal G-action on K^n.
///
/// Each orbit is represented by its lexicographically smallest tuple (which
/// starts at the base point 0); orbits are indexed in increasing order of
/// that representative.
class OrbitBasis {
 public:
  OrbitBasis(const CosetSpace& space, std::size_t n, ChainBasis basis = ChainBasis::full,
             std::size_t cap = default_tuple_cap)
      : space_(&space), n_(n), basis_(basis) {
    if (n == 0) throw std::invalid_argument("orbit level must be at least 1");
    std::size_t k = space.size();
    std::size_t candidates = 1;
    for (std::size_t i = 1; i < n; ++i) {
      if (candidates > cap / k + 1) throw CapExceeded("tuple_cap", cap_message(cap));
      candidates *= k;
    }
    if (candidates > cap) throw CapExceeded("tuple_cap", cap_message(cap));
    for (std::size_t i = 0; i < n; ++i) {
      if (radix_limit_ / k < weight_) throw CapExceeded("tuple_cap", "tuple encoding overflow");
      weight_ *= k;
    }
    Tuple t(n, 0);
    for (std::size_t code = 0; code < candidates; ++code) {
      std::size_t c = code;
      for (std::size_t i = n; i-- > 1;) {
        t[i] = static_cast<Element>(c % k);
        c /= k;
      }
      if (basis == ChainBasis::normalized && degenerate(t)) continue;
      if (canonical_code(t) == encode(t)) codes_.push_back(encode(t));
    }
  }

  std::size_t level() const noexcept { return n_; }
  std::size_t size() const noexcept { return codes_.size(); }
  ChainBasis basis() const noexcept { return basis_; }
  const CosetSpace& space() const noexcept { return *space_; }

  Tuple representative(std::size_t orbit) const { return decode(codes_.at(orbit)); }

  static bool degenerate(const Tuple& t) {
    for (std::size_t i = 1; i < t.size(); ++i)
      if (t[i] == t[i - 1]) return true;
    return false;
  }

  /// Orbit index of a tuple; npos for degenerate tuples in a normalized basis.
  std::size_t index_of(const Tuple& t) const {
    if (t.size() != n_) throw std::invalid_argument("tuple has the wrong length");
    if (basis_ == ChainBasis::normalized && degenerate(t)) return npos;
    auto code = canonical_code(t);
    auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
    if (it == codes_.end() || *it != code) throw std::logic_error("orbit lookup failed");
    return static_cast<std::size_t>(it - codes_.begin());
  }

  /// All tuples of an orbit, sorted.
  std::vector<Tuple> members(std::size_t orbit) const {
    Tuple rep = representative(orbit);
    std::vector<Tuple> out;
    for (Element g = 0; g < space_->group().order(); ++g) out.push_back(translate(g, rep));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  Tuple translate(Element g, const Tuple& t) const {
    Tuple out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = space_->act(g, t[i]);
    return out;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  static std::string cap_message(std::size_t cap) {
    return "orbit enumeration exceeds the tuple cap of " + std::to_string(cap);
  }

  std::uint64_t encode(const Tuple& t) const {
    std::uint64_t c = 0;
    for (auto x : t) c = c * space_->size() + x;
    return c;
  }

  Tuple decode(std::uint64_t c) const {
    Tuple t(n_);
    for (std::size_t i = n_; i-- > 0;) {
      t[i] = static_cast<Element>(c % space_->size());
      c /= space_->size();
    }
    return t;
  }

  /// Smallest encoding over the orbit: move t[0] to the base point, then
  /// minimize over the stabilizer coset.
  std::uint64_t canonical_code(const Tuple& t) const {
    std::uint64_t best = ~std::uint64_t{0};
    for (Element g : space_->to_base(t[0])) {
      std::uint64_t c = 0;
      for (auto x : t) c = c * space_->size() + space_->act(g, x);
      best = std::min(best, c);
    }
    return best;
  }

  static constexpr std::uint64_t radix_limit_ = std::uint64_t{1} << 62;

  const CosetSpace* space_;
  std::size_t n_;
  ChainBasis basis_;
  std::uint64_t weight_ = 1;
  std::vector<std::uint64_t> codes_;
};

/// Diagonal orbits on K^n (full basis).
inline OrbitBasis diagonal_orbits(const CosetSpace& k, std::size_t n, std::size_t cap = default_tuple_cap) {
  return OrbitBasis(k, n, ChainBasis::full, cap);
}

/// Number of diagonal orbits on K^n by Burnside's lemma.
inline Integer burnside_orbit_count(const CosetSpace& k, std::size_t n) {
  Integer total(0);
  for (Element g = 0; g < k.group().order(); ++g) {
    Integer f(1);
    for (std::size_t i = 0; i < n; ++i) f *= Integer(k.fixed_points(g));
    total += f;
  }
  return div_exact(total, Integer(k.group().order()));
}

namespace detail {

/// Row `r` of d_n: signed faces of the representative of target orbit r.
inline void differential_row(const OrbitBasis& source, const Tuple& x, std::vector<std::pair<std::uint32_t, int>>& acc,
                             SparseRow& row) {
  const std::size_t n = source.level();
  Tuple face(n);
  acc.clear();
  for (std::size_t j = 0; j <= n; ++j) {
    for (std::size_t i = 0, o = 0; i <= n; ++i)
      if (i != j) face[o++] = x[i];
    std::size_t col = source.index_of(face);
    if (col == OrbitBasis::npos) continue;
    acc.push_back({static_cast<std::uint32_t>(col), j % 2 == 0 ? 1 : -1});
  }
  std::sort(acc.begin(), acc.end());
  row.clear();
  for (std::size_t i = 0; i < acc.size();) {
    std::uint32_t c = acc[i].first;
    int v = 0;
    for (; i < acc.size() && acc[i].first == c; ++i) v += acc[i].second;
    if (v != 0) row.push_back({c, Integer(v)});
  }
}

inline void check_consecutive(const OrbitBasis& lower, const OrbitBasis& upper) {
  if (upper.level() != lower.level() + 1 || &lower.space() != &upper.space() || lower.basis() != upper.basis())
    throw std::invalid_argument("maps between orbit bases need consecutive levels over the same space");
}

}  // namespace detail

/// Matrix of d_n : I(K^n) -> I(K^{n+1}) in orbit bases:
///   entry[O', O] = sum_j (-1)^(j+1) [face_j(rep O') in O],
/// where face_j drops coordinate j (1-based).
inline ExactMatrix differential_matrix(const OrbitBasis& source, const OrbitBasis& target) {
  detail::check_consecutive(source, target);
  std::vector<SparseRow> rows(target.size());
  std::vector<std::pair<std::uint32_t, int>> acc;
  for (std::size_t r = 0; r < target.size(); ++r) detail::differential_row(source, target.representative(r), acc, rows[r]);
  return ExactMatrix::from_sparse_rows(source.size(), std::move(rows));
}

/// d_n over the full orbit bases of K^n and K^{n+1}.
inline ExactMatrix differential_matrix(const CosetSpace& k, std::size_t n, std::size_t cap = default_tuple_cap) {
  OrbitBasis src(k, n, ChainBasis::full, cap), dst(k, n + 1, ChainBasis::full, cap);
  return differential_matrix(src, dst);
}

/// Cone homotopy h : I(K^{n+1}) -> I(K^n), (h f)(x_1..x_n) = sum_k f(k, x_1..x_n),
/// in orbit bases: entry[O'', O] = #{k : (k, rep O'') in O}.
inline ExactMatrix homotopy_matrix(const OrbitBasis& upper, const OrbitBasis& lower) {
  detail::check_consecutive(lower, upper);
  const std::size_t k = upper.space().size();
  std::vector<SparseRow> rows(lower.size());
  std::vector<std::uint32_t> hits;
  Tuple t(upper.level());
  for (std::size_t r = 0; r < lower.size(); ++r) {
    Tuple x = lower.representative(r);
    std::copy(x.begin(), x.end(), t.begin() + 1);
    hits.clear();
    for (std::size_t p = 0; p < k; ++p) {
      t[0] = static_cast<Element>(p);
      std::size_t col = upper.index_of(t);
      if (col != OrbitBasis::npos) hits.push_back(static_cast<std::uint32_t>(col));
    }
    std::sort(hits.begin(), hits.end());
    for (std::size_t i = 0; i < hits.size();) {
      std::size_t j = i;
      while (j < hits.size() && hits[j] == hits[i]) ++j;
      rows[r].push_back({hits[i], Integer(static_cast<std::int64_t>(j - i))});
      i = j;
    }
  }
  return ExactMatrix::from_sparse_rows(upper.size(), std::move(rows));
}

/// The invariant cochain complex 0 -> I(K) -> I(K^2) -> ... -> I(K^{max+1})
/// with differentials d_m : I(K^m) -> I(K^{m+1}) for m = 1..max_level.
/// Differentials are built on first use.
class InvariantChain {
 public:
  InvariantChain(const CosetSpace& space, std::size_t max_level, ChainBasis basis = ChainBasis::full,
                 std::size_t cap = default_tuple_cap)
      : space_(std::make_shared<CosetSpace>(space)), max_level_(max_level) {
    if (max_level == 0) throw std::invalid_argument("chain needs at least one differential");
    // Check the top level first so refusals are cheap.
    OrbitBasis top(*space_, max_level + 1, basis, cap);
    for (std::size_t m = 1; m <= max_level; ++m) bases_.emplace_back(*space_, m, basis, cap);
    bases_.push_back(std::move(top));
    differentials_ = std::make_unique<Lazy[]>(max_level);
  }

  const CosetSpace& space() const noexcept { return *space_; }
  std::size_t max_level() const noexcept { return max_level_; }
  ChainBasis basis_kind() const noexcept { return bases_.front().basis(); }
  /// Orbit basis of I(K^m), 1 <= m <= max_level + 1.
  const OrbitBasis& basis(std::size_t m) const { return bases_.at(m - 1); }
  /// d_m, 1 <= m <= max_level.
  const ExactMatrix& differential(std::size_t m) const {
    if (m < 1 || m > max_level_) throw std::out_of_range("differential index out of range");
    Lazy& slot = differentials_[m - 1];
    std::call_once(slot.once, [&] { slot.matrix = differential_matrix(bases_[m - 1], bases_[m]); });
    return slot.matrix;
  }

 private:
  struct Lazy {
    std::once_flag once;
    ExactMatrix matrix;
  };

  std::shared_ptr<const CosetSpace> space_;
  std::size_t max_level_;
  std::vector<OrbitBasis> bases_;
  std::unique_ptr<Lazy[]> differentials_;
};

/// Checks d_{m-1} h_m + h_{m+1} d_m == |K| id on I(K^m) exactly, row by row
/// and without forming d_m. When it holds, |K| times any cycle at level m is a
/// boundary, so the homology there is finite and annihilated by |K|.
inline bool homotopy_certificate(const InvariantChain& chain, std::size_t m) {
  if (m < 2 || m > chain.max_level()) throw std::out_of_range("certificate level out of range");
  const OrbitBasis& lower = chain.basis(m - 1);
  const OrbitBasis& mid = chain.basis(m);
  const OrbitBasis& upper = chain.basis(m + 1);
  const ExactMatrix& d_prev = chain.differential(m - 1);
  const std::size_t k = chain.space().size();
  const auto expected = static_cast<std::int64_t>(k);

  std::vector<std::int64_t> acc(mid.size(), 0);
  std::vector<std::uint32_t> touched;
  std::vector<std::pair<std::uint32_t, int>> scratch;
  SparseRow drow;
  auto add = [&](std::size_t col, std::int64_t v) {
    if (acc[col] == 0) touched.push_back(static_cast<std::uint32_t>(col));
    acc[col] += v;
  };
  Tuple t_mid(m), t_up(m + 1);
  for (std::size_t r = 0; r < mid.size(); ++r) {
    touched.clear();
    // Row r of d_{m-1} h_m: each face orbit y contributes sum_k e(k, rep y).
    d_prev.for_each_in_row(r, [&](std::size_t y, const Integer& s) {
      Tuple rep = lower.representative(y);
      std::copy(rep.begin(), rep.end(), t_mid.begin() + 1);
      for (std::size_t p = 0; p < k; ++p) {
        t_mid[0] = static_cast<Element>(p);
        std::size_t col = mid.index_of(t_mid);
        if (col != OrbitBasis::npos) add(col, s.to_int64());
      }
    });
    // Row r of h_{m+1} d_m: sum over k of row (k, rep r) of d_m.
    Tuple x = mid.representative(r);
    std::copy(x.begin(), x.end(), t_up.begin() + 1);
    for (std::size_t p = 0; p < k; ++p) {
      t_up[0] = static_cast<Element>(p);
      if (upper.index_of(t_up) == OrbitBasis::npos) continue;
      detail::differential_row(mid, t_up, scratch, drow);
      for (const auto& e : drow) add(e.col, e.value.to_int64());
    }
    bool ok = true;
    for (auto c : touched) {
      ok = ok && acc[c] == (c == r ? expected : 0);
      acc[c] = 0;
    }
    if (!ok || (std::find(touched.begin(), touched.end(), r) == touched.end() && expected != 0)) return false;
  }
  return true;
}

/// Rational rank of a matrix known to be at most `upper`. Modular ranks never
/// exceed the rational rank, so reaching `upper` modulo a prime settles it;
/// otherwise exact elimination decides.
inline std::size_t rational_rank(const ExactMatrix& m, std::size_t upper) {
  for (std::uint32_t p : {default_rank_prime, 2147483587u}) {
    if (rank_mod_p(m, p, upper) >= upper) return upper;
  }
  return smith_invariants(m).rank;
}

/// Torsion of coker(m), given that it is annihilated by `bound`: the p-parts
/// come from Smith forms over Z/p^(v_p(bound)+1), where no factor can vanish.
inline std::vector<Integer> bounded_torsion(const ExactMatrix& m, std::uint64_t bound) {
  std::vector<Integer> out;
  std::uint64_t rest = bound;
  for (std::uint64_t p = 2; rest > 1; ++p) {
    if (rest % p != 0) continue;
    std::uint32_t e = 1;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    auto local = local_smith(m, static_cast<std::uint32_t>(p), e);
    for (auto a : local.exponents) {
      Integer q(1);
      for (std::uint32_t i = 0; i < a; ++i) q *= Integer(static_cast<std::int64_t>(p));
      out.push_back(q);
    }
  }
  return out;
}

/// ker(d_m) / im(d_{m-1}); for m = 1 the image is zero.
///
/// ker(d_m) is saturated, so the torsion is that of coker(d_{m-1}) and the
/// free rank is nullity(d_m) - rank(d_{m-1}). When the homotopy certificate
/// holds the group is finite of exponent dividing |K| and only local Smith
/// forms of d_{m-1} are needed; otherwise the integer Smith form and the rank
/// of d_m are computed.
inline FgAbGroup homology_at(const InvariantChain& chain, std::size_t m) {
  if (m < 1 || m > chain.max_level()) throw std::out_of_range("homology level out of range");
  if (m > 1 && homotopy_certificate(chain, m))
    return FgAbGroup(bounded_torsion(chain.differential(m - 1), chain.space().size()), 0);
  std::size_t dim = chain.basis(m).size();
  std::vector<Integer> torsion;
  std::size_t image_rank = 0;
  if (m > 1) {
    auto inv = smith_invariants(chain.differential(m - 1));
    torsion = inv.torsion;
    image_rank = inv.rank;
  }
  std::size_t rank_m = rational_rank(chain.differential(m), dim - image_rank);
  return FgAbGroup(torsion, dim - rank_m - image_rank);
}

/// H^n(G) with integer coefficients: homology of the chain over K = G at
/// level n + 1 (I(G^{n+1}) is the module of homogeneous n-cochains).
inline FgAbGroup group_cohomology(const FiniteGroup& g, std::size_t n, std::size_t cap = default_tuple_cap,
                                  ChainBasis basis = ChainBasis::normalized) {
  InvariantChain chain(regular_space(g), n + 1, basis, cap);
  return homology_at(chain, n + 1);
}

/// H^n(X|Y) for an isometric extension with fiber G/H and full Mackey group:
/// ker(d_{n+3}) / im(d_{n+2}) over K = G/H. The Mackey hypothesis is the
/// caller's responsibility.
inline FgAbGroup relative_cohomology_isometric(const FiniteGroup& g, const std::vector<Element>& h_gens, std::size_t n,
                                               std::size_t cap = default_tuple_cap,
                                               ChainBasis basis = ChainBasis::normalized) {
  InvariantChain chain(coset_space(g, h_gens), n + 3, basis, cap);
  return homology_at(chain, n + 3);
}

}  // namespace relcoh
