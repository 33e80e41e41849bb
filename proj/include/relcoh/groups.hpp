#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "relcoh/fg_group.hpp"
#include "relcoh/integer.hpp"

namespace relcoh {

using Element = std::uint32_t;
using Permutation = std::vector<std::uint32_t>;

inline constexpr std::size_t default_group_order_cap = 10080;

/// Thrown when a computation would exceed a configured size cap. Distinct
/// from input errors so callers can tell "too big" from "wrong".
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(std::string reason, const std::string& detail)
      : std::runtime_error(detail), reason_(std::move(reason)) {}
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string reason_;
};

/// Finite group given by its multiplication table. Element 0 is the identity.
class FiniteGroup {
 public:
  /// Validates the table: identity at 0, Latin square, associativity.
  static FiniteGroup from_table(std::vector<std::vector<Element>> table) {
    std::size_t n = table.size();
    if (n == 0) throw std::invalid_argument("group table is empty");
    for (const auto& row : table)
      if (row.size() != n) throw std::invalid_argument("group table is not square");
    for (std::size_t a = 0; a < n; ++a) {
      std::vector<char> seen_row(n, 0), seen_col(n, 0);
      for (std::size_t b = 0; b < n; ++b) {
        if (table[a][b] >= n || table[b][a] >= n) throw std::invalid_argument("group table entry out of range");
        if (seen_row[table[a][b]]++ || seen_col[table[b][a]]++)
          throw std::invalid_argument("group table rows/columns must be permutations");
      }
      if (table[0][a] != a || table[a][0] != a) throw std::invalid_argument("element 0 must be the identity");
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (table[table[a][b]][c] != table[a][table[b][c]]) throw std::invalid_argument("group table is not associative");
    return FiniteGroup(std::move(table), {});
  }

  /// Closure of permutation generators; composition (p*q)(x) = p(q(x)).
  static FiniteGroup from_permutations(std::size_t degree, const std::vector<Permutation>& generators,
                                       std::size_t order_cap = default_group_order_cap) {
    for (const auto& g : generators) {
      if (g.size() != degree) throw std::invalid_argument("generator has the wrong degree");
      std::vector<char> seen(degree, 0);
      for (auto x : g) {
        if (x >= degree || seen[x]++) throw std::invalid_argument("generator is not a permutation");
      }
    }
    Permutation id(degree);
    std::iota(id.begin(), id.end(), 0u);
    std::vector<Permutation> elems{id};
    std::map<Permutation, Element> index{{id, 0}};
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (const auto& g : generators) {
        Permutation p = compose(elems[i], g);
        if (index.emplace(p, static_cast<Element>(elems.size())).second) {
          elems.push_back(std::move(p));
          if (elems.size() > order_cap)
            throw CapExceeded("group_order_cap", "permutation group order exceeds cap " + std::to_string(order_cap));
        }
      }
    }
    std::size_t n = elems.size();
    std::vector<std::vector<Element>> table(n, std::vector<Element>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) table[a][b] = index.at(compose(elems[a], elems[b]));
    return FiniteGroup(std::move(table), std::move(elems));
  }

  std::size_t order() const noexcept { return table_.size(); }
  Element mul(Element a, Element b) const { return table_[a][b]; }
  Element inverse(Element a) const { return inverse_[a]; }
  const std::vector<std::vector<Element>>& table() const noexcept { return table_; }

  /// Permutation realizing each element, when built from permutations.
  const std::vector<Permutation>& permutations() const noexcept { return perms_; }
  std::optional<Element> find_permutation(const Permutation& p) const {
    auto it = std::find(perms_.begin(), perms_.end(), p);
    if (it == perms_.end()) return std::nullopt;
    return static_cast<Element>(it - perms_.begin());
  }

  Element commutator(Element a, Element b) const { return mul(mul(inverse(a), inverse(b)), mul(a, b)); }

  /// Subgroup generated by `gens`, sorted.
  std::vector<Element> closure(const std::vector<Element>& gens) const {
    std::vector<char> in(order(), 0);
    std::vector<Element> out{0};
    in[0] = 1;
    for (std::size_t i = 0; i < out.size(); ++i)
      for (auto g : gens) {
        if (g >= order()) throw std::invalid_argument("subgroup generator out of range");
        Element x = mul(out[i], g);
        if (!in[x]) {
          in[x] = 1;
          out.push_back(x);
        }
      }
    std::sort(out.begin(), out.end());
    return out;
  }

  Element power(Element a, std::uint64_t e) const {
    Element r = 0;
    for (std::uint64_t i = 0; i < e; ++i) r = mul(r, a);
    return r;
  }

  std::size_t element_order(Element a) const {
    std::size_t k = 1;
    for (Element x = a; x != 0; x = mul(x, a)) ++k;
    return k;
  }

  bool is_abelian() const {
    for (std::size_t a = 0; a < order(); ++a)
      for (std::size_t b = 0; b < a; ++b)
        if (table_[a][b] != table_[b][a]) return false;
    return true;
  }

 private:
  FiniteGroup(std::vector<std::vector<Element>> table, std::vector<Permutation> perms)
      : table_(std::move(table)), perms_(std::move(perms)) {
    inverse_.resize(table_.size());
    for (std::size_t a = 0; a < table_.size(); ++a)
      for (std::size_t b = 0; b < table_.size(); ++b)
        if (table_[a][b] == 0) inverse_[a] = static_cast<Element>(b);
  }

  static Permutation compose(const Permutation& p, const Permutation& q) {
    Permutation r(p.size());
    for (std::size_t x = 0; x < p.size(); ++x) r[x] = p[q[x]];
    return r;
  }

  std::vector<std::vector<Element>> table_;
  std::vector<Element> inverse_;
  std::vector<Permutation> perms_;
};

/// Structure of a finite abelian group presented by its multiplication on
/// `elements` (closed under `op`, identity `e`), read off from the counts
/// |{x : x^(p^k) = e}|.
template <class Op>
FgAbGroup abelian_structure(const std::vector<Element>& elements, Element e, Op op) {
  std::size_t n = elements.size();
  auto pow = [&](Element x, std::size_t k) {
    Element r = e;
    for (std::size_t i = 0; i < k; ++i) r = op(r, x);
    return r;
  };
  std::vector<Integer> cyclic;
  std::size_t m = n;
  for (std::size_t p = 2; m > 1; ++p) {
    if (m % p != 0) continue;
    std::size_t vp = 0;
    while (m % p == 0) {
      m /= p;
      ++vp;
    }
    // s[k] = log_p |G[p^k]|; factors of order >= p^k number s[k] - s[k-1].
    std::vector<std::size_t> s{0};
    std::size_t pk = 1;
    for (std::size_t k = 1; s.back() < vp; ++k) {
      pk *= p;
      std::size_t count = 0;
      for (auto x : elements) count += pow(x, pk) == e;
      std::size_t lg = 0;
      for (std::size_t c = count; c > 1; c /= p) ++lg;
      s.push_back(lg);
    }
    for (std::size_t k = 1; k < s.size(); ++k) {
      std::size_t at_least_k = s[k] - s[k - 1];
      std::size_t at_least_next = k + 1 < s.size() ? s[k + 1] - s[k] : 0;
      Integer order(1);
      for (std::size_t i = 0; i < k; ++i) order *= Integer(p);
      for (std::size_t i = 0; i < at_least_k - at_least_next; ++i) cyclic.push_back(order);
    }
  }
  return FgAbGroup(cyclic);
}

/// Commutator subgroup G_2: generated by all [a, b] (a normal subgroup).
inline std::vector<Element> commutator_subgroup(const FiniteGroup& g) {
  std::set<Element> comms;
  for (Element a = 0; a < g.order(); ++a)
    for (Element b = 0; b < g.order(); ++b) comms.insert(g.commutator(a, b));
  return g.closure({comms.begin(), comms.end()});
}

/// G / G_2 in canonical form.
inline FgAbGroup abelianization(const FiniteGroup& g) {
  auto normal = commutator_subgroup(g);
  std::vector<Element> coset_of(g.order(), static_cast<Element>(-1));
  std::vector<Element> reps;
  for (Element x = 0; x < g.order(); ++x) {
    if (coset_of[x] != static_cast<Element>(-1)) continue;
    for (auto h : normal) coset_of[g.mul(x, h)] = static_cast<Element>(reps.size());
    reps.push_back(x);
  }
  std::vector<Element> cosets(reps.size());
  std::iota(cosets.begin(), cosets.end(), 0u);
  return abelian_structure(cosets, 0u, [&](Element a, Element b) { return coset_of[g.mul(reps[a], reps[b])]; });
}

/// Left coset space K = G/H with the left G-action. Point 0 is H itself;
/// points are numbered by the smallest element of each coset.
class CosetSpace {
 public:
  CosetSpace(FiniteGroup group, const std::vector<Element>& h_gens) : group_(std::move(group)) {
    subgroup_ = group_.closure(h_gens);
    std::size_t n = group_.order();
    std::vector<Element> point_of(n, static_cast<Element>(-1));
    for (Element x = 0; x < n; ++x) {
      if (point_of[x] != static_cast<Element>(-1)) continue;
      for (auto h : subgroup_) point_of[group_.mul(x, h)] = static_cast<Element>(reps_.size());
      reps_.push_back(x);
    }
    action_.assign(n, std::vector<Element>(reps_.size()));
    for (Element g = 0; g < n; ++g)
      for (std::size_t k = 0; k < reps_.size(); ++k) action_[g][k] = point_of[group_.mul(g, reps_[k])];
    // Elements sending each point to the base point 0.
    to_base_.assign(reps_.size(), {});
    for (Element g = 0; g < n; ++g)
      for (std::size_t k = 0; k < reps_.size(); ++k)
        if (action_[g][k] == 0) to_base_[k].push_back(g);
  }

  const FiniteGroup& group() const noexcept { return group_; }
  const std::vector<Element>& subgroup() const noexcept { return subgroup_; }
  std::size_t size() const noexcept { return reps_.size(); }
  Element representative(std::size_t point) const { return reps_[point]; }
  Element act(Element g, Element point) const { return action_[g][point]; }
  /// {g : g . point == 0}; a left coset of the stabilizer, of size |H|.
  const std::vector<Element>& to_base(Element point) const { return to_base_[point]; }

  std::size_t fixed_points(Element g) const {
    std::size_t c = 0;
    for (std::size_t k = 0; k < size(); ++k) c += action_[g][k] == k;
    return c;
  }

 private:
  FiniteGroup group_;
  std::vector<Element> subgroup_;
  std::vector<Element> reps_;
  std::vector<std::vector<Element>> action_;
  std::vector<std::vector<Element>> to_base_;
};

inline CosetSpace coset_space(const FiniteGroup& g, const std::vector<Element>& h_gens) { return CosetSpace(g, h_gens); }

/// Regular coset space K = G (H trivial).
inline CosetSpace regular_space(const FiniteGroup& g) { return CosetSpace(g, {}); }

namespace builtin {

inline Permutation cycle(std::size_t degree, const std::vector<std::uint32_t>& points) {
  Permutation p(degree);
  std::iota(p.begin(), p.end(), 0u);
  for (std::size_t i = 0; i < points.size(); ++i) p[points[i]] = points[(i + 1) % points.size()];
  return p;
}

inline FiniteGroup cyclic(std::size_t k) {
  if (k == 0) throw std::invalid_argument("cyclic group order must be positive");
  std::vector<std::uint32_t> pts(k);
  std::iota(pts.begin(), pts.end(), 0u);
  return FiniteGroup::from_permutations(k, k > 1 ? std::vector<Permutation>{cycle(k, pts)} : std::vector<Permutation>{});
}

inline FiniteGroup symmetric(std::size_t n) {
  if (n < 1 || n > 5) throw std::invalid_argument("builtin symmetric groups are S1..S5");
  if (n == 1) return FiniteGroup::from_permutations(1, {});
  std::vector<std::uint32_t> pts(n);
  std::iota(pts.begin(), pts.end(), 0u);
  return FiniteGroup::from_permutations(n, {cycle(n, {0, 1}), cycle(n, pts)});
}

inline FiniteGroup alternating(std::size_t n) {
  if (n < 1 || n > 5) throw std::invalid_argument("builtin alternating groups are A1..A5");
  if (n < 3) return FiniteGroup::from_permutations(n, {});
  std::vector<Permutation> gens;
  for (std::uint32_t i = 2; i < n; ++i) gens.push_back(cycle(n, {0, 1, i}));
  return FiniteGroup::from_permutations(n, gens);
}

/// Dihedral group of order 8, acting on the square's vertices 0..3.
inline FiniteGroup dihedral4() {
  return FiniteGroup::from_permutations(4, {cycle(4, {0, 1, 2, 3}), Permutation{0, 3, 2, 1}});
}

/// Quaternion group in its regular representation on {1,-1,i,-i,j,-j,k,-k}.
inline FiniteGroup quaternion() {
  // Point encoding: 2*u + s with u in {1,i,j,k} = {0,1,2,3} and s the sign bit.
  auto mul = [](std::uint32_t a, std::uint32_t b) {
    static const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    std::uint32_t ua = a / 2, ub = b / 2;
    std::uint32_t s = (a % 2) ^ (b % 2) ^ static_cast<std::uint32_t>(sign[ua][ub]);
    return static_cast<std::uint32_t>(2 * unit[ua][ub]) + s;
  };
  auto left = [&](std::uint32_t g) {
    Permutation p(8);
    for (std::uint32_t x = 0; x < 8; ++x) p[x] = mul(g, x);
    return p;
  };
  return FiniteGroup::from_permutations(8, {left(2), left(4)});
}

/// Z1..Z<n>, S1..S5, A1..A5, D4, Q8.
inline FiniteGroup by_name(const std::string& name) {
  auto number = [&](std::size_t from) -> std::size_t {
    if (name.size() <= from) throw std::invalid_argument("unknown builtin group '" + name + "'");
    std::size_t v = 0;
    for (std::size_t i = from; i < name.size(); ++i) {
      if (name[i] < '0' || name[i] > '9' || v > 100000) throw std::invalid_argument("unknown builtin group '" + name + "'");
      v = v * 10 + static_cast<std::size_t>(name[i] - '0');
    }
    return v;
  };
  if (name == "D4") return dihedral4();
  if (name == "Q8") return quaternion();
  if (!name.empty() && name[0] == 'Z') return cyclic(number(1));
  if (!name.empty() && name[0] == 'S') return symmetric(number(1));
  if (!name.empty() && name[0] == 'A') return alternating(number(1));
  throw std::invalid_argument("unknown builtin group '" + name + "'");
}

/// Names every acceptance check refers to.
inline std::vector<std::string> standard_names() {
  return {"Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z11", "Z12",
          "S3", "S4", "S5", "A4", "A5", "D4", "Q8"};
}

}  // namespace builtin

}  // namespace relcoh
