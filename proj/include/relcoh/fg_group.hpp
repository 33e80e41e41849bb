#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "relcoh/integer.hpp"

namespace relcoh {

/// Finitely generated abelian group Z^rank + Z/f_1 + ... + Z/f_k, with
/// 2 <= f_1 | f_2 | ... | f_k. Construction always canonicalizes, so two
/// groups are isomorphic exactly when they compare equal.
class FgAbGroup {
 public:
  FgAbGroup() = default;

  /// Accepts arbitrary cyclic orders: 0 contributes a free summand, +-1 is
  /// dropped, anything else is folded into the invariant-factor chain.
  explicit FgAbGroup(const std::vector<Integer>& cyclic_orders, std::size_t free_rank = 0) : rank_(free_rank) {
    std::vector<Integer> t;
    for (const auto& c : cyclic_orders) {
      if (c.is_zero()) {
        ++rank_;
      } else if (!c.is_unit()) {
        t.push_back(abs(c));
      }
    }
    factors_ = invariant_chain(std::move(t));
  }

  static FgAbGroup trivial() { return {}; }
  static FgAbGroup free(std::size_t r) { return FgAbGroup({}, r); }
  static FgAbGroup cyclic(const Integer& n) { return FgAbGroup({n}); }

  const std::vector<Integer>& invariant_factors() const noexcept { return factors_; }
  std::size_t free_rank() const noexcept { return rank_; }
  bool is_finite() const noexcept { return rank_ == 0; }
  bool is_trivial() const noexcept { return rank_ == 0 && factors_.empty(); }
  std::size_t generator_count() const noexcept { return factors_.size() + rank_; }

  /// Order of the group; throws for infinite groups.
  Integer order() const {
    if (!is_finite()) throw std::domain_error("order of an infinite group");
    Integer n(1);
    for (const auto& f : factors_) n *= f;
    return n;
  }

  /// Exponent of the torsion subgroup (1 when torsion-free).
  Integer exponent() const { return factors_.empty() ? Integer(1) : factors_.back(); }

  /// Relation orders of the canonical generators: torsion generators first
  /// (in factor order), then free generators with relation order 0.
  std::vector<Integer> relation_orders() const {
    std::vector<Integer> r = factors_;
    r.insert(r.end(), rank_, Integer(0));
    return r;
  }

  /// "0", "Z", "Z^2 + Z/2 + Z/4", ...
  std::string to_string() const {
    if (is_trivial()) return "0";
    std::string s;
    auto add = [&](const std::string& part) { s += (s.empty() ? "" : " + ") + part; };
    if (rank_ == 1) add("Z");
    if (rank_ > 1) add("Z^" + std::to_string(rank_));
    for (const auto& f : factors_) add("Z/" + f.to_string());
    return s;
  }

  friend bool operator==(const FgAbGroup&, const FgAbGroup&) = default;

 private:
  /// Replaces pairs (a, b) by (gcd, lcm) until each entry divides the next.
  static std::vector<Integer> invariant_chain(std::vector<Integer> t) {
    std::sort(t.begin(), t.end());
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t j = i + 1; j < t.size(); ++j) {
        if (!(t[j] % t[i]).is_zero()) {
          Integer g = gcd(t[i], t[j]);
          Integer l = div_exact(t[i], g) * t[j];
          t[i] = g;
          t[j] = l;
        }
      }
    }
    std::erase_if(t, [](const Integer& x) { return x.is_unit(); });
    std::sort(t.begin(), t.end());
    return t;
  }

  std::vector<Integer> factors_;
  std::size_t rank_ = 0;
};

}  // namespace relcoh
