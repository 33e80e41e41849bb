#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "relcoh/groups.hpp"
#include "relcoh/integer.hpp"

namespace relcoh {

/// One-sided window omega(0..2^m-1) of the Toeplitz sequence over a finite group.
///
/// Position i is filled at stage v2(i+1) with g_k, where
///   g_k = a^-1 u_{k mod N} b^-1,  a = omega(0)...omega(2^k-2),  b = omega(0)...omega(2^(k-1)-2)
/// and a, b are multiplied left to right. Stages run 0..m; stage m fills only
/// the last position.
struct ToeplitzWindow {
  std::vector<Element> enumeration;
  std::size_t depth = 0;
  std::vector<Element> values;
  std::vector<std::uint8_t> stage_of;
  std::vector<Element> stage_value;  // g_k for k = 0..depth
};

namespace detail {

/// omega(0) * ... * omega(len-1), left to right.
inline Element prefix_product(const FiniteGroup& g, const std::vector<Element>& w, std::size_t len) {
  Element p = 0;
  for (std::size_t i = 0; i < len; ++i) p = g.mul(p, w[i]);
  return p;
}

inline void check_enumeration(const FiniteGroup& g, const std::vector<Element>& u) {
  if (u.size() != g.order()) throw std::invalid_argument("enumeration must list every group element once");
  std::vector<char> seen(g.order(), 0);
  for (auto x : u) {
    if (x >= g.order() || seen[x]) throw std::invalid_argument("enumeration must list every group element once");
    seen[x] = 1;
  }
  if (u[0] != 0) throw std::invalid_argument("enumeration must start with the identity");
}

}  // namespace detail

inline std::vector<Element> default_enumeration(const FiniteGroup& g) {
  std::vector<Element> u(g.order());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = static_cast<Element>(i);
  return u;
}

/// Identity first, the other elements in a fixed pseudo-random order
/// (Fisher-Yates driven by mt19937_64, so the order is portable).
inline std::vector<Element> scrambled_enumeration(const FiniteGroup& g, std::uint64_t seed = 0) {
  auto u = default_enumeration(g);
  std::mt19937_64 rng(seed);
  for (std::size_t i = u.size(); i-- > 2;) std::swap(u[i], u[1 + rng() % i]);
  return u;
}

inline ToeplitzWindow generate_window(const FiniteGroup& g, const std::vector<Element>& enumeration, std::size_t m) {
  if (m < 2 || m > 30) throw std::invalid_argument("toeplitz depth must lie in [2, 30]");
  detail::check_enumeration(g, enumeration);
  const std::size_t n = g.order();
  const std::size_t len = std::size_t{1} << m;
  ToeplitzWindow w;
  w.enumeration = enumeration;
  w.depth = m;
  w.values.assign(len, 0);
  w.stage_of.assign(len, 0);
  for (std::size_t k = 0; k <= m; ++k) {
    // Everything left of position 2^k - 1 has stage < k, so a and b are final here.
    Element a = detail::prefix_product(g, w.values, (std::size_t{1} << k) - 1);
    Element b = k == 0 ? 0 : detail::prefix_product(g, w.values, (std::size_t{1} << (k - 1)) - 1);
    Element gk = g.mul(g.mul(g.inverse(a), enumeration[k % n]), g.inverse(b));
    w.stage_value.push_back(gk);
    std::size_t step = std::size_t{1} << (k + 1);
    for (std::size_t i = (std::size_t{1} << k) - 1; i < len; i += step) {
      w.values[i] = gk;
      w.stage_of[i] = static_cast<std::uint8_t>(k);
    }
  }
  return w;
}

inline ToeplitzWindow generate_window(const FiniteGroup& g, std::size_t m) {
  return generate_window(g, default_enumeration(g), m);
}

/// omega(t-1) * ... * omega(0), newest factor on the left; identity for t = 0.
inline Element cocycle_product(const FiniteGroup& g, const ToeplitzWindow& w, std::size_t t) {
  if (t > w.values.size()) throw std::out_of_range("cocycle product beyond the window");
  Element p = 0;
  for (std::size_t i = 0; i < t; ++i) p = g.mul(w.values[i], p);
  return p;
}

/// a_k * g_k * b_k recomputed from the finished window, for k = 0..depth.
inline std::vector<Element> construction_identity(const FiniteGroup& g, const ToeplitzWindow& w) {
  std::vector<Element> out;
  for (std::size_t k = 0; k <= w.depth; ++k) {
    Element a = detail::prefix_product(g, w.values, (std::size_t{1} << k) - 1);
    Element b = k == 0 ? 0 : detail::prefix_product(g, w.values, (std::size_t{1} << (k - 1)) - 1);
    out.push_back(g.mul(g.mul(a, w.values[(std::size_t{1} << k) - 1]), b));
  }
  return out;
}

/// Depth at which the essential-value check is expected to see the whole group.
inline std::size_t essential_depth(std::size_t order) {
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < 8 * order) ++bits;
  return std::max<std::size_t>(9, bits + 2);
}

/// Products along the times t <= 2^(m-1) at which the shifted window agrees
/// with the window on [0, radius).
inline std::set<Element> essential_values_check(const FiniteGroup& g, const std::vector<Element>& enumeration,
                                                std::size_t m, std::size_t radius) {
  auto w = generate_window(g, enumeration, m);
  const std::size_t horizon = std::size_t{1} << (m - 1);
  if (radius > horizon) throw std::invalid_argument("agreement radius exceeds half the window");
  std::set<Element> out;
  Element p = 0;
  for (std::size_t t = 0; t <= horizon; ++t) {
    if (t > 0) p = g.mul(w.values[t - 1], p);
    if (std::equal(w.values.begin(), w.values.begin() + static_cast<std::ptrdiff_t>(radius),
                   w.values.begin() + static_cast<std::ptrdiff_t>(t)))
      out.insert(p);
  }
  return out;
}

/// Density of positions filled by stages <= k, for k = 0..depth.
inline std::vector<Rational> regularity_profile(const ToeplitzWindow& w) {
  std::vector<std::size_t> count(w.depth + 1, 0);
  for (auto s : w.stage_of) ++count[s];
  std::vector<Rational> out;
  std::size_t cumulative = 0;
  for (std::size_t k = 0; k <= w.depth; ++k) {
    cumulative += count[k];
    Rational r(static_cast<long>(cumulative), static_cast<long>(w.values.size()));
    r.canonicalize();
    out.push_back(r);
  }
  return out;
}

}  // namespace relcoh
