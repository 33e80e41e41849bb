#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "relcoh/abelian.hpp"
#include "relcoh/cochain.hpp"
#include "relcoh/fg_group.hpp"
#include "relcoh/groups.hpp"
#include "relcoh/integer.hpp"
#include "relcoh/matrix.hpp"
#include "relcoh/smith.hpp"

namespace relcoh {

using RationalVector = std::vector<Rational>;

/// lim(Z^d, A) with a distinguished unit; elements are pairs (level, vector)
/// with (n, v) ~ (n + 1, A v).
class StationaryLimit {
 public:
  StationaryLimit(ExactMatrix a, IntVector unit) : a_(std::move(a)), unit_(std::move(unit)) {
    if (a_.rows() != a_.cols()) throw std::invalid_argument("stationary matrix must be square");
    if (unit_.size() != a_.rows()) throw std::invalid_argument("unit has the wrong length");
    if (determinant(a_).is_zero()) throw std::invalid_argument("stationary matrix must be nonsingular");
  }

  const ExactMatrix& matrix() const noexcept { return a_; }
  const IntVector& unit() const noexcept { return unit_; }
  std::size_t dimension() const noexcept { return a_.rows(); }

 private:
  ExactMatrix a_;
  IntVector unit_;
};

struct LimitElement {
  std::size_t level = 0;
  IntVector vector;
};

/// A map r : lim(Z^e, B) -> lim(Z^d, A) with R B = A R and R e_B = e_A.
class Intertwiner {
 public:
  Intertwiner(StationaryLimit source, StationaryLimit target, ExactMatrix r)
      : source_(std::move(source)), target_(std::move(target)), r_(std::move(r)) {
    if (r_.rows() != target_.dimension() || r_.cols() != source_.dimension())
      throw std::invalid_argument("intertwiner has the wrong shape");
    if (!(r_ * source_.matrix() == target_.matrix() * r_)) throw std::invalid_argument("intertwiner fails R*B == A*R");
    if (r_ * source_.unit() != target_.unit()) throw std::invalid_argument("intertwiner does not map unit to unit");
  }

  const StationaryLimit& source() const noexcept { return source_; }
  const StationaryLimit& target() const noexcept { return target_; }
  const ExactMatrix& map() const noexcept { return r_; }

 private:
  StationaryLimit source_;
  StationaryLimit target_;
  ExactMatrix r_;
};

inline bool element_equal(const StationaryLimit& lim, const LimitElement& x, const LimitElement& y) {
  if (x.vector.size() != lim.dimension() || y.vector.size() != lim.dimension())
    throw std::invalid_argument("element has the wrong length");
  // A is injective, so comparing at the higher of the two levels is decisive.
  IntVector u = x.vector, v = y.vector;
  for (std::size_t l = x.level; l < y.level; ++l) u = lim.matrix() * u;
  for (std::size_t l = y.level; l < x.level; ++l) v = lim.matrix() * v;
  return u == v;
}

/// Decides whether A^n v is integral for some n >= 0.
///
/// Writes A^n v = w_n / D_n in lowest terms. The pair (D_n, w_n mod D_n)
/// determines the next pair and denominators never grow, so the orbit of
/// states is finite: either D_n reaches 1 or a state repeats.
inline bool membership_in_limit(const StationaryLimit& lim, const RationalVector& v) {
  if (v.size() != lim.dimension()) throw std::invalid_argument("vector has the wrong length");
  auto reduce = [](const RationalVector& x) {
    mpz_class den = 1;
    for (const auto& q : x) den = lcm(den, mpz_class(q.get_den()));
    std::vector<mpz_class> num;
    mpz_class g = den;
    for (const auto& q : x) {
      mpz_class n = q.get_num() * (den / q.get_den());
      num.push_back(n);
      g = gcd(g, n);
    }
    den /= g;
    for (auto& n : num) {
      n /= g;
      n %= den;
      if (n < 0) n += den;
    }
    return std::make_pair(den, num);
  };
  std::set<std::pair<mpz_class, std::vector<mpz_class>>> seen;
  auto state = reduce(v);
  const std::size_t d = lim.dimension();
  while (state.first != 1) {
    if (!seen.insert(state).second) return false;
    RationalVector next(d);
    for (std::size_t i = 0; i < d; ++i) {
      mpz_class s = 0;
      lim.matrix().for_each_in_row(i, [&](std::size_t j, const Integer& a) { s += a.to_mpz() * state.second[j]; });
      next[i] = Rational(s, state.first);
      next[i].canonicalize();
    }
    state = reduce(next);
  }
  return true;
}

/// Direct test of the set condition: exists n with 2^n a in Z and
/// 2^n a == (-1)^n b (mod 3). The congruence has period 2 in n beyond the
/// 2-adic valuation n0 of a's denominator, so n0 and n0 + 1 suffice.
inline bool fact_set_member(const Rational& a, const Integer& b) {
  mpz_class den = a.get_den();
  std::size_t n0 = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++n0;
  }
  if (den != 1) return false;
  for (std::size_t n = n0; n <= n0 + 1; ++n) {
    mpz_class scaled = a.get_num();
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), n);
    scaled /= a.get_den();
    mpz_class rhs = (n % 2 == 0 ? 1 : -1) * b.to_mpz();
    mpz_class diff = scaled - rhs;
    if (diff % 3 == 0) return true;
  }
  return false;
}

namespace detail {

/// Coordinates in which Z^d / im(R) is canonical: x -> u x, keeping the
/// rows that carry torsion or free generators.
struct CanonicalCokernel {
  FgAbGroup group;
  ExactMatrix project;  // generator_count x d
  ExactMatrix lift;     // d x generator_count, project * lift == id on the group
};

inline CanonicalCokernel canonical_cokernel(const ExactMatrix& r) {
  SmithForm s = snf(r);
  std::size_t d = r.rows();
  IntVector diag = s.diagonal();
  std::vector<std::size_t> keep;
  IntVector orders;
  for (std::size_t i = 0; i < d; ++i) {
    Integer di = i < diag.size() ? diag[i] : Integer(0);
    if (di.is_unit()) continue;
    keep.push_back(i);
    orders.push_back(di);
  }
  // Canonical order: torsion first (already sorted by divisibility), free last.
  std::stable_partition(keep.begin(), keep.end(), [&](std::size_t i) {
    return i < diag.size() && !diag[i].is_zero();
  });
  FgAbGroup group(orders);
  std::vector<IntVector> proj;
  for (auto i : keep) {
    IntVector row(d);
    for (std::size_t j = 0; j < d; ++j) row[j] = s.u.at(i, j);
    proj.push_back(row);
  }
  // u^{-1} columns lift generators back to Z^d.
  std::vector<IntVector> lift_cols;
  for (auto i : keep) {
    IntVector e(d);
    e[i] = Integer(1);
    auto x = solve_integer(s.u, e);
    lift_cols.push_back(*x);
  }
  return {group, ExactMatrix::from_rows(keep.size(), d, proj), from_columns(d, lift_cols)};
}

}  // namespace detail

/// lim(Z^d, A) / R lim(Z^e, B): the direct limit of coker(R) under the map
/// induced by A (well defined because A R Z^e = R B Z^e lies in R Z^e).
inline LimitOutcome quotient_by_intertwiner(const Intertwiner& t) {
  auto cc = detail::canonical_cokernel(t.map());
  ExactMatrix induced = cc.project * t.target().matrix() * cc.lift;
  // Reduce torsion coordinates modulo their orders to keep entries small.
  auto orders = cc.group.relation_orders();
  std::vector<IntVector> rows = induced.to_rows();
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (!orders[i].is_zero())
      for (auto& x : rows[i]) x = mod_floor(x, orders[i]);
  AbHom phi(cc.group, cc.group, ExactMatrix::from_rows(rows.size(), rows.size(), rows));
  return direct_limit_endo(cc.group, phi);
}

/// torsion(lim / Z e): the rational eigenvalue group of the system.
///
/// Needs A e = c e (the unit spans a one-dimensional intertwined source
/// lim(Z, [c])). Then q e lies in the limit iff c^n q content(e) is integral
/// for some n, so the group is (1/content(e)) Z[1/c] / Z: cyclic of order
/// content(e) when |c| = 1, otherwise not finitely generated, with level k
/// contributing Z / (content(e) |c|^k).
inline LimitOutcome rational_eigenvalue_group(const StationaryLimit& lim, std::size_t levels = 4) {
  const IntVector& e = lim.unit();
  Integer content(0);
  for (const auto& x : e) content = gcd(content, x);
  if (content.is_zero()) throw std::invalid_argument("unit must be nonzero");
  IntVector ae = lim.matrix() * e;
  std::optional<Integer> c;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i].is_zero()) {
      if (!ae[i].is_zero()) throw std::domain_error("unit is not compatible with a one-dimensional intertwined source");
      continue;
    }
    if (!(ae[i] % e[i]).is_zero()) throw std::domain_error("unit is not compatible with a one-dimensional intertwined source");
    Integer ci = ae[i] / e[i];
    if (c && *c != ci) throw std::domain_error("unit is not compatible with a one-dimensional intertwined source");
    c = ci;
  }
  // Validates the one-dimensional source lim(Z, [c]) -> lim.
  Intertwiner(StationaryLimit(ExactMatrix::from_rows({{*c}}), {Integer(1)}), lim, ExactMatrix::column(e));

  LimitOutcome out;
  Integer scale = abs(*c);
  Integer order = content;
  for (std::size_t k = 0; k < levels; ++k) {
    out.levels.push_back(FgAbGroup::cyclic(order));
    order *= scale;
  }
  if (scale.is_unit()) {
    out.group = FgAbGroup::cyclic(content);
    return out;
  }
  out.kind = LimitOutcome::Kind::non_finitely_generated;
  out.witness_basis = {IntVector{Integer(1)}};
  out.witness_action = ExactMatrix::from_rows({{*c}});
  return out;
}

/// Prefix of the Morse fixed point and its derived sequences.
struct MorseWindow {
  std::vector<int> word;   // sigma^m(0), length 2^m
  std::vector<int> code;   // z_i = x_i + x_{i+1} mod 2, length 2^m - 1
  std::vector<bool> cocycle_holds;  // per position i < 2^m - 1
};

/// x_{i+1} - x_i = z_i - 2 [x_i = 1, x_{i+1} = 0] at every interior position.
inline MorseWindow morse_window(std::size_t m) {
  if (m < 1) throw std::invalid_argument("morse_window needs m >= 1");
  MorseWindow w;
  w.word = {0};
  for (std::size_t s = 0; s < m; ++s) {
    std::vector<int> next;
    for (int x : w.word) {
      next.push_back(x);
      next.push_back(1 - x);
    }
    w.word = std::move(next);
  }
  for (std::size_t i = 0; i + 1 < w.word.size(); ++i) {
    int x0 = w.word[i], x1 = w.word[i + 1];
    int z = (x0 + x1) % 2;
    w.code.push_back(z);
    int h_shift = x1 - x0;                  // h(Tx) - h(x), h(x) = x_0
    int indicator = (x0 == 1 && x1 == 0);   // 1_[10](x)
    w.cocycle_holds.push_back(h_shift == z - 2 * indicator);
  }
  return w;
}

/// The Morse data: X (matrix A), Z (matrix B), odometer Y ([2]).
namespace morse {

inline StationaryLimit system_x() { return {ExactMatrix::from_rows({{0, 2}, {1, 1}}), {Integer(2), Integer(2)}}; }
inline StationaryLimit system_z() { return {ExactMatrix::from_rows({{1, 2}, {1, 0}}), {Integer(2), Integer(1)}}; }
inline StationaryLimit odometer() { return {ExactMatrix::from_rows({{2}}), {Integer(1)}}; }
inline ExactMatrix r_matrix() { return ExactMatrix::from_rows({{2, -2}, {0, 2}}); }

inline Intertwiner r_star() { return {system_z(), system_x(), r_matrix()}; }
inline Intertwiner q_star() { return {odometer(), system_z(), ExactMatrix::column({Integer(2), Integer(1)})}; }
inline Intertwiner p_star() { return {odometer(), system_x(), ExactMatrix::column({Integer(2), Integer(2)})}; }

/// (a, b) -> ((a + 2b)/3, (a - b)/3), the coordinates of the explicit set description of K0(X).
inline RationalVector fact_coordinates(const Rational& a, const Integer& b) {
  Rational bq = to_rational(b);
  Rational x = (a + 2 * bq) / 3, y = (a - bq) / 3;
  x.canonicalize();
  y.canonicalize();
  return {x, y};
}

}  // namespace morse

struct CheckLine {
  std::string name;
  std::string value;
  bool pass = false;
};

struct MorseReport {
  std::vector<CheckLine> checks;
  std::string quotient_xz;
  std::string quotient_zy;
  std::string quotient_xy;
  std::string h0_xz;
  std::string h0_xy;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

inline std::string outcome_string(const LimitOutcome& o) {
  return o.finitely_generated() ? o.group.to_string() : "not finitely generated";
}

/// Recomputes the Morse example end to end and checks each identity.
inline MorseReport morse_report(std::size_t samples = 200) {
  MorseReport rep;
  auto add = [&](std::string name, std::string value, bool pass) { rep.checks.push_back({std::move(name), std::move(value), pass}); };

  const auto x = morse::system_x(), z = morse::system_z();
  const auto r = morse::r_matrix();
  add("R*B == A*R", "", r * z.matrix() == x.matrix() * r);
  add("R*e_Z == e_X", "", r * z.unit() == x.unit());

  auto qxz = quotient_by_intertwiner(morse::r_star());
  auto qzy = quotient_by_intertwiner(morse::q_star());
  auto qxy = quotient_by_intertwiner(morse::p_star());
  rep.quotient_xz = outcome_string(qxz);
  rep.quotient_zy = outcome_string(qzy);
  rep.quotient_xy = outcome_string(qxy);
  add("K0(X)/r*K0(Z)", rep.quotient_xz, qxz.finitely_generated() && qxz.group == FgAbGroup::cyclic(2));
  add("K0(Z)/q*K0(Y)", rep.quotient_zy, qzy.finitely_generated() && qzy.group == FgAbGroup::free(1));
  add("K0(X)/p*K0(Y)", rep.quotient_xy, qxy.finitely_generated() && qxy.group == FgAbGroup::free(1));

  // X -> Z is the Z2 extension by the code cocycle, with full Mackey group.
  FgAbGroup h2 = group_cohomology(builtin::cyclic(2), 2);
  FgAbGroup h0_xz = relative_cohomology_isometric(builtin::cyclic(2), {}, 0);
  rep.h0_xz = h0_xz.to_string();
  FgAbGroup tors_xz = torsion_part(qxz.group);
  add("torsion(K0(X)/r*K0(Z)) == H^2(Z2) == H^0(X|Z)", rep.h0_xz, tors_xz == h2 && h2 == h0_xz);
  FgAbGroup tors_xy = torsion_part(qxy.group);
  rep.h0_xy = tors_xy.to_string();
  add("torsion(K0(X)/p*K0(Y)) == 0 == H^0(X|Y)", rep.h0_xy, tors_xy.is_trivial());

  auto w = morse_window(6);
  bool cocycle = true;
  for (bool b : w.cocycle_holds) cocycle = cocycle && b;
  add("cocycle identity on the 2^6 window", "", cocycle);

  // The explicit set description against A^{-n} Z^2 membership.
  bool agree = true;
  std::size_t tried = 0;
  for (int den : {1, 2, 4, 8, 3, 6, 12}) {
    for (int num = -12; num <= 12 && tried < samples; ++num) {
      for (int b = -3; b <= 3 && tried < samples; ++b, ++tried) {
        Rational a(num, den);
        a.canonicalize();
        agree = agree && membership_in_limit(x, morse::fact_coordinates(a, b)) == fact_set_member(a, b);
      }
    }
  }
  add("set description agrees with the limit (" + std::to_string(tried) + " samples)", "", agree);
  // alpha = [1_[10]] is the vector (0, 1), i.e. a = 2, b = -1.
  add("alpha = (0,1) lies in K0(X)", "", fact_set_member(Rational(2), Integer(-1)) &&
      morse::fact_coordinates(Rational(2), Integer(-1)) == RationalVector{Rational(0), Rational(1)});
  return rep;
}

}  // namespace relcoh
