// Acceptance run: one PASS/FAIL line per criterion. Optional arguments pick
// criteria by number.

#include <algorithm>
#include <bit>
#include <cmath>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <future>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "relcoh/relcoh.hpp"

using namespace relcoh;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  bool skip_when_over_budget;
  std::function<Outcome()> run;
};

// Number of x in the abelian group with d x = 0, for a group given by invariant factors.
std::uint64_t torsion_count(const FgAbGroup& g, std::uint64_t d) {
  std::uint64_t c = 1;
  for (const auto& f : g.invariant_factors()) c *= std::gcd(d, static_cast<std::uint64_t>(f.to_int64()));
  return c;
}

// Finite abelian groups agree iff their d-torsion counts agree for every d.
bool same_torsion_counts(const FgAbGroup& g, const std::vector<std::uint64_t>& counts) {
  for (std::uint64_t d = 1; d < counts.size(); ++d)
    if (torsion_count(g, d) != counts[d]) return false;
  return true;
}

// Abelianization computed from scratch: commutators closed under products,
// then d-torsion counts of the quotient.
std::vector<std::uint64_t> abelianization_counts(const FiniteGroup& g) {
  std::size_t n = g.order();
  std::vector<char> in(n, 0);
  std::vector<Element> sub{0};
  in[0] = 1;
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      Element c = g.mul(g.mul(g.inverse(a), g.inverse(b)), g.mul(a, b));
      if (!in[c]) {
        in[c] = 1;
        sub.push_back(c);
      }
    }
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t i = 0; i < sub.size(); ++i)
      for (std::size_t j = 0; j < sub.size(); ++j) {
        Element c = g.mul(sub[i], sub[j]);
        if (!in[c]) {
          in[c] = 1;
          sub.push_back(c);
          grew = true;
        }
      }
  }
  std::size_t index = n / sub.size();
  std::vector<std::uint64_t> counts(index + 1, 0);
  for (std::uint64_t d = 1; d <= index; ++d) {
    std::size_t hits = 0;
    for (Element x = 0; x < n; ++x) hits += in[g.power(x, d)] != 0;
    counts[d] = hits / sub.size();
  }
  return counts;
}

Outcome cyclic_table() {
  Outcome o;
  for (std::size_t k : {2, 3, 4, 6}) {
    auto g = builtin::cyclic(k);
    for (std::size_t n = 0; n <= 4; ++n) {
      FgAbGroup expected = n == 0 ? FgAbGroup::free(1) : n % 2 == 0 ? FgAbGroup::cyclic(k) : FgAbGroup();
      FgAbGroup got = group_cohomology(g, n);
      o.require(got == expected, "H^" + std::to_string(n) + "(Z" + std::to_string(k) + ") = " + got.to_string());
    }
  }
  return o;
}

Outcome dual_abelianization() {
  Outcome o;
  const std::vector<std::pair<std::string, FgAbGroup>> cases = {
      {"S3", FgAbGroup::cyclic(2)},
      {"S4", FgAbGroup::cyclic(2)},
      {"A4", FgAbGroup::cyclic(3)},
      {"D4", FgAbGroup({Integer(2), Integer(2)})},
      {"Q8", FgAbGroup({Integer(2), Integer(2)})}};
  for (const auto& [name, expected] : cases) {
    auto g = builtin::by_name(name);
    FgAbGroup h2 = group_cohomology(g, 2);
    o.require(h2 == expected, "H^2(" + name + ") = " + h2.to_string());
    o.require(same_torsion_counts(h2, abelianization_counts(g)), "H^2(" + name + ") differs from the dual abelianization");
  }
  return o;
}

Outcome perfect_vanishing() {
  Outcome o;
  InvariantChain chain(regular_space(builtin::alternating(5)), 3, ChainBasis::full);
  const ExactMatrix& d2 = chain.differential(2);
  const ExactMatrix& d3 = chain.differential(3);
  o.require(d3.rows() == 216000 && d3.cols() == 3600, "unexpected differential shape");
  // Torsion of H^2 is the torsion of coker(d_2); its free rank is
  // nullity(d_3) - rank(d_2), and rank(d_3) <= 3600 - rank(d_2) since d_3 d_2 = 0.
  auto inv2 = smith_invariants(d2);
  std::size_t r3 = rank_mod_p(d3);
  o.require(inv2.torsion.empty(), "coker(d_2) has torsion");
  o.require(r3 + inv2.rank == d3.cols(), "H^2(A5) has positive free rank");
  o.require(homotopy_certificate(chain, 3), "homotopy certificate fails");
  o.require(homology_at(chain, 3).is_trivial(), "H^2(A5) is not trivial");
  o.detail = o.pass ? "d_3 216000x3600, rank " + std::to_string(r3) : o.detail;
  return o;
}

Outcome shift_law() {
  Outcome o;
  for (const char* name : {"Z2", "Z3", "S3"}) {
    auto g = builtin::by_name(name);
    for (std::size_t n = 0; n <= 1; ++n) {
      FgAbGroup rel = relative_cohomology_isometric(g, {}, n);
      FgAbGroup abs = group_cohomology(g, n + 2);
      o.require(rel == abs, std::string("H^") + std::to_string(n) + "(X|Y) for " + name + ": " + rel.to_string() +
                                " vs " + abs.to_string());
    }
  }
  return o;
}

Outcome annihilation() {
  Outcome o;
  std::size_t computed = 0;
  for (const auto& name : builtin::standard_names()) {
    auto g = builtin::by_name(name);
    // Trivial H and a subgroup of the smallest prime order.
    std::vector<std::vector<Element>> subgroups{{}};
    std::size_t p = 2;
    while (g.order() % p) ++p;
    for (Element x = 1; x < g.order(); ++x)
      if (g.element_order(x) == p) {
        subgroups.push_back({x});
        break;
      }
    for (const auto& h : subgroups) {
      CosetSpace k = coset_space(g, h);
      for (std::size_t n = 0;; ++n) {
        double tuples = std::pow(static_cast<double>(k.size()), static_cast<double>(n + 3));
        if (tuples > static_cast<double>(default_tuple_cap) || n > 20) break;
        FgAbGroup r = relative_cohomology_isometric(g, h, n);
        ++computed;
        std::string where = "H^" + std::to_string(n) + " for " + name + (h.empty() ? "" : "/<" + std::to_string(h[0]) + ">") + " = " + r.to_string();
        o.require(r.free_rank() == 0, where + " has free part");
        for (const auto& f : r.invariant_factors())
          o.require((Integer(static_cast<std::int64_t>(g.order())) % f).is_zero(), where + " not annihilated by |G|");
      }
    }
  }
  if (o.pass) o.detail = std::to_string(computed) + " relative groups";
  return o;
}

Outcome morse_pipeline() {
  Outcome o;
  auto rep = morse_report();
  o.require(rep.all_pass(), "a morse check failed");
  o.require(rep.quotient_xz == "Z/2", "K0(X)/r*K0(Z) = " + rep.quotient_xz);
  o.require(rep.quotient_zy == "Z", "K0(Z)/q*K0(Y) = " + rep.quotient_zy);
  o.require(rep.quotient_xy == "Z", "K0(X)/p*K0(Y) = " + rep.quotient_xy);
  o.require(rep.h0_xz == "Z/2", "H^0(X|Z) = " + rep.h0_xz);
  o.require(group_cohomology(builtin::cyclic(2), 2) == FgAbGroup::cyclic(2), "H^2(Z2) != Z/2");
  o.require(rep.h0_xy == "0", "torsion of K0(X)/p*K0(Y) = " + rep.h0_xy);
  return o;
}

Outcome morse_symbolic() {
  Outcome o;
  auto w = morse_window(6);
  o.require(w.word.size() == 64, "window length");
  for (std::size_t i = 0; i < w.word.size(); ++i)
    o.require(w.word[i] == std::popcount(i) % 2, "word differs from the binary digit parity at " + std::to_string(i));
  const std::vector<int> prefix{0, 1, 1, 0, 1, 0, 0, 1};
  o.require(std::equal(prefix.begin(), prefix.end(), w.word.begin()), "prefix is not 01101001");
  o.require(w.cocycle_holds.size() == 63, "cocycle positions");
  for (std::size_t i = 0; i < w.cocycle_holds.size(); ++i) {
    int x0 = std::popcount(i) % 2, x1 = std::popcount(i + 1) % 2;
    int z = (x0 + x1) % 2;
    o.require(w.cocycle_holds[i] && x1 - x0 == z - 2 * (x0 == 1 && x1 == 0), "cocycle identity fails at " + std::to_string(i));
  }
  return o;
}

// Structure of a subgroup of (+) Z/g_j, given by membership over all elements.
std::vector<std::uint64_t> subgroup_counts(const std::vector<std::vector<std::int64_t>>& members,
                                           const std::vector<std::int64_t>& moduli, std::uint64_t max_d) {
  std::vector<std::uint64_t> counts(max_d + 1, 0);
  for (std::uint64_t d = 1; d <= max_d; ++d)
    for (const auto& x : members) {
      bool zero = true;
      for (std::size_t i = 0; i < x.size(); ++i) zero = zero && (static_cast<std::int64_t>(d) * x[i]) % moduli[i] == 0;
      counts[d] += zero;
    }
  return counts;
}

Outcome appendix_e() {
  Outcome o;
  std::mt19937_64 rng(20240611);
  auto uniform = [&](int lo, int hi) { return static_cast<int>(lo + rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  auto random_factors = [&](int count) {
    std::vector<Integer> f;
    for (int i = 0; i < count; ++i) f.push_back(Integer(uniform(2, 12)));
    return f;
  };
  for (int trial = 0; trial < 50; ++trial) {
    auto mf = random_factors(uniform(0, 3));
    auto gf = random_factors(uniform(1, 3));
    FgAbGroup m(mf, static_cast<std::size_t>(uniform(0, 2)));
    FgAbGroup g(gf);
    // Tor(Z/a, Z/b) = Z/gcd(a, b), Tor(Z, -) = 0.
    std::vector<Integer> expected;
    for (const auto& a : mf)
      for (const auto& b : gf) expected.push_back(gcd(a, b));
    FgAbGroup t = tor(m, g);
    o.require(t == FgAbGroup(expected), "tor(" + m.to_string() + ", " + g.to_string() + ") = " + t.to_string());
    o.require(t == hom_structure(dual_finite(g), torsion_part(m)), "tor differs from hom(dual G, torsion M)");
    o.require(ext_z(g) == g, "ext_z(" + g.to_string() + ") = " + ext_z(g).to_string());
  }
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t a = static_cast<std::size_t>(uniform(1, 3)), b = static_cast<std::size_t>(uniform(1, 3));
    std::vector<Integer> gf;
    std::int64_t order = 1;
    std::int64_t budget = a == 1 ? 144 : a == 2 ? 144 : 24;
    while (gf.empty() || (order < budget / 2 && uniform(0, 1))) {
      int f = uniform(2, 12);
      if (order * f > budget) break;
      gf.push_back(Integer(f));
      order *= f;
    }
    if (gf.empty()) gf.push_back(Integer(2));
    FgAbGroup g(gf);
    std::vector<IntVector> rows(b, IntVector(a));
    for (auto& r : rows)
      for (auto& x : r) x = Integer(uniform(-6, 6));
    AbHom j(FgAbGroup::free(a), FgAbGroup::free(b), ExactMatrix::from_rows(b, a, rows));
    FgAbGroup k = ker_tensor(j, g);
    // Brute force over G^a with G = (+) Z/g_i.
    std::vector<std::int64_t> moduli;
    for (std::size_t i = 0; i < a; ++i)
      for (const auto& f : g.invariant_factors()) moduli.push_back(f.to_int64());
    std::vector<std::vector<std::int64_t>> kernel;
    std::vector<std::int64_t> x(moduli.size(), 0);
    std::size_t gk = g.invariant_factors().size();
    for (;;) {
      bool zero = true;
      for (std::size_t t = 0; t < b && zero; ++t)
        for (std::size_t c = 0; c < gk && zero; ++c) {
          std::int64_t s = 0;
          for (std::size_t i = 0; i < a; ++i) s += rows[t][i].to_int64() * x[i * gk + c];
          zero = s % moduli[c] == 0;
        }
      if (zero) kernel.push_back(x);
      std::size_t p = 0;
      while (p < x.size() && ++x[p] == moduli[p]) x[p++] = 0;
      if (p == x.size()) break;
    }
    std::uint64_t exp = static_cast<std::uint64_t>(g.exponent().to_int64());
    auto counts = subgroup_counts(kernel, moduli, exp);
    o.require(k.is_finite() && k.order() == Integer(static_cast<std::int64_t>(kernel.size())) && same_torsion_counts(k, counts),
              "ker_tensor over " + g.to_string() + " = " + k.to_string());
  }
  return o;
}

Outcome toeplitz_suite() {
  Outcome o;
  for (const auto& name : builtin::standard_names()) {
    auto g = builtin::by_name(name);
    std::size_t m = essential_depth(g.order());
    for (const auto& u : {default_enumeration(g), scrambled_enumeration(g, 0)}) {
      auto w = generate_window(g, u, m);
      for (std::size_t i = 0; i < w.values.size(); ++i) {
        std::size_t v2 = static_cast<std::size_t>(std::countr_zero(i + 1));
        o.require(w.stage_of[i] == v2, name + ": position " + std::to_string(i) + " filled at the wrong stage");
        o.require(w.values[i] == w.stage_value[v2], name + ": stage value not periodic");
      }
      auto back = construction_identity(g, w);
      for (std::size_t k = 0; k <= m; ++k)
        o.require(back[k] == u[k % g.order()], name + ": a_k g_k b_k != u_k at stage " + std::to_string(k));
    }
    auto ev = essential_values_check(g, scrambled_enumeration(g, 0), m, 1);
    o.require(ev.size() == g.order(), name + ": essential values reach " + std::to_string(ev.size()) + " of " +
                                          std::to_string(g.order()));
  }
  return o;
}

ExactMatrix random_matrix(std::mt19937_64& rng) {
  std::size_t r = 1 + rng() % 8, c = 1 + rng() % 8;
  if (rng() % 3 == 0) c = r;
  std::vector<IntVector> rows(r, IntVector(c));
  bool sparse = rng() % 4 == 0;
  for (auto& row : rows)
    for (auto& x : row) x = Integer(sparse && rng() % 3 ? 0 : static_cast<std::int64_t>(rng() % 41) - 20);
  return ExactMatrix::from_rows(r, c, rows);
}

Outcome linear_algebra() {
  Outcome o;
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    ExactMatrix m = random_matrix(rng);
    SmithForm s = snf(m);
    o.require(s.u * m * s.v == s.d, "U M V != D");
    o.require(abs(determinant(s.u)).is_unit() && abs(determinant(s.v)).is_unit(), "transform not unimodular");
    auto diag = s.diagonal();
    for (std::size_t i = 0; i < diag.size(); ++i) {
      o.require(diag[i].sign() >= 0, "negative diagonal entry");
      if (i + 1 < diag.size())
        o.require(diag[i].is_zero() ? diag[i + 1].is_zero() : (diag[i + 1] % diag[i]).is_zero(), "divisibility chain broken");
    }
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (i != j) o.require(s.d.at(i, j).is_zero(), "off-diagonal entry");
    FgAbGroup coker = cokernel_structure(m);
    if (m.rows() == m.cols()) {
      Integer det = determinant(m);
      if (!det.is_zero()) o.require(coker.is_finite() && coker.order() == abs(det), "cokernel order != |det|");
    }
    o.require(cokernel_structure_sparse(m) == coker, "sparse and dense cokernels differ");
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "cyclic cohomology table", 30, false, cyclic_table},
      {2, "dual abelianization law", 300, false, dual_abelianization},
      {3, "perfect group vanishing H^2(A5) = 0", 1800, true, perfect_vanishing},
      {4, "shift law H^n(X|Y) = H^(n+2)(G)", 300, false, shift_law},
      {5, "annihilation and finiteness of relative groups", 900, false, annihilation},
      {6, "Morse pipeline", 10, false, morse_pipeline},
      {7, "Morse symbolic checks", 1, false, morse_symbolic},
      {8, "Tor, Ext and ker_tensor suite", 30, false, appendix_e},
      {9, "Toeplitz suite", 60, false, toeplitz_suite},
      {10, "linear algebra property suite", 30, false, linear_algebra}};

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  bool all_pass = true;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    auto start = std::chrono::steady_clock::now();
    std::packaged_task<Outcome()> job(c.run);
    auto task = job.get_future();
    std::thread(std::move(job)).detach();
    auto limit = std::chrono::duration<double>(c.budget_seconds);
    if (c.skip_when_over_budget && task.wait_for(limit) == std::future_status::timeout) {
      std::cout << "SKIP criterion " << c.id << ": " << c.name << " [over the " << c.budget_seconds
                << " s budget; not evaluated]" << std::endl;
      continue;
    }
    Outcome out;
    try {
      out = task.get();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_budget = seconds <= c.budget_seconds;
    bool pass = out.pass && in_budget;
    all_pass = all_pass && pass;
    std::ostringstream line;
    line << (pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name;
    line.precision(3);
    line << " (" << std::fixed << seconds << " s";
    if (!in_budget) line << ", budget " << c.budget_seconds << " s exceeded";
    line << ")";
    if (!out.detail.empty()) line << " " << out.detail;
    std::cout << line.str() << std::endl;
  }
  std::cout.flush();
  std::quick_exit(all_pass ? 0 : 1);
}
