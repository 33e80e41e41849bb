#include <gtest/gtest.h>

#include <algorithm>

#include "relcoh/cochain.hpp"

using namespace relcoh;

namespace {

FgAbGroup cyclic_sum(std::initializer_list<int> orders) {
  std::vector<Integer> v;
  for (int o : orders) v.push_back(Integer(o));
  return FgAbGroup(v);
}

// Homology from integer Smith forms alone, for comparison with the certified path.
FgAbGroup homology_by_elimination(const InvariantChain& chain, std::size_t m) {
  std::size_t dim = chain.basis(m).size();
  auto out = smith_invariants(chain.differential(m));
  if (m == 1) return FgAbGroup({}, dim - out.rank);
  auto in = smith_invariants(chain.differential(m - 1));
  return FgAbGroup(in.torsion, dim - out.rank - in.rank);
}

}  // namespace

TEST(Cochain, DifferentialSquaresToZero) {
  for (const char* name : {"Z3", "S3", "Q8"}) {
    auto g = builtin::by_name(name);
    for (auto basis : {ChainBasis::full, ChainBasis::normalized}) {
      for (const auto& h : std::vector<std::vector<Element>>{{}, {1}}) {
        InvariantChain chain(coset_space(g, h), 4, basis);
        for (std::size_t m = 1; m < 4; ++m) EXPECT_TRUE((chain.differential(m + 1) * chain.differential(m)).is_zero()) << name;
      }
    }
  }
}

TEST(Cochain, HomotopyIdentityAsMatrices) {
  for (const char* name : {"Z4", "S3"}) {
    auto g = builtin::by_name(name);
    CosetSpace k = regular_space(g);
    std::vector<OrbitBasis> b;
    for (std::size_t m = 1; m <= 5; ++m) b.emplace_back(k, m);
    for (std::size_t m = 2; m <= 3; ++m) {
      // Bases are indexed from level 1, so b[m-1] is I(K^m).
      auto d_prev = differential_matrix(b[m - 2], b[m - 1]);
      auto d_here = differential_matrix(b[m - 1], b[m]);
      auto h_here = homotopy_matrix(b[m - 1], b[m - 2]);
      auto h_next = homotopy_matrix(b[m], b[m - 1]);
      auto lhs = d_prev * h_here + h_next * d_here;
      EXPECT_EQ(lhs, ExactMatrix::identity(b[m - 1].size()).scaled(Integer(static_cast<std::int64_t>(k.size()))));
    }
  }
}

TEST(Cochain, CertifiedHomologyMatchesElimination) {
  for (const char* name : {"Z2", "Z4", "Z6", "S3", "D4"}) {
    auto g = builtin::by_name(name);
    for (auto basis : {ChainBasis::full, ChainBasis::normalized}) {
      InvariantChain chain(regular_space(g), 4, basis);
      for (std::size_t m = 1; m <= 4; ++m) {
        if (m > 1) {
          EXPECT_TRUE(homotopy_certificate(chain, m));
        }
        EXPECT_EQ(homology_at(chain, m), homology_by_elimination(chain, m)) << name << " m=" << m;
      }
    }
  }
}

TEST(Cochain, FullAndNormalizedAgree) {
  for (const char* name : {"Z2", "Z3", "Z4", "S3", "Q8"}) {
    auto g = builtin::by_name(name);
    for (std::size_t n = 0; n <= 3; ++n)
      EXPECT_EQ(group_cohomology(g, n, default_tuple_cap, ChainBasis::full),
                group_cohomology(g, n, default_tuple_cap, ChainBasis::normalized))
          << name << " n=" << n;
    EXPECT_EQ(relative_cohomology_isometric(g, {1}, 0, default_tuple_cap, ChainBasis::full),
              relative_cohomology_isometric(g, {1}, 0, default_tuple_cap, ChainBasis::normalized));
  }
}

TEST(Cochain, KnownGroupCohomology) {
  EXPECT_EQ(group_cohomology(builtin::cyclic(5), 0), FgAbGroup::free(1));
  EXPECT_EQ(group_cohomology(builtin::symmetric(3), 1), FgAbGroup());
  EXPECT_EQ(group_cohomology(builtin::symmetric(3), 4), cyclic_sum({6}));
  EXPECT_EQ(group_cohomology(builtin::dihedral4(), 3), cyclic_sum({2}));
  EXPECT_EQ(group_cohomology(builtin::dihedral4(), 4), cyclic_sum({2, 2, 4}));
  EXPECT_EQ(group_cohomology(builtin::quaternion(), 3), FgAbGroup());
  EXPECT_EQ(group_cohomology(builtin::quaternion(), 4), cyclic_sum({8}));
  EXPECT_EQ(group_cohomology(builtin::alternating(4), 3), cyclic_sum({2}));
  EXPECT_EQ(group_cohomology(builtin::symmetric(4), 3), cyclic_sum({2}));
}

TEST(Cochain, RelativeWithProperSubgroup) {
  // K = S3 / <transposition> has three points.
  auto s3 = builtin::symmetric(3);
  auto t = s3.find_permutation({1, 0, 2});
  ASSERT_TRUE(t);
  FgAbGroup r = relative_cohomology_isometric(s3, {*t}, 0);
  EXPECT_TRUE(r.is_finite());
  for (const auto& f : r.invariant_factors()) EXPECT_TRUE((Integer(6) % f).is_zero());
  EXPECT_EQ(r, FgAbGroup());
  // H = G leaves a one-point fibre and nothing in positive levels.
  EXPECT_EQ(relative_cohomology_isometric(s3, {0, 1, 2, 3, 4, 5}, 2), FgAbGroup());
}

TEST(Cochain, CapRefusal) {
  try {
    group_cohomology(builtin::symmetric(5), 4);
    FAIL() << "expected a refusal";
  } catch (const CapExceeded& e) {
    EXPECT_EQ(e.reason(), "tuple_cap");
  }
  EXPECT_THROW(relative_cohomology_isometric(builtin::cyclic(12), {}, 2, 1000), CapExceeded);
  EXPECT_THROW(InvariantChain(regular_space(builtin::cyclic(2)), 0), std::invalid_argument);
}

TEST(Cochain, OrbitBasisLookup) {
  auto s3 = builtin::symmetric(3);
  CosetSpace k = regular_space(s3);
  OrbitBasis b(k, 3);
  EXPECT_EQ(b.size(), 36u);
  for (std::size_t o = 0; o < b.size(); ++o) {
    auto members = b.members(o);
    EXPECT_EQ(members.size(), 6u);
    for (const auto& t : members) EXPECT_EQ(b.index_of(t), o);
    EXPECT_EQ(b.representative(o)[0], 0u);
  }
  OrbitBasis n(k, 3, ChainBasis::normalized);
  EXPECT_EQ(n.size(), 25u);
  EXPECT_EQ(n.index_of({0, 0, 1}), OrbitBasis::npos);
}

TEST(Cochain, DifferentialExamples) {
  auto z2 = regular_space(builtin::cyclic(2));
  auto d1 = differential_matrix(z2, 1);
  EXPECT_EQ(d1.rows(), 2u);
  EXPECT_EQ(d1.cols(), 1u);
  EXPECT_TRUE(d1.is_zero());

  auto point = regular_space(builtin::cyclic(1));
  for (std::size_t n = 1; n <= 6; ++n) {
    auto d = differential_matrix(point, n);
    ASSERT_EQ(d.rows(), 1u);
    EXPECT_EQ(d.at(0, 0), Integer(n % 2 == 0 ? 1 : 0)) << n;
  }

  // Entry [O', O] = sum_j (-1)^j [face_j(rep O') in O], evaluated directly.
  OrbitBasis b2(z2, 2), b3(z2, 3);
  auto d2 = differential_matrix(b2, b3);
  ASSERT_EQ(d2.rows(), 4u);
  ASSERT_EQ(d2.cols(), 2u);
  for (std::size_t r = 0; r < b3.size(); ++r) {
    Tuple x = b3.representative(r);
    for (std::size_t c = 0; c < b2.size(); ++c) {
      auto members = b2.members(c);
      std::int64_t s = 0;
      for (std::size_t j = 0; j < 3; ++j) {
        Tuple face;
        for (std::size_t i = 0; i < 3; ++i)
          if (i != j) face.push_back(x[i]);
        if (std::find(members.begin(), members.end(), face) != members.end()) s += j % 2 ? -1 : 1;
      }
      EXPECT_EQ(d2.at(r, c), Integer(s));
    }
  }
}

TEST(Cochain, SecondDifferentialIsInjective) {
  for (const char* name : {"Z2", "Z5", "S3", "D4"}) {
    InvariantChain chain(regular_space(builtin::by_name(name)), 2);
    EXPECT_EQ(rank(chain.differential(2)), chain.basis(2).size()) << name;
    EXPECT_TRUE(chain.differential(1).is_zero());
  }
}
