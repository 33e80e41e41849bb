#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "relcoh/integer.hpp"
#include "relcoh/matrix.hpp"

using namespace relcoh;

namespace {

mpz_class big(std::int64_t v) { return mpz_class(std::to_string(v)); }

// Cofactor expansion, for comparison with the Bareiss determinant.
Integer cofactor_det(const std::vector<IntVector>& a) {
  std::size_t n = a.size();
  if (n == 0) return Integer(1);
  if (n == 1) return a[0][0];
  Integer total(0);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<IntVector> minor;
    for (std::size_t i = 1; i < n; ++i) {
      IntVector row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(a[i][k]);
      minor.push_back(row);
    }
    Integer term = a[0][j] * cofactor_det(minor);
    total += j % 2 ? -term : term;
  }
  return total;
}

}  // namespace

TEST(Integer, ArithmeticMatchesGmpAcrossOverflow) {
  std::mt19937_64 rng(1);
  const std::int64_t edge[] = {0, 1, -1, 2, -2, std::numeric_limits<std::int64_t>::max(),
                               std::numeric_limits<std::int64_t>::min(), 1ll << 32, -(1ll << 31), 3037000500ll};
  std::vector<std::int64_t> values(std::begin(edge), std::end(edge));
  for (int i = 0; i < 40; ++i) values.push_back(static_cast<std::int64_t>(rng()));
  for (auto a : values)
    for (auto b : values) {
      Integer x(a), y(b);
      EXPECT_EQ((x + y).to_mpz(), big(a) + big(b));
      EXPECT_EQ((x - y).to_mpz(), big(a) - big(b));
      EXPECT_EQ((x * y).to_mpz(), big(a) * big(b));
      if (b != 0) {
        mpz_class q, r;
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), big(a).get_mpz_t(), big(b).get_mpz_t());
        EXPECT_EQ((x / y).to_mpz(), q);
        EXPECT_EQ((x % y).to_mpz(), r);
        mpz_class f;
        mpz_fdiv_q(f.get_mpz_t(), big(a).get_mpz_t(), big(b).get_mpz_t());
        EXPECT_EQ(div_floor(x, y).to_mpz(), f);
      }
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), big(a).get_mpz_t(), big(b).get_mpz_t());
      EXPECT_EQ(gcd(x, y).to_mpz(), g);
    }
}

TEST(Integer, ParseAndPrint) {
  EXPECT_EQ(Integer::parse("-123456789012345678901234567890").to_string(), "-123456789012345678901234567890");
  EXPECT_EQ(Integer::parse("+42"), Integer(42));
  EXPECT_THROW(Integer::parse("12a"), std::invalid_argument);
  EXPECT_THROW(Integer::parse(""), std::invalid_argument);
}

TEST(Integer, DemotesWhenSmallAgain) {
  Integer x(std::numeric_limits<std::int64_t>::max());
  Integer y = x + Integer(1);
  EXPECT_FALSE(y.is_small());
  EXPECT_TRUE((y - Integer(1)).is_small());
  EXPECT_TRUE((y - Integer(1)).fits_int64());
}

TEST(Integer, ExtendedGcdAndValuation) {
  auto e = ext_gcd(Integer(240), Integer(46));
  EXPECT_EQ(e.g, Integer(2));
  EXPECT_EQ(e.s * Integer(240) + e.t * Integer(46), Integer(2));
  EXPECT_EQ(valuation(Integer(96), Integer(2)), 5u);
  EXPECT_EQ(lcm(Integer(4), Integer(6)), Integer(12));
}

TEST(ExactMatrix, StorageIsInvisible) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t r = 1 + rng() % 6, k = 1 + rng() % 6, c = 1 + rng() % 6;
    auto fill = [&](std::size_t rows, std::size_t cols) {
      std::vector<IntVector> a(rows, IntVector(cols));
      for (auto& row : a)
        for (auto& x : row) x = Integer(rng() % 3 ? 0 : static_cast<std::int64_t>(rng() % 11) - 5);
      return ExactMatrix::from_rows(rows, cols, a);
    };
    ExactMatrix a = fill(r, k), b = fill(k, c);
    auto ad = a.with_storage(ExactMatrix::Storage::dense), as = a.with_storage(ExactMatrix::Storage::sparse);
    auto bd = b.with_storage(ExactMatrix::Storage::dense), bs = b.with_storage(ExactMatrix::Storage::sparse);
    EXPECT_EQ(ad, as);
    EXPECT_EQ(ad * bd, as * bs);
    EXPECT_EQ(ad * bs, as * bd);
    EXPECT_EQ(a.transpose().transpose(), a);
    // Entry-wise product oracle.
    auto p = a * b;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        Integer s(0);
        for (std::size_t t = 0; t < k; ++t) s += a.at(i, t) * b.at(t, j);
        EXPECT_EQ(p.at(i, j), s);
      }
  }
}

TEST(ExactMatrix, TripletsSumDuplicatesAndDropZeros) {
  auto m = ExactMatrix::from_triplets(2, 2, {{0, 1, Integer(3)}, {0, 1, Integer(-3)}, {1, 0, Integer(2)}, {1, 0, Integer(5)}});
  EXPECT_EQ(m.nonzeros(), 1u);
  EXPECT_EQ(m.at(1, 0), Integer(7));
  EXPECT_THROW(ExactMatrix::from_triplets(1, 1, {{1, 0, Integer(1)}}), std::out_of_range);
  EXPECT_THROW(ExactMatrix::from_rows({{1, 2}, {3}}), std::invalid_argument);
}

TEST(ExactMatrix, DeterminantAgreesWithCofactors) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + rng() % 5;
    std::vector<IntVector> a(n, IntVector(n));
    for (auto& row : a)
      for (auto& x : row) x = Integer(static_cast<std::int64_t>(rng() % 21) - 10);
    EXPECT_EQ(determinant(ExactMatrix::from_rows(n, n, a)), cofactor_det(a));
  }
}
