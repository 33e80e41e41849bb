#include <gtest/gtest.h>

#include <random>

#include "relcoh/dimlim.hpp"

using namespace relcoh;

TEST(StationaryLimit, Validation) {
  EXPECT_THROW(StationaryLimit(ExactMatrix::from_rows({{1, 2}, {2, 4}}), {Integer(1), Integer(1)}), std::invalid_argument);
  EXPECT_THROW(StationaryLimit(ExactMatrix::from_rows({{1, 2}}), {Integer(1)}), std::invalid_argument);
  EXPECT_THROW(StationaryLimit(ExactMatrix::from_rows({{2}}), {Integer(1), Integer(1)}), std::invalid_argument);
}

TEST(StationaryLimit, ElementEquality) {
  auto x = morse::system_x();
  LimitElement a{0, {Integer(1), Integer(0)}};
  LimitElement b{1, x.matrix() * a.vector};
  LimitElement c{2, x.matrix() * (x.matrix() * a.vector)};
  EXPECT_TRUE(element_equal(x, a, b));
  EXPECT_TRUE(element_equal(x, c, a));
  EXPECT_FALSE(element_equal(x, a, LimitElement{1, a.vector}));
}

TEST(Intertwiner, Validation) {
  EXPECT_NO_THROW(morse::r_star());
  EXPECT_THROW(Intertwiner(morse::system_z(), morse::system_x(), ExactMatrix::identity(2)), std::invalid_argument);
  // Intertwines but misses the unit.
  EXPECT_THROW(Intertwiner(morse::odometer(), morse::odometer(), ExactMatrix::from_rows({{3}})), std::invalid_argument);
}

TEST(Morse, Quotients) {
  EXPECT_EQ(outcome_string(quotient_by_intertwiner(morse::r_star())), "Z/2");
  EXPECT_EQ(outcome_string(quotient_by_intertwiner(morse::q_star())), "Z");
  EXPECT_EQ(outcome_string(quotient_by_intertwiner(morse::p_star())), "Z");
}

TEST(Morse, SetDescriptionMatchesMembership) {
  // Membership for x = (p, q)/2^k in lim(Z^2, A) by brute force: A^n x integral for some n <= 3k + 6.
  auto x = morse::system_x();
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    int k = static_cast<int>(rng() % 4);
    Rational a(static_cast<long>(rng() % 41) - 20, 1L << k);
    a.canonicalize();
    Integer b(static_cast<std::int64_t>(rng() % 13) - 6);
    RationalVector v = morse::fact_coordinates(a, b);
    bool brute = false;
    RationalVector w = v;
    for (int n = 0; n <= 3 * k + 6 && !brute; ++n) {
      brute = w[0].get_den() == 1 && w[1].get_den() == 1;
      RationalVector next(2);
      for (std::size_t i = 0; i < 2; ++i) {
        next[i] = to_rational(x.matrix().at(i, 0)) * w[0] + to_rational(x.matrix().at(i, 1)) * w[1];
        next[i].canonicalize();
      }
      w = next;
    }
    EXPECT_EQ(membership_in_limit(x, v), brute);
    EXPECT_EQ(fact_set_member(a, b), brute);
  }
}

TEST(Morse, ReportPasses) {
  auto rep = morse_report();
  for (const auto& c : rep.checks) EXPECT_TRUE(c.pass) << c.name;
  EXPECT_TRUE(rep.all_pass());
}

TEST(Morse, Window) {
  auto w = morse_window(3);
  EXPECT_EQ(w.word, (std::vector<int>{0, 1, 1, 0, 1, 0, 0, 1}));
  EXPECT_EQ(w.code, (std::vector<int>{1, 0, 1, 1, 1, 0, 1}));
  for (bool b : w.cocycle_holds) EXPECT_TRUE(b);
  EXPECT_THROW(morse_window(0), std::invalid_argument);
}

TEST(RationalEigenvalues, OdometerAndFixedUnit) {
  auto dyadic = rational_eigenvalue_group(morse::odometer());
  EXPECT_FALSE(dyadic.finitely_generated());
  ASSERT_EQ(dyadic.levels.size(), 4u);
  EXPECT_EQ(dyadic.levels[0], FgAbGroup());
  EXPECT_EQ(dyadic.levels[3], FgAbGroup::cyclic(8));

  StationaryLimit rotation(ExactMatrix::from_rows({{0, 1}, {1, 0}}), {Integer(3), Integer(3)});
  auto fixed = rational_eigenvalue_group(rotation);
  ASSERT_TRUE(fixed.finitely_generated());
  EXPECT_EQ(fixed.group, FgAbGroup::cyclic(3));

  auto x = rational_eigenvalue_group(morse::system_x());
  EXPECT_FALSE(x.finitely_generated());
  EXPECT_EQ(x.levels[1], FgAbGroup::cyclic(4));
  StationaryLimit shear(ExactMatrix::from_rows({{1, 1}, {0, 1}}), {Integer(0), Integer(1)});
  EXPECT_THROW(rational_eigenvalue_group(shear), std::domain_error);
}

TEST(Morse, MembershipExamples) {
  auto x = morse::system_x();
  EXPECT_TRUE(element_equal(x, {0, {Integer(2), Integer(2)}}, {1, {Integer(4), Integer(4)}}));
  EXPECT_FALSE(element_equal(x, {0, {Integer(1), Integer(0)}}, {0, {Integer(0), Integer(1)}}));
  EXPECT_TRUE(membership_in_limit(x, {Rational(2), Rational(2)}));
  EXPECT_TRUE(membership_in_limit(x, {Rational(1, 2), Rational(1, 2)}));
  EXPECT_FALSE(membership_in_limit(x, {Rational(1, 3), Rational(0)}));
  EXPECT_TRUE(fact_set_member(Rational(6), Integer(0)));
  EXPECT_EQ(morse::fact_coordinates(Rational(6), Integer(0)), (RationalVector{Rational(2), Rational(2)}));
  EXPECT_TRUE(fact_set_member(Rational(2), Integer(-1)));
  EXPECT_FALSE(fact_set_member(Rational(1, 3), Integer(0)));
  EXPECT_TRUE(rational_eigenvalue_group(StationaryLimit(ExactMatrix::from_rows({{1}}), {Integer(1)})).group.is_trivial());
}
