#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <limits>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace relcoh {

/// Arbitrary-precision signed integer.
///
/// Values that fit in 64 bits are stored inline; anything larger lives in a
/// GMP integer. Every operation detects overflow of the inline path and
/// promotes, so no result is ever truncated. Results that shrink back into
/// range are demoted, which keeps elimination on small-entry matrices cheap.
class Integer {
 public:
  Integer() noexcept = default;

  template <std::integral T>
  Integer(T v) {  // NOLINT(google-explicit-constructor)
    if constexpr (std::is_signed_v<T> || sizeof(T) < sizeof(std::int64_t)) {
      small_ = static_cast<std::int64_t>(v);
    } else {
      if (v <= static_cast<T>(std::numeric_limits<std::int64_t>::max())) {
        small_ = static_cast<std::int64_t>(v);
      } else {
        mpz_class z;
        mpz_set_ui(z.get_mpz_t(), static_cast<unsigned long>(v));
        big_ = std::make_unique<mpz_class>(std::move(z));
      }
    }
  }

  explicit Integer(const mpz_class& z) { assign(z); }

  Integer(const Integer& o) : small_(o.small_) {
    if (o.big_) big_ = std::make_unique<mpz_class>(*o.big_);
  }
  Integer(Integer&&) noexcept = default;
  Integer& operator=(const Integer& o) {
    if (this != &o) {
      small_ = o.small_;
      big_ = o.big_ ? std::make_unique<mpz_class>(*o.big_) : nullptr;
    }
    return *this;
  }
  Integer& operator=(Integer&&) noexcept = default;
  ~Integer() = default;

  /// Parses an optionally signed decimal literal. Throws std::invalid_argument.
  static Integer parse(std::string_view text) {
    std::string s(text);
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (start == s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
    for (std::size_t i = start; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("not an integer: '" + s + "'");
    }
    if (s[0] == '+') s.erase(0, 1);
    return Integer(mpz_class(s, 10));
  }

  bool is_small() const noexcept { return !big_; }
  bool is_zero() const noexcept { return !big_ && small_ == 0; }
  bool is_unit() const noexcept { return !big_ && (small_ == 1 || small_ == -1); }
  int sign() const noexcept {
    if (big_) return mpz_sgn(big_->get_mpz_t());
    return (small_ > 0) - (small_ < 0);
  }

  bool fits_int64() const noexcept { return !big_; }
  std::int64_t to_int64() const {
    if (big_) throw std::overflow_error("integer does not fit in 64 bits");
    return small_;
  }

  mpz_class to_mpz() const {
    if (big_) return *big_;
    mpz_class z;
    mpz_set_si(z.get_mpz_t(), small_);
    return z;
  }

  std::string to_string() const { return big_ ? big_->get_str(10) : std::to_string(small_); }

  /// Number of bits of |x|; zero for zero.
  std::size_t bit_length() const {
    if (big_) return mpz_sizeinbase(big_->get_mpz_t(), 2);
    if (small_ == 0) return 0;
    auto u = small_ < 0 ? ~static_cast<std::uint64_t>(small_) + 1 : static_cast<std::uint64_t>(small_);
    return 64 - static_cast<std::size_t>(__builtin_clzll(u));
  }

  Integer operator-() const {
    if (!big_ && small_ != std::numeric_limits<std::int64_t>::min()) return Integer(-small_);
    return Integer(mpz_class(-to_mpz()));
  }

  friend Integer abs(const Integer& a) { return a.sign() < 0 ? -a : a; }

  friend Integer operator+(const Integer& a, const Integer& b) {
    std::int64_t r;
    if (!a.big_ && !b.big_ && !__builtin_add_overflow(a.small_, b.small_, &r)) return Integer(r);
    return Integer(mpz_class(a.to_mpz() + b.to_mpz()));
  }
  friend Integer operator-(const Integer& a, const Integer& b) {
    std::int64_t r;
    if (!a.big_ && !b.big_ && !__builtin_sub_overflow(a.small_, b.small_, &r)) return Integer(r);
    return Integer(mpz_class(a.to_mpz() - b.to_mpz()));
  }
  friend Integer operator*(const Integer& a, const Integer& b) {
    std::int64_t r;
    if (!a.big_ && !b.big_ && !__builtin_mul_overflow(a.small_, b.small_, &r)) return Integer(r);
    return Integer(mpz_class(a.to_mpz() * b.to_mpz()));
  }
  /// Truncating division, as for built-in integers.
  friend Integer operator/(const Integer& a, const Integer& b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    if (!a.big_ && !b.big_ &&
        !(a.small_ == std::numeric_limits<std::int64_t>::min() && b.small_ == -1))
      return Integer(a.small_ / b.small_);
    mpz_class q;
    mpz_tdiv_q(q.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
    return Integer(q);
  }
  friend Integer operator%(const Integer& a, const Integer& b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    if (!a.big_ && !b.big_) {
      if (b.small_ == -1) return Integer(0);
      return Integer(a.small_ % b.small_);
    }
    mpz_class r;
    mpz_tdiv_r(r.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
    return Integer(r);
  }

  Integer& operator+=(const Integer& b) { return *this = *this + b; }
  Integer& operator-=(const Integer& b) { return *this = *this - b; }
  Integer& operator*=(const Integer& b) { return *this = *this * b; }

  /// this -= f * x, the inner step of every elimination loop.
  void sub_mul(const Integer& f, const Integer& x) {
    std::int64_t p, r;
    if (!big_ && !f.big_ && !x.big_ && !__builtin_mul_overflow(f.small_, x.small_, &p) &&
        !__builtin_sub_overflow(small_, p, &r)) {
      small_ = r;
      return;
    }
    assign(mpz_class(to_mpz() - f.to_mpz() * x.to_mpz()));
  }

  friend bool operator==(const Integer& a, const Integer& b) {
    if (!a.big_ && !b.big_) return a.small_ == b.small_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // normalized: a big value never fits in 64 bits
  }
  friend std::strong_ordering operator<=>(const Integer& a, const Integer& b) {
    if (!a.big_ && !b.big_) return a.small_ <=> b.small_;
    int c = cmp(a.to_mpz(), b.to_mpz());
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Integer& a) { return os << a.to_string(); }

 private:
  void assign(const mpz_class& z) {
    if (mpz_fits_slong_p(z.get_mpz_t())) {
      small_ = mpz_get_si(z.get_mpz_t());
      big_.reset();
    } else {
      small_ = 0;
      big_ = std::make_unique<mpz_class>(z);
    }
  }

  std::int64_t small_ = 0;
  std::unique_ptr<mpz_class> big_;
};

/// Floor division and the matching non-negative-remainder modulus (for b > 0).
inline Integer div_floor(const Integer& a, const Integer& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  mpz_class q;
  if (a.is_small() && b.is_small()) {
    auto x = a.to_int64(), y = b.to_int64();
    if (!(x == std::numeric_limits<std::int64_t>::min() && y == -1)) {
      auto qq = x / y;
      if ((x % y != 0) && ((x < 0) != (y < 0))) --qq;
      return Integer(qq);
    }
  }
  mpz_fdiv_q(q.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Integer(q);
}

inline Integer mod_floor(const Integer& a, const Integer& b) { return a - div_floor(a, b) * b; }

/// Division known to be exact; throws if it is not.
inline Integer div_exact(const Integer& a, const Integer& b) {
  if (!(a % b).is_zero()) throw std::domain_error("inexact division");
  return a / b;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  if (a.is_small() && b.is_small()) {
    auto x = a.to_int64(), y = b.to_int64();
    if (x != std::numeric_limits<std::int64_t>::min() && y != std::numeric_limits<std::int64_t>::min()) {
      x = x < 0 ? -x : x;
      y = y < 0 ? -y : y;
      while (y != 0) {
        auto t = x % y;
        x = y;
        y = t;
      }
      return Integer(x);
    }
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Integer(g);
}

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a.is_zero() || b.is_zero()) return Integer(0);
  return abs(div_exact(a, gcd(a, b)) * b);
}

struct ExtendedGcd {
  Integer g;  // >= 0
  Integer s;
  Integer t;  // s*a + t*b == g
};

inline ExtendedGcd ext_gcd(const Integer& a, const Integer& b) {
  mpz_class g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return {Integer(g), Integer(s), Integer(t)};
}

/// Exponent of the prime p in n (n != 0).
inline std::size_t valuation(Integer n, const Integer& p) {
  if (n.is_zero()) throw std::domain_error("valuation of zero");
  std::size_t v = 0;
  while ((n % p).is_zero()) {
    n = n / p;
    ++v;
  }
  return v;
}

using Rational = mpq_class;

inline Rational to_rational(const Integer& a) { return Rational(a.to_mpz()); }

}  // namespace relcoh
