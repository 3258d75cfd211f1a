#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "cpwlkit/error.hpp"

namespace cpwlkit::linalg {

/// Exact rational number in canonical form (positive denominator, coprime
/// parts). Values whose numerator and denominator fit in 63 bits are kept
/// inline; everything else lives in a GMP rational. The representation is
/// unique for every value, so equality is a field comparison.
class Rational {
  using i128 = __int128;
  using u128 = unsigned __int128;

 public:
  Rational() = default;

  template <std::integral Int>
  Rational(Int value) {  // NOLINT(google-explicit-constructor)
    if constexpr (std::is_signed_v<Int>) {
      assign_i128(static_cast<i128>(value), 1);
    } else {
      assign_i128(static_cast<i128>(static_cast<u128>(value)), 1);
    }
  }

  Rational(std::int64_t num, std::int64_t den) {
    require(den != 0, "Rational: zero denominator");
    assign_i128(num, den);
  }

  explicit Rational(const mpq_class& value) { assign_mpq(mpq_class(value)); }
  explicit Rational(const mpz_class& value) { assign_mpq(mpq_class(value)); }

  Rational(const Rational& other) : num_(other.num_), den_(other.den_) {
    if (other.big_) big_ = std::make_unique<mpq_class>(*other.big_);
  }
  Rational(Rational&& other) noexcept = default;
  Rational& operator=(const Rational& other) {
    if (this != &other) {
      num_ = other.num_;
      den_ = other.den_;
      big_ = other.big_ ? std::make_unique<mpq_class>(*other.big_) : nullptr;
    }
    return *this;
  }
  Rational& operator=(Rational&& other) noexcept = default;
  ~Rational() = default;

  /// Parses "p" or "p/q" (optional leading sign on p). Non-canonical input
  /// such as "2/4" is reduced.
  static Rational parse(std::string_view text) {
    auto fail = [&] {
      throw ParseError("invalid rational '" + std::string(text) + "'", 0, 0);
    };
    if (text.empty()) fail();
    const auto slash = text.find('/');
    const auto num_part = text.substr(0, slash);
    const auto den_part =
        slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    auto valid_int = [](std::string_view s, bool allow_sign) {
      std::size_t i = 0;
      if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+')) ++i;
      if (i == s.size()) return false;
      for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
      return true;
    };
    if (!valid_int(num_part, true) || !valid_int(den_part, false)) fail();
    std::string num_str(num_part);
    if (num_str[0] == '+') num_str.erase(0, 1);
    mpz_class num(num_str, 10);
    mpz_class den(std::string(den_part), 10);
    if (den == 0) fail();
    mpq_class q(num, den);
    q.canonicalize();
    return Rational(q);
  }

  /// Parses a plain decimal such as "-12", "0.25" or "1e3" exactly.
  static Rational parse_decimal(std::string_view text) {
    auto fail = [&] {
      throw ParseError("invalid decimal '" + std::string(text) + "'", 0, 0);
    };
    std::string mantissa;
    long exponent = 0;
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) negative = text[i++] == '-';
    bool any_digit = false;
    bool seen_point = false;
    for (; i < text.size(); ++i) {
      const char c = text[i];
      if (c >= '0' && c <= '9') {
        mantissa.push_back(c);
        any_digit = true;
        if (seen_point) --exponent;
      } else if (c == '.' && !seen_point) {
        seen_point = true;
      } else {
        break;
      }
    }
    if (!any_digit) fail();
    if (i < text.size()) {
      if (text[i] != 'e' && text[i] != 'E') fail();
      const auto exp_text = std::string(text.substr(i + 1));
      if (exp_text.empty()) fail();
      std::size_t used = 0;
      long e = 0;
      try {
        e = std::stol(exp_text, &used);
      } catch (...) {
        fail();
      }
      if (used != exp_text.size()) fail();
      exponent += e;
    }
    mpz_class num(mantissa, 10);
    if (negative) num = -num;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    mpq_class q = exponent < 0 ? mpq_class(num, scale) : mpq_class(num * scale);
    q.canonicalize();
    return Rational(q);
  }

  /// Canonical "p/q" (or "p" when q = 1).
  std::string str() const {
    if (!big_) {
      return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }
    return big_->get_str(10);
  }

  mpz_class numerator() const { return big_ ? mpz_class(big_->get_num()) : mpz_class(static_cast<long>(num_)); }
  mpz_class denominator() const { return big_ ? mpz_class(big_->get_den()) : mpz_class(static_cast<long>(den_)); }

  mpq_class to_mpq() const {
    if (big_) return *big_;
    mpq_class q(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
    return q;
  }

  double to_double() const { return big_ ? big_->get_d() : static_cast<double>(num_) / static_cast<double>(den_); }

  int sign() const {
    if (big_) return sgn(*big_);
    return (num_ > 0) - (num_ < 0);
  }
  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }
  bool is_small() const { return !big_; }

  Rational operator-() const {
    if (!big_) {
      Rational r;
      r.num_ = -num_;
      r.den_ = den_;
      return r;
    }
    return Rational(mpq_class(-*big_));
  }

  friend Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.den_ == 1 && b.den_ == 1) return from_i128_reduced(static_cast<i128>(a.num_) + b.num_, 1);
      const std::uint64_t g = std::gcd(static_cast<std::uint64_t>(a.den_), static_cast<std::uint64_t>(b.den_));
      const std::int64_t ad = a.den_ / static_cast<std::int64_t>(g);
      const std::int64_t bd = b.den_ / static_cast<std::int64_t>(g);
      i128 num = static_cast<i128>(a.num_) * bd + static_cast<i128>(b.num_) * ad;
      i128 den = static_cast<i128>(ad) * b.den_;
      if (num == 0) return Rational();
      const u128 mag = num < 0 ? static_cast<u128>(-num) : static_cast<u128>(num);
      const std::uint64_t g2 = std::gcd(static_cast<std::uint64_t>(mag % g), g);
      if (g2 > 1) {
        num /= static_cast<i128>(g2);
        den /= static_cast<i128>(g2);
      }
      return from_i128_reduced(num, den);
    }
    return Rational(mpq_class(a.to_mpq() + b.to_mpq()));
  }

  friend Rational operator-(const Rational& a, const Rational& b) {
    if (!b.big_) {
      Rational nb;
      nb.num_ = -b.num_;
      nb.den_ = b.den_;
      return a + nb;
    }
    return Rational(mpq_class(a.to_mpq() - b.to_mpq()));
  }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.num_ == 0 || b.num_ == 0) return Rational();
      const std::uint64_t g1 = std::gcd(magnitude(a.num_), static_cast<std::uint64_t>(b.den_));
      const std::uint64_t g2 = std::gcd(magnitude(b.num_), static_cast<std::uint64_t>(a.den_));
      const i128 num = static_cast<i128>(a.num_ / static_cast<std::int64_t>(g1)) * (b.num_ / static_cast<std::int64_t>(g2));
      const i128 den = static_cast<i128>(a.den_ / static_cast<std::int64_t>(g2)) * (b.den_ / static_cast<std::int64_t>(g1));
      return from_i128_reduced(num, den);
    }
    return Rational(mpq_class(a.to_mpq() * b.to_mpq()));
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    require(!b.is_zero(), "Rational: division by zero");
    return a * b.reciprocal();
  }

  Rational reciprocal() const {
    require(!is_zero(), "Rational: reciprocal of zero");
    if (!big_) {
      Rational r;
      r.num_ = num_ < 0 ? -den_ : den_;
      r.den_ = num_ < 0 ? -num_ : num_;
      return r;
    }
    mpq_class q;
    mpq_inv(q.get_mpq_t(), big_->get_mpq_t());
    return Rational(q);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // canonical: a small and a big value never coincide
  }

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      const i128 lhs = static_cast<i128>(a.num_) * b.den_;
      const i128 rhs = static_cast<i128>(b.num_) * a.den_;
      return lhs <=> rhs;
    }
    const int c = cmp(a.to_mpq(), b.to_mpq());
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  /// Largest integer not exceeding the value.
  mpz_class floor() const {
    mpz_class q;
    const mpq_class v = to_mpq();
    mpz_fdiv_q(q.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
    return q;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.str(); }

 private:
  static std::uint64_t magnitude(std::int64_t v) {
    return v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
  }

  static constexpr i128 kSmallMax = std::numeric_limits<std::int64_t>::max();

  static Rational from_i128_reduced(i128 num, i128 den) {
    Rational r;
    if (num <= kSmallMax && num >= -kSmallMax && den <= kSmallMax) {
      r.num_ = static_cast<std::int64_t>(num);
      r.den_ = static_cast<std::int64_t>(den);
    } else {
      r.big_ = std::make_unique<mpq_class>(to_mpz(num), to_mpz(den));
    }
    return r;
  }

  static mpz_class to_mpz(i128 v) {
    const bool negative = v < 0;
    u128 mag = negative ? static_cast<u128>(-v) : static_cast<u128>(v);
    mpz_class hi(static_cast<unsigned long>(mag >> 64));
    mpz_class lo(static_cast<unsigned long>(mag & ~std::uint64_t{0}));
    mpz_class out = (hi << 64) + lo;
    return negative ? mpz_class(-out) : out;
  }

  void assign_i128(i128 num, i128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    u128 a = num < 0 ? static_cast<u128>(-num) : static_cast<u128>(num);
    u128 b = static_cast<u128>(den);
    while (b != 0) {
      const u128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= static_cast<i128>(a);
      den /= static_cast<i128>(a);
    }
    if (num == 0) den = 1;
    *this = from_i128_reduced(num, den);
  }

  void assign_mpq(mpq_class q) {
    q.canonicalize();
    const auto& n = q.get_num();
    const auto& d = q.get_den();
    if (mpz_fits_slong_p(n.get_mpz_t()) && mpz_fits_slong_p(d.get_mpz_t()) &&
        n != std::numeric_limits<long>::min()) {
      num_ = n.get_si();
      den_ = d.get_si();
      big_.reset();
    } else {
      num_ = 0;
      den_ = 1;
      big_ = std::make_unique<mpq_class>(std::move(q));
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::unique_ptr<mpq_class> big_;
};

inline std::string to_string(const Rational& x) { return x.str(); }

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace cpwlkit::linalg
