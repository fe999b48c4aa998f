#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>

namespace khinlab {

using BigInt = mpz_class;

/// Exact signed fraction over GMP, always in lowest terms with a positive
/// denominator; zero is 0/1.
class Rational {
 public:
  Rational() = default;

  template <std::integral T>
  Rational(T value) {  // NOLINT(google-explicit-constructor)
    if constexpr (std::is_signed_v<T>) {
      value_ = static_cast<long>(value);
    } else {
      value_ = static_cast<unsigned long>(value);
    }
  }

  explicit Rational(const BigInt& value) : value_(value) {}

  /// num/den reduced. Throws std::invalid_argument on den == 0.
  Rational(const BigInt& num, const BigInt& den);

  template <std::integral N, std::integral D>
  Rational(N num, D den) : Rational(to_big(num), to_big(den)) {}

  BigInt num() const { return value_.get_num(); }
  BigInt den() const { return value_.get_den(); }
  const mpz_class& num_ref() const { return value_.get_num(); }
  const mpz_class& den_ref() const { return value_.get_den(); }
  bool is_integer() const { return value_.get_den() == 1; }
  double to_double() const { return value_.get_d(); }
  const mpq_class& mpq() const { return value_; }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const { return from_mpq(-value_); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  template <std::integral T>
  static BigInt to_big(T v) {
    if constexpr (std::is_signed_v<T>) {
      return BigInt(static_cast<long>(v));
    } else {
      return BigInt(static_cast<unsigned long>(v));
    }
  }
  static Rational from_mpq(mpq_class v) {
    Rational r;
    r.value_ = std::move(v);
    return r;
  }

  mpq_class value_;
};

using RationalPair = std::pair<Rational, Rational>;

Rational abs(const Rational& value);

/// Builds num/den in canonical form. Throws std::invalid_argument on den == 0.
inline Rational make_rational(const BigInt& num, const BigInt& den) { return Rational(num, den); }

/// Parses "num/den" or a bare integer "num". Whitespace is not accepted.
Rational parse_rational(std::string_view text);

/// Parses "r1,r2" into a pair of rationals.
RationalPair parse_rational_pair(std::string_view text);

/// Renders as "num/den", including "0/1" and "n/1".
std::string to_string(const Rational& value);

std::ostream& operator<<(std::ostream& out, const Rational& value);

/// k-digit decimal approximation (truncated toward zero), for human-readable columns.
std::string to_decimal(const Rational& value, int digits);

BigInt floor_of(const Rational& value);

/// Reduces into [0,1).
Rational frac(const Rational& value);

bool fits_int64(const BigInt& value);
std::int64_t to_int64(const BigInt& value);
std::uint64_t to_uint64(const BigInt& value);
BigInt from_uint64(std::uint64_t value);
BigInt from_int64(std::int64_t value);

}  // namespace khinlab
