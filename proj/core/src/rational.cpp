#include "khinlab/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace khinlab {

namespace {

bool is_integer_literal(std::string_view text) {
  if (text.empty()) return false;
  std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (i == text.size()) return false;
  for (; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
  }
  return true;
}

BigInt parse_integer(std::string_view text) {
  if (!is_integer_literal(text)) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  if (text[0] == '+') text.remove_prefix(1);
  return BigInt(std::string(text), 10);
}

}  // namespace

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.value_ == 0) throw std::domain_error("division by zero");
  value_ /= o.value_;
  return *this;
}

Rational abs(const Rational& value) { return value < 0 ? -value : value; }

std::ostream& operator<<(std::ostream& out, const Rational& value) { return out << to_string(value); }

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  return make_rational(parse_integer(text.substr(0, slash)),
                       parse_integer(text.substr(slash + 1)));
}

RationalPair parse_rational_pair(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
    throw std::invalid_argument("expected 'r1,r2', got '" + std::string(text) + "'");
  }
  return {parse_rational(text.substr(0, comma)), parse_rational(text.substr(comma + 1))};
}

std::string to_string(const Rational& value) {
  return value.num_ref().get_str() + "/" + value.den_ref().get_str();
}

std::string to_decimal(const Rational& value, int digits) {
  if (digits < 0) throw std::invalid_argument("negative digit count");
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  const bool negative = value < 0;
  BigInt scaled = BigInt(::abs(value.num_ref())) * scale / value.den_ref();
  BigInt whole = scaled / scale;
  BigInt part = scaled % scale;
  std::string out = (negative && scaled != 0 ? "-" : "") + whole.get_str();
  if (digits > 0) {
    std::string tail = part.get_str();
    out += "." + std::string(static_cast<std::size_t>(digits) - tail.size(), '0') + tail;
  }
  return out;
}

BigInt floor_of(const Rational& value) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), value.num_ref().get_mpz_t(), value.den_ref().get_mpz_t());
  return out;
}

Rational frac(const Rational& value) { return value - Rational(floor_of(value)); }

bool fits_int64(const BigInt& value) {
  static const BigInt lo = from_int64(INT64_MIN);
  static const BigInt hi = from_int64(INT64_MAX);
  return value >= lo && value <= hi;
}

std::int64_t to_int64(const BigInt& value) {
  if (!fits_int64(value)) throw std::out_of_range("integer exceeds int64: " + value.get_str());
  // mpz_get_si is defined for the long range, which is 64-bit on LP64.
  static_assert(sizeof(long) == 8);
  return mpz_get_si(value.get_mpz_t());
}

std::uint64_t to_uint64(const BigInt& value) {
  static_assert(sizeof(unsigned long) == 8);
  if (value < 0 || !mpz_fits_ulong_p(value.get_mpz_t())) {
    throw std::out_of_range("integer exceeds uint64: " + value.get_str());
  }
  return mpz_get_ui(value.get_mpz_t());
}

BigInt from_uint64(std::uint64_t value) {
  static_assert(sizeof(unsigned long) == 8);
  return BigInt(static_cast<unsigned long>(value));
}

BigInt from_int64(std::int64_t value) { return BigInt(static_cast<long>(value)); }

}  // namespace khinlab
