#include "khinlab/numtheory.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace khinlab {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 kTrialLimit = 1'000'000;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

// Brent's variant of Pollard rho. n is odd, composite and has no factor below kTrialLimit.
u64 pollard_brent(u64 n) {
  for (u64 c = 1;; ++c) {
    auto f = [&](u64 x) { return (mul_mod(x, x, n) + c) % n; };
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    const u64 m = 128;
    u64 r = 1;
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split_large(u64 n, std::vector<u64>& primes) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes.push_back(n);
    return;
  }
  const u64 d = pollard_brent(n);
  split_large(d, primes);
  split_large(n / d, primes);
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  // These twelve bases are a proven witness set for all n < 3.3 * 10^24.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FactorProfile factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  FactorProfile out;
  out.value = n;
  u64 rest = n;
  auto take = [&](u64 p) {
    unsigned e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    if (e > 0) out.factors.push_back({p, e});
  };
  take(2);
  for (u64 p = 3; p <= kTrialLimit && p * p <= rest; p += 2) take(p);
  if (rest > 1) {
    std::vector<u64> big;
    if (rest < kTrialLimit * kTrialLimit) {
      big.push_back(rest);  // no factor up to sqrt(rest) remains
    } else {
      split_large(rest, big);
    }
    std::sort(big.begin(), big.end());
    for (std::size_t i = 0; i < big.size();) {
      std::size_t j = i;
      while (j < big.size() && big[j] == big[i]) ++j;
      out.factors.push_back({big[i], static_cast<unsigned>(j - i)});
      i = j;
    }
  }
  return out;
}

std::uint64_t phi(const FactorProfile& f) {
  u64 result = 1;
  for (const auto& [p, e] : f.factors) {
    result *= p - 1;
    for (unsigned i = 1; i < e; ++i) result *= p;
  }
  return result;
}

std::uint64_t tau(const FactorProfile& f) {
  u64 result = 1;
  for (const auto& pe : f.factors) result *= pe.exponent + 1;
  return result;
}

std::vector<std::uint64_t> divisors(const FactorProfile& f) {
  std::vector<u64> out{1};
  for (const auto& [p, e] : f.factors) {
    const std::size_t base = out.size();
    u64 power = 1;
    for (unsigned i = 0; i < e; ++i) {
      power *= p;
      for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * power);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t phi(std::uint64_t n) { return phi(factorize(n)); }
std::uint64_t tau(std::uint64_t n) { return tau(factorize(n)); }
std::vector<std::uint64_t> divisors(std::uint64_t n) { return divisors(factorize(n)); }

Rational coprime_box_density(std::uint64_t q, std::uint64_t b) {
  if (q == 0 || b == 0) throw std::invalid_argument("coprime_box_density: q, b must be positive");
  BigInt num = 1, den = 1;
  for (const auto& pe : factorize(q).factors) {
    if (b % pe.prime == 0) continue;
    const BigInt p2 = from_uint64(pe.prime) * from_uint64(pe.prime);
    num *= p2 - 1;
    den *= p2;
  }
  return make_rational(num, den);
}

std::uint64_t admissible_count_oracle(std::uint64_t q, IntPair a, std::uint64_t b) {
  if (q == 0 || b == 0) throw std::invalid_argument("admissible_count_oracle: q, b must be positive");
  const u64 g = std::gcd(std::gcd(static_cast<u64>(a.first < 0 ? -a.first : a.first),
                                  static_cast<u64>(a.second < 0 ? -a.second : a.second)),
                         b);
  if (g != 1) throw std::invalid_argument("admissible_count_oracle: gcd(a1, a2, b) must be 1");
  auto residue = [q](std::int64_t v) {
    const auto m = static_cast<std::int64_t>(q);
    return static_cast<u64>(((v % m) + m) % m);
  };
  const u64 bq = b % q;
  u64 count = 0;
  for (u64 p1 = 0; p1 < q; ++p1) {
    const u64 c1 = (static_cast<u64>(mul_mod(bq, p1, q)) + residue(a.first)) % q;
    for (u64 p2 = 0; p2 < q; ++p2) {
      const u64 c2 = (mul_mod(bq, p2, q) + residue(a.second)) % q;
      if (std::gcd(std::gcd(q, c1), c2) == 1) ++count;
    }
  }
  return count;
}

std::strong_ordering cmp_power(const Rational& x, unsigned long u, const Rational& y,
                               unsigned long v) {
  if (x < 0 || y < 0) throw std::invalid_argument("cmp_power: bases must be nonnegative");
  if (u == 0 || v == 0) throw std::invalid_argument("cmp_power: exponents must be positive");
  // x^u ? y^v  <=>  xn^u * yd^v ? yn^v * xd^u
  BigInt xn, xd, yn, yd;
  mpz_pow_ui(xn.get_mpz_t(), x.num_ref().get_mpz_t(), u);
  mpz_pow_ui(xd.get_mpz_t(), x.den_ref().get_mpz_t(), u);
  mpz_pow_ui(yn.get_mpz_t(), y.num_ref().get_mpz_t(), v);
  mpz_pow_ui(yd.get_mpz_t(), y.den_ref().get_mpz_t(), v);
  const int c = cmp(xn * yd, yn * xd);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::strong_ordering cmp_rpow(const Rational& x, const Rational& base, const Rational& exponent) {
  if (base <= 0) throw std::invalid_argument("cmp_rpow: base must be positive");
  if (!mpz_fits_ulong_p(exponent.den_ref().get_mpz_t())) {
    throw std::invalid_argument("cmp_rpow: exponent denominator too large");
  }
  const unsigned long den = mpz_get_ui(exponent.den_ref().get_mpz_t());
  const BigInt num_abs = abs(exponent.num_ref());
  if (!mpz_fits_ulong_p(num_abs.get_mpz_t())) {
    throw std::invalid_argument("cmp_rpow: exponent numerator too large");
  }
  const unsigned long num = mpz_get_ui(num_abs.get_mpz_t());
  if (num == 0) return cmp_power(x, 1, Rational(1), 1);
  // x ? base^(num/den)  <=>  x^den ? base^num
  const Rational effective = exponent > 0 ? base : Rational(1) / base;
  return cmp_power(x, den, effective, num);
}

BigInt integer_root(const BigInt& value, unsigned long n) {
  if (value < 0) throw std::invalid_argument("integer_root: negative value");
  if (n == 0) throw std::invalid_argument("integer_root: zero index");
  BigInt out;
  mpz_root(out.get_mpz_t(), value.get_mpz_t(), n);
  return out;
}

}  // namespace khinlab
