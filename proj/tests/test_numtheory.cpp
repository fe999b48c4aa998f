#include "khinlab/numtheory.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace khinlab {
namespace {

TEST(Factorize, SmallCases) {
  EXPECT_TRUE(factorize(1).factors.empty());
  const std::vector<PrimePower> expected{{2, 3}, {3, 2}, {5, 1}};
  EXPECT_EQ(factorize(360).factors, expected);
  EXPECT_THROW(factorize(0), std::invalid_argument);
}

TEST(Factorize, MersennePrime61) {
  const std::uint64_t m61 = (std::uint64_t{1} << 61U) - 1;
  EXPECT_TRUE(is_prime(m61));
  const std::vector<PrimePower> expected{{m61, 1}};
  EXPECT_EQ(factorize(m61).factors, expected);
}

TEST(Factorize, LargeSemiprimesAndPowers) {
  // Both factors above the trial-division limit, forcing Pollard rho.
  const std::uint64_t p = 1'000'000'007, q = 998'244'353;
  const std::vector<PrimePower> semi{{q, 1}, {p, 1}};
  EXPECT_EQ(factorize(p * q).factors, semi);

  const std::uint64_t r = 2'147'483'647;  // 2^31 - 1
  const std::vector<PrimePower> square{{r, 2}};
  EXPECT_EQ(factorize(r * r).factors, square);

  const std::uint64_t carmichael = 561;
  EXPECT_FALSE(is_prime(carmichael));
  EXPECT_FALSE(is_prime(3'215'031'751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
}

TEST(Factorize, ProductReconstructsValueForRandomInputs) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const std::uint64_t n = rng() >> (rng() % 40);
    if (n == 0) continue;
    const auto f = factorize(n);
    std::uint64_t product = 1;
    std::uint64_t last = 1;
    for (const auto& [prime, exponent] : f.factors) {
      EXPECT_GT(prime, last);
      EXPECT_TRUE(is_prime(prime));
      last = prime;
      for (unsigned e = 0; e < exponent; ++e) product *= prime;
    }
    EXPECT_EQ(product, n);
  }
}

TEST(Multiplicative, Examples) {
  EXPECT_EQ(phi(12), 4U);
  EXPECT_EQ(tau(36), 9U);
  EXPECT_EQ(divisors(6), (std::vector<std::uint64_t>{1, 2, 3, 6}));
  EXPECT_EQ(phi(1), 1U);
  EXPECT_EQ(tau(1), 1U);
}

TEST(Multiplicative, AgreeWithDefinitionsUpTo10k) {
  for (std::uint64_t n = 1; n <= 10'000; ++n) {
    const auto f = factorize(n);
    ASSERT_EQ(phi(f), oracle::phi(n)) << n;
    ASSERT_EQ(tau(f), oracle::tau(n)) << n;
    if (n <= 2000) ASSERT_EQ(divisors(f), oracle::divisors(n)) << n;
  }
}

TEST(CoprimeBoxDensity, Examples) {
  EXPECT_EQ(coprime_box_density(1, 7), Rational(1));
  EXPECT_EQ(coprime_box_density(12, 5), Rational(2, 3));
  EXPECT_EQ(coprime_box_density(12, 2), Rational(8, 9));
  EXPECT_EQ(coprime_box_density(12, 6), Rational(1));
}

TEST(AdmissibleCountOracle, Examples) {
  EXPECT_EQ(admissible_count_oracle(1, {0, 0}, 1), 1U);
  EXPECT_EQ(admissible_count_oracle(12, {1, 0}, 5), 96U);
  EXPECT_EQ(admissible_count_oracle(12, {1, 1}, 2), 128U);
  EXPECT_THROW(admissible_count_oracle(12, {2, 4}, 2), std::invalid_argument);
  EXPECT_THROW(admissible_count_oracle(12, {0, 0}, 3), std::invalid_argument);
}

// q^2 * density(q, b) against enumeration, for several valid a per (q, b).
TEST(CoprimeBoxDensity, MatchesEnumeration) {
  const std::vector<IntPair> candidates{{0, 1}, {1, 0}, {1, 1}, {2, 3}, {3, 5}, {-1, 4}, {7, 2}};
  for (std::uint64_t q = 1; q <= 90; ++q) {
    for (std::uint64_t b = 1; b <= 30; ++b) {
      int used = 0;
      for (const auto& a : candidates) {
        const auto g = std::gcd(std::gcd(static_cast<std::uint64_t>(std::abs(a.first)),
                                         static_cast<std::uint64_t>(std::abs(a.second))),
                                b);
        if (g != 1) continue;
        const Rational expected = coprime_box_density(q, b) * Rational(from_uint64(q * q));
        ASSERT_EQ(Rational(from_uint64(admissible_count_oracle(q, a, b))), expected)
            << "q=" << q << " b=" << b << " a=(" << a.first << "," << a.second << ")";
        if (++used == 3) break;
      }
      ASSERT_EQ(used, 3);
    }
  }
}

TEST(CmpPower, Examples) {
  EXPECT_EQ(cmp_power(2, 3, 3, 2), std::strong_ordering::less);
  EXPECT_EQ(cmp_power(Rational(50, 4), 6, 100, 3), std::strong_ordering::greater);
  EXPECT_EQ(cmp_power(1, 5, 1, 9), std::strong_ordering::equal);
  EXPECT_EQ(cmp_power(0, 3, 0, 7), std::strong_ordering::equal);
  EXPECT_THROW(cmp_power(-1, 1, 1, 1), std::invalid_argument);
}

TEST(CmpPower, AgreesWithFloatingPointAwayFromTies) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> value(1, 5000);
  std::uniform_int_distribution<unsigned long> exponent(1, 12);
  int compared = 0;
  for (int i = 0; i < 1000; ++i) {
    const Rational x = make_rational(value(rng), value(rng));
    const Rational y = make_rational(value(rng), value(rng));
    const unsigned long u = exponent(rng), v = exponent(rng);
    const long double lx = u * std::log(static_cast<long double>(x.to_double()));
    const long double ly = v * std::log(static_cast<long double>(y.to_double()));
    // Relative gap of x^u and y^v above 1e-6.
    if (std::fabs(lx - ly) <= 1e-6L) continue;
    ++compared;
    const auto expected = lx < ly ? std::strong_ordering::less : std::strong_ordering::greater;
    ASSERT_EQ(cmp_power(x, u, y, v), expected) << to_string(x) << "^" << u << " vs " << to_string(y)
                                                << "^" << v;
  }
  EXPECT_GT(compared, 900);
}

TEST(CmpRpow, SignedRationalExponents) {
  // 100^(-1/2) = 1/10
  EXPECT_EQ(cmp_rpow(Rational(1, 10), 100, Rational(-1, 2)), std::strong_ordering::equal);
  EXPECT_EQ(cmp_rpow(Rational(1, 3), 100, Rational(-1, 2)), std::strong_ordering::greater);
  EXPECT_EQ(cmp_rpow(Rational(9), 27, Rational(2, 3)), std::strong_ordering::equal);
  EXPECT_EQ(cmp_rpow(Rational(1), 5, Rational(0)), std::strong_ordering::equal);
}

TEST(IntegerRoot, Brackets) {
  const BigInt two63 = BigInt(1) << 63;
  EXPECT_EQ(integer_root(two63, 2), BigInt(3037000499UL));
  EXPECT_EQ(integer_root(BigInt(26), 3), BigInt(2));
  EXPECT_EQ(integer_root(BigInt(27), 3), BigInt(3));
}

}  // namespace
}  // namespace khinlab
