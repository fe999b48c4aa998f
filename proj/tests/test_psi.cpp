#include "khinlab/numtheory.hpp"
#include "khinlab/psi.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace khinlab {
namespace {

const BigInt kTwo32 = BigInt(1) << 32;

TEST(PowerPsi, Examples) {
  const auto cube = power_psi(1, 3, 1'000'000);
  EXPECT_EQ(cube(10), Rational(1, 1000));
  EXPECT_EQ(cube(10'000), Rational(0));
  EXPECT_EQ(cube(1), Rational(1));

  const auto root = power_psi(1, Rational(1, 2), kDefaultPsiGrid);
  EXPECT_EQ(root(2), make_rational(BigInt(3037000499UL), kTwo32));
  EXPECT_EQ(root.kind(), PsiKind::power_decay);
  EXPECT_EQ(root.decay_exponent(), Rational(1, 2));
}

TEST(PowerPsi, RejectsBadParameters) {
  EXPECT_THROW(power_psi(0, 1, 10), std::invalid_argument);
  EXPECT_THROW(power_psi(1, 0, 10), std::invalid_argument);
  EXPECT_THROW(power_psi(1, 1, 1), std::invalid_argument);
}

// floor rounding: psi(q) <= c q^-delta < psi(q) + 1/grid.
TEST(PowerPsi, FloorOnGridIsTight) {
  for (const auto& [c, delta] : std::vector<std::pair<Rational, Rational>>{
           {1, Rational(1, 2)}, {Rational(3, 7), 3}, {2, Rational(5, 3)}, {1, 1}}) {
    const auto f = power_psi(c, delta, 1U << 20U);
    for (std::uint64_t q = 1; q <= 2000; ++q) {
      const Rational v = f(q);
      const Rational qr(from_uint64(q));
      ASSERT_NE(cmp_rpow(v / c, qr, -delta), std::strong_ordering::greater) << q;
      ASSERT_EQ(cmp_rpow((v + Rational(1, 1U << 20U)) / c, qr, -delta), std::strong_ordering::greater)
          << q;
    }
  }
}

TEST(PowerPsi, NonincreasingInQ) {
  const auto f = power_psi(1, Rational(1, 2));
  Rational previous = f(1);
  for (std::uint64_t q = 2; q <= 10'000; ++q) {
    const Rational v = f(q);
    ASSERT_LE(v, previous) << q;
    previous = v;
  }
}

TEST(RestrictSupport, Examples) {
  const auto half = constant_psi(Rational(1, 2));
  const auto even = restrict_support(half, SupportPredicate::even());
  EXPECT_EQ(even(3), Rational(0));
  EXPECT_EQ(even(4), Rational(1, 2));

  const auto root = power_psi(1, Rational(1, 2));
  const auto on_primes = restrict_support(root, SupportPredicate::primes());
  EXPECT_EQ(on_primes(6), Rational(0));
  EXPECT_EQ(on_primes(7), root(7));
  EXPECT_EQ(on_primes.decay_exponent(), Rational(1, 2));

  const auto nothing = restrict_support(half, SupportPredicate::none());
  for (std::uint64_t q = 1; q <= 50; ++q) EXPECT_EQ(nothing(q), Rational(0));
  EXPECT_EQ(nothing.kind(), PsiKind::support_restricted);
}

TEST(Normalize, Examples) {
  EXPECT_EQ(normalize(constant_psi(3), 1)(17), Rational(1, 2));
  const auto cube = power_psi(1, 3, 1'000'000);
  EXPECT_EQ(normalize(cube, Rational(1, 2))(2), Rational(1, 16));
  EXPECT_EQ(normalize(constant_psi(0), Rational(1, 3))(5), Rational(0));
  EXPECT_THROW(normalize(cube, 0), std::invalid_argument);
  EXPECT_THROW(normalize(cube, Rational(3, 2)), std::invalid_argument);
}

TEST(Normalize, IdempotentOnCappedFunctions) {
  const std::vector<PsiFunction> family{power_psi(1, Rational(1, 2)), constant_psi(Rational(4, 5)),
                                        power_psi(3, 1, 1U << 16U),
                                        restrict_support(constant_psi(1), SupportPredicate::odd())};
  for (const auto& f : family) {
    for (const Rational& c : {Rational(1), Rational(1, 3), Rational(9, 10)}) {
      const auto once = normalize(f, c);
      const auto twice = normalize(once, 1);
      for (std::uint64_t q = 1; q <= 1000; ++q) {
        ASSERT_EQ(once(q), twice(q)) << f.describe() << " q=" << q;
        ASSERT_LE(once(q), Rational(1, 2));
        ASSERT_GE(once(q), 0);
      }
    }
  }
}

TEST(CheckDecay, Examples) {
  EXPECT_TRUE(check_decay(power_psi(1, 3, 1'000'000), 3, 1000).holds);
  const auto half = check_decay(constant_psi(Rational(1, 2)), 1, 10);
  EXPECT_FALSE(half.holds);
  EXPECT_EQ(half.first_violation, 3U);
  EXPECT_TRUE(check_decay(constant_psi(0), Rational(7, 2), 500).holds);
}

TEST(TablePsi, LoadsCsv) {
  std::istringstream in("q,psi\n1,1/2\n# comment\n\n3,1/9\r\n10,0\n");
  const auto f = load_psi_table(in);
  EXPECT_EQ(f.kind(), PsiKind::explicit_table);
  EXPECT_EQ(f(1), Rational(1, 2));
  EXPECT_EQ(f(2), Rational(0));
  EXPECT_EQ(f(3), Rational(1, 9));
  EXPECT_EQ(f(10), Rational(0));
}

TEST(TablePsi, RejectsMalformedRows) {
  std::istringstream missing_comma("1 1/2\n");
  EXPECT_THROW(load_psi_table(missing_comma), std::invalid_argument);
  std::istringstream duplicate("2,1/3\n2,1/4\n");
  EXPECT_THROW(load_psi_table(duplicate), std::invalid_argument);
  std::istringstream negative("2,-1/3\n");
  EXPECT_THROW(load_psi_table(negative), std::invalid_argument);
  std::istringstream bad_q("1,1/2\nx,1/3\n");
  EXPECT_THROW(load_psi_table(bad_q), std::invalid_argument);
}

TEST(PsiSums, ReproducibleExactly) {
  const auto f = normalize(power_psi(1, Rational(1, 2)), 1);
  auto sum_squares = [&] {
    Rational s(0);
    for (std::uint64_t q = 1; q <= 2000; ++q) s += f(q) * f(q);
    return to_string(s);
  };
  const std::string first = sum_squares();
  EXPECT_EQ(first, sum_squares());
  const auto table = f.tabulate(2000);
  Rational s(0);
  for (std::uint64_t q = 1; q <= 2000; ++q) s += table[q] * table[q];
  EXPECT_EQ(first, to_string(s));
}

}  // namespace
}  // namespace khinlab
