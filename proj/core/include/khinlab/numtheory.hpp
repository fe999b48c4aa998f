#pragma once

#include "khinlab/rational.hpp"

#include <compare>
#include <cstdint>
#include <utility>
#include <vector>

namespace khinlab {

struct PrimePower {
  std::uint64_t prime = 0;
  unsigned exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization of a positive integer below 2^64. Primes are strictly
/// increasing and the product of prime^exponent equals value.
struct FactorProfile {
  std::uint64_t value = 1;
  std::vector<PrimePower> factors;
};

using IntPair = std::pair<std::int64_t, std::int64_t>;

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

/// Trial division up to 10^6, then Pollard rho (Brent) on the cofactor.
/// Throws std::invalid_argument for n == 0.
FactorProfile factorize(std::uint64_t n);

std::uint64_t phi(std::uint64_t n);
std::uint64_t tau(std::uint64_t n);
std::vector<std::uint64_t> divisors(std::uint64_t n);

std::uint64_t phi(const FactorProfile& f);
std::uint64_t tau(const FactorProfile& f);
std::vector<std::uint64_t> divisors(const FactorProfile& f);

/// Product over primes p | q with p not dividing b of (1 - p^-2). This is the
/// density of residues p mod q with gcd(q, b*p + a) = 1 for any a coprime to b.
Rational coprime_box_density(std::uint64_t q, std::uint64_t b);

/// Counts p in (Z/qZ)^2 with gcd(q, b*p1 + a1, b*p2 + a2) = 1 by direct
/// enumeration. Requires gcd(a1, a2, b) = 1, throws std::invalid_argument otherwise.
std::uint64_t admissible_count_oracle(std::uint64_t q, IntPair a, std::uint64_t b);

/// Orders x^u against y^v by exact integer cross-powering. x, y >= 0; u, v >= 1.
std::strong_ordering cmp_power(const Rational& x, unsigned long u, const Rational& y,
                               unsigned long v);

/// Orders x against base^exponent for a rational exponent (any sign) and
/// base > 0, x >= 0. Reduces to cmp_power.
std::strong_ordering cmp_rpow(const Rational& x, const Rational& base, const Rational& exponent);

/// Largest integer k >= 0 with k^n <= value (value >= 0).
BigInt integer_root(const BigInt& value, unsigned long n);

}  // namespace khinlab
