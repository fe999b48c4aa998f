#pragma once

#include "khinlab/numtheory.hpp"
#include "khinlab/rational.hpp"

#include <cstdint>
#include <map>
#include <shared_mutex>

namespace khinlab {

/// Rational approximation (a, b) to the shift y attached to index q:
///   |b*y - a| < q^(-delta/(delta+3))  (sup norm),
///   1 <= b <= q^(2*delta/(delta+3)),
///   gcd(a1, a2, b) = 1.
struct ApproximantPair {
  IntPair a{0, 0};
  std::uint64_t b = 1;
  std::uint64_t q = 1;

  friend bool operator==(const ApproximantPair&, const ApproximantPair&) = default;
};

/// The inhomogeneous shift y in [0,1)^2 together with the decay exponent that
/// fixes the approximant constraints. Irrational targets enter through a
/// rational proxy; all exactness downstream is relative to that proxy.
///
/// The approximant cache is the only mutable state: lookups take a shared
/// lock, inserts an exclusive one, and every insert for a given q stores the
/// same value.
class Target {
 public:
  Target(RationalPair y, Rational delta);
  Target(const Target& other);
  Target& operator=(const Target& other);

  const RationalPair& y() const { return y_; }
  const Rational& delta() const { return delta_; }

  /// Canonical approximant: smallest b, then smallest sup-norm error, then
  /// lexicographically smallest a. Cached per q.
  /// Throws std::runtime_error ("no admissible b") when the scan up to the
  /// b bound finds nothing.
  ApproximantPair approximant(std::uint64_t q) const;

  /// floor(q^(2*delta/(delta+3)))
  std::uint64_t max_denominator(std::uint64_t q) const;

  std::size_t cached_count() const;

 private:
  RationalPair y_;
  Rational delta_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::uint64_t, ApproximantPair> cache_;
};

struct ApproximantReport {
  bool error_ok = false;
  bool bound_ok = false;
  bool coprime_ok = false;
  Rational error;

  bool ok() const { return error_ok && bound_ok && coprime_ok; }
};

/// Sup-norm error |b*y - a|.
Rational approximation_error(const RationalPair& y, const ApproximantPair& p);

/// Re-checks the three constraints from scratch, independent of the search.
ApproximantReport validate_approximant(const Target& t, const ApproximantPair& p);

}  // namespace khinlab
