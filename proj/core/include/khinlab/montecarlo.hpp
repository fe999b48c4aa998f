#pragma once

#include "khinlab/psi.hpp"
#include "khinlab/rational.hpp"
#include "khinlab/sets.hpp"
#include "khinlab/target.hpp"

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

namespace khinlab {

/// Uniform sample of the torus. Point i has coordinates points[i][c] / 2^64,
/// drawn from a counter-based generator keyed by (seed, i, c), so identical
/// parameters give bit-identical points regardless of evaluation order.
struct SampleRun {
  std::uint64_t seed = 0;
  std::vector<std::array<std::uint64_t, 2>> points;
  /// Per point, the indices q at which membership held (filled by record_hits).
  std::vector<std::vector<std::uint64_t>> hits;

  std::size_t size() const { return points.size(); }
  RationalPair point(std::size_t i) const;
};

/// SplitMix64 output for counter (seed, index, coordinate).
std::uint64_t counter_draw(std::uint64_t seed, std::uint64_t index, unsigned coordinate);

/// Throws std::invalid_argument for n == 0.
SampleRun sample(std::size_t n, std::uint64_t seed);

using QWindow = std::pair<std::uint64_t, std::uint64_t>;

/// For each window [q0, q1], the fraction of points lying in some set with
/// index in the window.
std::vector<Rational> window_hit_fractions(const SampleRun& run, const std::vector<QWindow>& windows,
                                           const PsiFunction& psi, const Target& target,
                                           Variant variant, unsigned jobs = 1);

/// Fraction of points x with member(x, set(q)) for some q in [q0, q1].
Rational tail_hit_fraction(const SampleRun& run, std::uint64_t q0, std::uint64_t q1,
                           const PsiFunction& psi, const Target& target, Variant variant,
                           unsigned jobs = 1);

/// Entry k is the hit fraction over the window [2^k, 2^(k+1)), k = 0..kmax.
std::vector<Rational> dyadic_hit_profile(const SampleRun& run, unsigned kmax, const PsiFunction& psi,
                                         const Target& target, Variant variant, unsigned jobs = 1);

/// Fills run.hits with every q in [q0, q1] whose set contains the point.
void record_hits(SampleRun& run, std::uint64_t q0, std::uint64_t q1, const PsiFunction& psi,
                 const Target& target, Variant variant, unsigned jobs = 1);

}  // namespace khinlab
