#pragma once

#include "khinlab/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace khinlab {

/// Half-open piece [lo, hi) of the circle [0,1).
struct Interval {
  Rational lo;
  Rational hi;

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of rational arcs of the circle R/Z, kept normalized: pieces
/// lie in [0,1], are sorted, nonempty and neither overlap nor touch. Arcs that
/// wrap are split at 1.
class IntervalSet1D {
 public:
  IntervalSet1D() = default;

  /// Normalizes an arbitrary list of pieces already inside [0,1].
  static IntervalSet1D from_pieces(std::vector<Interval> pieces);

  /// The open arc (center - halfwidth, center + halfwidth) reduced mod 1.
  /// Requires 0 <= halfwidth; a halfwidth >= 1/2 yields the full circle.
  static IntervalSet1D arc(const Rational& center, const Rational& halfwidth);

  static IntervalSet1D full();

  const std::vector<Interval>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }

  /// Strict interior test, matching the open inequality of the arcs.
  bool contains(const Rational& x) const;

  friend bool operator==(const IntervalSet1D&, const IntervalSet1D&) = default;

 private:
  std::vector<Interval> pieces_;
};

/// Centers (k + offset)/q for k = 0..q-1, each widened by halfwidth on both
/// sides, reduced mod 1. Requires 0 <= halfwidth <= 1/(2q); throws
/// std::invalid_argument otherwise.
IntervalSet1D progression_set(std::uint64_t q, const Rational& offset, const Rational& halfwidth);

IntervalSet1D intersect(const IntervalSet1D& a, const IntervalSet1D& b);
IntervalSet1D unite(const IntervalSet1D& a, const IntervalSet1D& b);
Rational measure(const IntervalSet1D& a);

/// Length of the intersection of two open arcs on the circle, each of length
/// at most 1. One arc is lifted against the three nearest translates of the other.
Rational arc_overlap(const Rational& center_a, const Rational& halfwidth_a,
                     const Rational& center_b, const Rational& halfwidth_b);

/// "lo_num/lo_den,hi_num/hi_den;..." debug dump; empty set renders as "".
std::string serialize(const IntervalSet1D& a);
IntervalSet1D deserialize_interval_set(const std::string& text);

/// Axis-aligned box on the 2-torus: center + (-h1,h1) x (-h2,h2), halfwidths <= 1/2.
struct TorusBox {
  RationalPair center;
  RationalPair halfwidth;

  TorusBox(RationalPair center, RationalPair halfwidth);

  static TorusBox whole();

  IntervalSet1D first_factor() const;
  IntervalSet1D second_factor() const;
  Rational area() const;
};

}  // namespace khinlab
