#pragma once

#include "khinlab/psi.hpp"
#include "khinlab/rational.hpp"
#include "khinlab/target.hpp"
#include "khinlab/torus.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace khinlab {

enum class Variant { full, tilde };

std::string to_string(Variant v);
Variant parse_variant(const std::string& text);

/// Symbolic form of A_q (full) or its coprime-restricted subset (tilde):
///   A_q = { x in [0,1)^2 : |q*x - p - y| < psi_q for some integer p },
/// the tilde variant additionally requiring gcd(q, b*p + a) = 1 for the
/// attached approximant (a, b). Always 0 <= psi_q <= 1/2.
struct SetDescriptor {
  std::uint64_t q = 1;
  Rational psi_q;
  RationalPair y;
  Variant variant = Variant::full;
  std::optional<ApproximantPair> approximant;

  static SetDescriptor full(std::uint64_t q, Rational psi_q, RationalPair y);
  static SetDescriptor tilde(std::uint64_t q, Rational psi_q, RationalPair y, ApproximantPair approximant);
  static SetDescriptor from_target(const Target& t, const PsiFunction& psi, std::uint64_t q,
                                   Variant variant);

  /// Box halfwidth psi_q / q in x-units.
  Rational halfwidth() const;

  /// Whether residue p (any integer representative) carries a box.
  bool admissible(std::int64_t p1, std::int64_t p2) const;
};

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EnumerationCaps {
  std::uint64_t oracle = 200;
  std::uint64_t pair = 10'000;
};

/// 4 psi^2, times the coprime box density for the tilde variant.
Rational measure_closed_form(const SetDescriptor& d);

/// Sums the exact areas of all (admissible) boxes one residue at a time.
Rational measure_oracle(const SetDescriptor& d, const EnumerationCaps& caps = {});

/// Exact |d1 ∩ d2|. Two full sets go through the 1-D product decomposition;
/// anything involving a tilde set goes through pair_intersection_by_enumeration.
/// Both descriptors must share y.
Rational pair_intersection_measure(const SetDescriptor& d1, const SetDescriptor& d2,
                                   const EnumerationCaps& caps = {});

/// Aligned-candidate enumeration: every box of the finer set is matched per
/// coordinate against the few boxes of the coarser set within reach, and the
/// exact per-coordinate overlaps are combined over admissible residue pairs.
/// Valid for any variant combination.
Rational pair_intersection_by_enumeration(const SetDescriptor& d1, const SetDescriptor& d2,
                                          const EnumerationCaps& caps = {});

/// Exact membership with strict inequality. x in [0,1)^2.
bool member(const RationalPair& x, const SetDescriptor& d);

/// Exact |d ∩ U|.
Rational window_measure(const SetDescriptor& d, const TorusBox& window,
                        const EnumerationCaps& caps = {});

/// Membership for one descriptor, specialised for dyadic points X / 2^64.
/// Uses 128-bit integer arithmetic when the descriptor's denominators allow
/// it and falls back to the rational path otherwise.
class MembershipProbe {
 public:
  explicit MembershipProbe(SetDescriptor d);

  bool contains_dyadic(std::uint64_t x1, std::uint64_t x2) const;
  bool contains(const RationalPair& x) const { return member(x, descriptor_); }
  const SetDescriptor& descriptor() const { return descriptor_; }
  bool uses_fast_path() const { return fast_; }

 private:
  struct Axis {
    std::uint64_t y_num = 0;
    std::uint64_t y_den = 1;
  };

  SetDescriptor descriptor_;
  bool fast_ = false;
  bool empty_ = false;
  std::uint64_t psi_num_ = 0;
  std::uint64_t psi_den_ = 1;
  Axis axis_[2];
};

}  // namespace khinlab
