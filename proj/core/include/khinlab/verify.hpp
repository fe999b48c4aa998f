#pragma once

#include "khinlab/psi.hpp"
#include "khinlab/rational.hpp"
#include "khinlab/sets.hpp"
#include "khinlab/target.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace khinlab {

enum class LemmaId { basic_size, overlap, key, divisor_identity, divisor_bound, ratio };

std::string to_string(LemmaId id);
LemmaId parse_lemma_id(const std::string& text);

/// Outcome of one lemma audit at one parameter point. A report whose
/// hypothesis holds but whose conclusion fails is a falsification.
struct LemmaReport {
  LemmaId lemma_id = LemmaId::basic_size;
  std::vector<std::pair<std::string, std::string>> parameters;
  bool hypothesis_satisfied = false;
  bool conclusion_verified = false;
  std::optional<std::string> witness;
  std::vector<std::pair<std::string, Rational>> computed_values;

  bool falsified() const { return hypothesis_satisfied && !conclusion_verified; }

  /// Throws std::out_of_range for unknown names.
  const Rational& value(const std::string& name) const;
  const std::string& parameter(const std::string& name) const;
};

/// Fault injection for demonstrating that an audit can fail.
struct AuditOptions {
  /// Replace the tilde closed form's Euler factor by the product over every
  /// prime dividing q, ignoring whether it divides b.
  bool corrupt_euler_product = false;
};

/// Closed-form measures against box-by-box enumeration, both variants.
LemmaReport verify_basic_size(std::uint64_t q, const Rational& psi_q, const RationalPair& y,
                              const ApproximantPair& approximant, const AuditOptions& options = {},
                              const EnumerationCaps& caps = {});

/// |Ã_q ∩ Ã_r| / (psi(q)^2 psi(r)^2 + psi(q)^2 gcd(q,r)^2 / q^2), defined as 0
/// when psi(q) = 0. Requires q > r and psi <= 1/2 at both indices.
Rational overlap_ratio(std::uint64_t q, std::uint64_t r, const PsiFunction& psi, const Target& target,
                       const EnumerationCaps& caps = {});

struct OverlapPoint {
  std::uint64_t q = 0;
  std::uint64_t r = 0;
  Rational ratio;
};

/// overlap_ratio for every 1 <= r < q <= q_max, in (q, r)-lexicographic order.
std::vector<OverlapPoint> overlap_ratio_grid(std::uint64_t q_max, const PsiFunction& psi,
                                             const Target& target, unsigned jobs = 1,
                                             const EnumerationCaps& caps = {});

/// Disjointness of Ã_q and A_r (which implies |Ã_q ∩ Ã_r| = 0) under
/// psi(q) <= q^-delta, psi(r) <= r^-delta and gcd(q,r) > 4 q^(3/(delta+3)),
/// with delta taken from the target. Requires q > r >= 1.
LemmaReport key_disjointness(std::uint64_t q, std::uint64_t r, const PsiFunction& psi,
                             const Target& target, const EnumerationCaps& caps = {});

/// gcd(q, r) > 4 q^(3/(delta+3)), exactly.
bool key_gcd_condition(std::uint64_t q, std::uint64_t r, const Rational& delta);

/// sum_{r=1}^q gcd(q,r)^2 / q^2 against sum_{e | q} phi(e) / e^2.
LemmaReport divisor_identity(std::uint64_t q);

/// The chain
///   sum_{d | q, d <= 4 q^(3/(delta+3))} (d^2/q^2) phi(q/d)
///     = sum_{e | q, e >= q^(delta/(delta+3))/4} phi(e)/e^2
///    <= sum over the same e of 1/e
///     < 4 tau(q) / q^(delta/(delta+3)),
/// plus the r-sum the first term comes from.
LemmaReport restricted_divisor_bound(std::uint64_t q, const Rational& delta);

struct UndefinedRatio : std::domain_error {
  using std::domain_error::domain_error;
};

/// (sum_{q<=Q} |Ã_q|)^2 / sum_{q,r<=Q} |Ã_q ∩ Ã_r|. Throws UndefinedRatio when
/// psi vanishes on [1, Q].
Rational quasi_independence_ratio(std::uint64_t q_max, const PsiFunction& psi, const Target& target,
                                  unsigned jobs = 1, const EnumerationCaps& caps = {});

/// R(Q) for every Q in [1, q_max]; empty entries where the ratio is undefined.
std::vector<std::optional<Rational>> quasi_independence_profile(std::uint64_t q_max,
                                                                const PsiFunction& psi,
                                                                const Target& target,
                                                                unsigned jobs = 1,
                                                                const EnumerationCaps& caps = {});

/// Report form: conclusion is R(Q) <= 1.
LemmaReport quasi_independence_report(std::uint64_t q_max, const PsiFunction& psi,
                                      const Target& target, unsigned jobs = 1,
                                      const EnumerationCaps& caps = {});

}  // namespace khinlab
