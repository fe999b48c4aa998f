#pragma once

#include "khinlab/rational.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace khinlab {

enum class PsiKind { constant, power_decay, support_restricted, explicit_table, normalized };

/// Named integer predicate used to restrict the support of a psi function.
struct SupportPredicate {
  std::string name;
  std::function<bool(std::uint64_t)> contains;

  static SupportPredicate all();
  static SupportPredicate none();
  static SupportPredicate primes();
  static SupportPredicate even();
  static SupportPredicate odd();
  static SupportPredicate up_to(std::uint64_t last);
  static SupportPredicate from(std::uint64_t first);
};

/// Immutable, cheaply copyable approximation function q -> psi(q) with exact
/// rational values. Evaluation is pure and reentrant.
class PsiFunction {
 public:
  struct Node;

  PsiFunction() = delete;

  Rational operator()(std::uint64_t q) const;

  PsiKind kind() const;
  std::string describe() const;

  /// Decay exponent delta for power-decay functions (and anything wrapping
  /// one); empty otherwise.
  std::optional<Rational> decay_exponent() const;

  /// psi(1..q_max) as a dense table; index 0 holds psi(0) = 0.
  std::vector<Rational> tabulate(std::uint64_t q_max) const;

 private:
  explicit PsiFunction(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;

  friend PsiFunction constant_psi(Rational value);
  friend PsiFunction power_psi(Rational c, Rational delta, std::uint64_t grid);
  friend PsiFunction table_psi(std::map<std::uint64_t, Rational> table);
  friend PsiFunction restrict_support(const PsiFunction& f, SupportPredicate support);
  friend PsiFunction normalize(const PsiFunction& f, Rational c);
};

inline constexpr std::uint64_t kDefaultPsiGrid = std::uint64_t{1} << 32U;

PsiFunction constant_psi(Rational value);

/// psi(q) = floor(c * q^-delta * grid) / grid, computed exactly by integer
/// root bracketing. Never exceeds c * q^-delta. Requires c > 0, delta > 0, grid >= 2.
PsiFunction power_psi(Rational c, Rational delta, std::uint64_t grid = kDefaultPsiGrid);

/// Values not in the table evaluate to 0.
PsiFunction table_psi(std::map<std::uint64_t, Rational> table);

/// Reads "q,num/den" lines. Blank lines, '#' comments and a leading
/// non-numeric header line are skipped.
PsiFunction load_psi_table(std::istream& in);
PsiFunction load_psi_table_file(const std::string& path);

PsiFunction restrict_support(const PsiFunction& f, SupportPredicate support);

/// min{c * f(q), 1/2} pointwise. Requires 0 < c <= 1.
PsiFunction normalize(const PsiFunction& f, Rational c);

struct DecayCheck {
  bool holds = true;
  std::optional<std::uint64_t> first_violation;
};

/// Checks f(q) <= q^-delta exactly for every q <= q_max.
DecayCheck check_decay(const PsiFunction& f, const Rational& delta, std::uint64_t q_max);

/// Single-point form of check_decay.
bool satisfies_decay(const Rational& psi_q, std::uint64_t q, const Rational& delta);

}  // namespace khinlab
