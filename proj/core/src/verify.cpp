#include "khinlab/verify.hpp"

#include "khinlab/numtheory.hpp"
#include "khinlab/parallel.hpp"

#include <numeric>

namespace khinlab {

namespace {

const Rational kHalf(1, 2);

std::string u(std::uint64_t v) { return std::to_string(v); }

std::string approximant_text(const ApproximantPair& ap) {
  return "(" + std::to_string(ap.a.first) + "," + std::to_string(ap.a.second) + ")/" + u(ap.b);
}

std::string pair_text(const RationalPair& p) { return to_string(p.first) + "," + to_string(p.second); }

bool in_regime(const Rational& psi) { return psi >= 0 && psi <= kHalf; }

}  // namespace

std::string to_string(LemmaId id) {
  switch (id) {
    case LemmaId::basic_size: return "basic-size";
    case LemmaId::overlap: return "overlap";
    case LemmaId::key: return "key";
    case LemmaId::divisor_identity: return "divisor-identity";
    case LemmaId::divisor_bound: return "divisor-bound";
    case LemmaId::ratio: return "ratio";
  }
  return "unknown";
}

LemmaId parse_lemma_id(const std::string& text) {
  for (LemmaId id : {LemmaId::basic_size, LemmaId::overlap, LemmaId::key, LemmaId::divisor_identity,
                     LemmaId::divisor_bound, LemmaId::ratio}) {
    if (to_string(id) == text) return id;
  }
  throw std::invalid_argument("unknown lemma id '" + text + "'");
}

const Rational& LemmaReport::value(const std::string& name) const {
  for (const auto& [k, v] : computed_values) {
    if (k == name) return v;
  }
  throw std::out_of_range("lemma report has no value '" + name + "'");
}

const std::string& LemmaReport::parameter(const std::string& name) const {
  for (const auto& [k, v] : parameters) {
    if (k == name) return v;
  }
  throw std::out_of_range("lemma report has no parameter '" + name + "'");
}

LemmaReport verify_basic_size(std::uint64_t q, const Rational& psi_q, const RationalPair& y,
                              const ApproximantPair& approximant, const AuditOptions& options,
                              const EnumerationCaps& caps) {
  LemmaReport report;
  report.lemma_id = LemmaId::basic_size;
  report.parameters = {{"q", u(q)},
                       {"psi", to_string(psi_q)},
                       {"y", pair_text(y)},
                       {"approximant", approximant_text(approximant)}};
  const auto abs64 = [](std::int64_t v) { return static_cast<std::uint64_t>(v < 0 ? -v : v); };
  const bool coprime =
      std::gcd(std::gcd(abs64(approximant.a.first), abs64(approximant.a.second)), approximant.b) == 1;
  report.hypothesis_satisfied = q >= 1 && in_regime(psi_q) && coprime;
  if (!report.hypothesis_satisfied) {
    report.witness = !in_regime(psi_q) ? "psi outside [0, 1/2]" : "gcd(a1, a2, b) != 1";
    return report;
  }

  const auto full = SetDescriptor::full(q, psi_q, y);
  const auto tilde = SetDescriptor::tilde(q, psi_q, y, approximant);
  const Rational full_closed = measure_closed_form(full);
  const Rational tilde_closed =
      options.corrupt_euler_product
          ? Rational(4 * psi_q * psi_q * coprime_box_density(q, 1))
          : measure_closed_form(tilde);
  const Rational full_oracle = measure_oracle(full, caps);
  const Rational tilde_oracle = measure_oracle(tilde, caps);

  report.computed_values = {{"full_closed", full_closed},
                            {"full_oracle", full_oracle},
                            {"tilde_closed", tilde_closed},
                            {"tilde_oracle", tilde_oracle}};
  report.conclusion_verified = full_closed == full_oracle && tilde_closed == tilde_oracle;
  if (full_closed != full_oracle) {
    report.witness = "full: closed " + to_string(full_closed) + " != oracle " + to_string(full_oracle);
  } else if (tilde_closed != tilde_oracle) {
    report.witness =
        "tilde: closed " + to_string(tilde_closed) + " != oracle " + to_string(tilde_oracle);
  }
  return report;
}

Rational overlap_ratio(std::uint64_t q, std::uint64_t r, const PsiFunction& psi, const Target& target,
                       const EnumerationCaps& caps) {
  if (q <= r || r == 0) throw std::invalid_argument("overlap_ratio: requires q > r >= 1");
  const auto dq = SetDescriptor::from_target(target, psi, q, Variant::tilde);
  const auto dr = SetDescriptor::from_target(target, psi, r, Variant::tilde);
  const Rational psi_q2 = dq.psi_q * dq.psi_q;
  const Rational g(from_uint64(std::gcd(q, r)));
  const Rational qq(from_uint64(q));
  const Rational bound = psi_q2 * dr.psi_q * dr.psi_q + psi_q2 * g * g / (qq * qq);
  if (bound == 0) return Rational(0);
  return pair_intersection_measure(dq, dr, caps) / bound;
}

std::vector<OverlapPoint> overlap_ratio_grid(std::uint64_t q_max, const PsiFunction& psi,
                                             const Target& target, unsigned jobs,
                                             const EnumerationCaps& caps) {
  std::vector<OverlapPoint> points;
  for (std::uint64_t q = 2; q <= q_max; ++q) {
    for (std::uint64_t r = 1; r < q; ++r) points.push_back({q, r, Rational(0)});
  }
  parallel_for(points.size(), jobs, [&](std::size_t i) {
    points[i].ratio = overlap_ratio(points[i].q, points[i].r, psi, target, caps);
  });
  return points;
}

bool key_gcd_condition(std::uint64_t q, std::uint64_t r, const Rational& delta) {
  // gcd > 4 q^(3/(delta+3))  <=>  gcd/4 > q^(3/(delta+3))
  const Rational g(from_uint64(std::gcd(q, r)));
  return cmp_rpow(g / 4, Rational(from_uint64(q)), Rational(3) / (delta + 3)) ==
         std::strong_ordering::greater;
}

LemmaReport key_disjointness(std::uint64_t q, std::uint64_t r, const PsiFunction& psi,
                             const Target& target, const EnumerationCaps& caps) {
  if (q <= r || r == 0) throw std::invalid_argument("key_disjointness: requires q > r >= 1");
  const Rational& delta = target.delta();
  LemmaReport report;
  report.lemma_id = LemmaId::key;
  const std::uint64_t g = std::gcd(q, r);
  report.parameters = {{"q", u(q)}, {"r", u(r)}, {"delta", to_string(delta)},
                       {"y", pair_text(target.y())}, {"gcd", u(g)}};
  const Rational psi_q = psi(q);
  const Rational psi_r = psi(r);
  report.computed_values = {{"psi_q", psi_q}, {"psi_r", psi_r}};

  const bool decay_q = satisfies_decay(psi_q, q, delta);
  const bool decay_r = satisfies_decay(psi_r, r, delta);
  const bool gcd_ok = key_gcd_condition(q, r, delta);
  const bool regime = in_regime(psi_q) && in_regime(psi_r);
  report.hypothesis_satisfied = decay_q && decay_r && gcd_ok && regime;
  if (!report.hypothesis_satisfied) {
    report.witness = !decay_q   ? "psi(q) > q^-delta"
                     : !decay_r ? "psi(r) > r^-delta"
                     : !gcd_ok  ? "gcd(q,r) <= 4 q^(3/(delta+3))"
                                : "psi outside [0, 1/2]";
    return report;
  }

  const auto dq = SetDescriptor::from_target(target, psi, q, Variant::tilde);
  const auto dr = SetDescriptor::from_target(target, psi, r, Variant::full);
  const Rational overlap = pair_intersection_measure(dq, dr, caps);
  const Rational qq(from_uint64(q)), rr(from_uint64(r)), gg(from_uint64(g));
  const Rational b(from_uint64(dq.approximant->b));
  // Box halfwidths against the lower bound gcd/(2 b q r) on center distances.
  const Rational halfwidth_sum = psi_q / qq + psi_r / rr;
  const Rational gap_bound = gg / (2 * b * qq * rr);
  report.computed_values.emplace_back("b_q", b);
  report.computed_values.emplace_back("halfwidth_sum", halfwidth_sum);
  report.computed_values.emplace_back("center_gap_bound", gap_bound);
  report.computed_values.emplace_back("intersection", overlap);
  report.conclusion_verified = overlap == 0;
  if (!report.conclusion_verified) {
    report.witness = "|tilde A_q cap A_r| = " + to_string(overlap);
  } else if (!(halfwidth_sum < gap_bound)) {
    report.witness = "halfwidth sum does not clear the center-gap bound";
  }
  return report;
}

LemmaReport divisor_identity(std::uint64_t q) {
  if (q == 0) throw std::invalid_argument("divisor_identity: q must be positive");
  LemmaReport report;
  report.lemma_id = LemmaId::divisor_identity;
  report.parameters = {{"q", u(q)}};
  report.hypothesis_satisfied = true;

  BigInt gcd_squares = 0;
  for (std::uint64_t r = 1; r <= q; ++r) {
    const std::uint64_t g = std::gcd(q, r);
    gcd_squares += from_uint64(g * g);
  }
  const BigInt qb = from_uint64(q);
  const Rational lhs = make_rational(gcd_squares, qb * qb);

  const auto f = factorize(q);
  Rational rhs(0);
  for (std::uint64_t e : divisors(f)) {
    const BigInt eb = from_uint64(e);
    rhs += make_rational(from_uint64(phi(e)), eb * eb);
  }
  report.computed_values = {{"lhs", lhs}, {"rhs", rhs}};
  report.conclusion_verified = lhs == rhs;
  if (!report.conclusion_verified) report.witness = "lhs != rhs";
  return report;
}

LemmaReport restricted_divisor_bound(std::uint64_t q, const Rational& delta) {
  if (q == 0) throw std::invalid_argument("restricted_divisor_bound: q must be positive");
  if (delta <= 0) throw std::invalid_argument("restricted_divisor_bound: delta must be positive");
  LemmaReport report;
  report.lemma_id = LemmaId::divisor_bound;
  report.parameters = {{"q", u(q)}, {"delta", to_string(delta)}};
  report.hypothesis_satisfied = true;

  const Rational qq(from_uint64(q));
  const Rational small_exp = Rational(3) / (delta + 3);
  const Rational large_exp = delta / (delta + 3);
  const BigInt q2 = from_uint64(q) * from_uint64(q);

  const auto f = factorize(q);
  const auto divs = divisors(f);
  const std::uint64_t t = tau(f);

  // d <= 4 q^(3/(delta+3)), decided once per divisor.
  std::vector<std::uint64_t> kept_d;
  Rational lower(0);
  for (std::uint64_t d : divs) {
    if (cmp_rpow(make_rational(from_uint64(d), 4), qq, small_exp) == std::strong_ordering::greater) continue;
    kept_d.push_back(d);
    lower += make_rational(from_uint64(d) * from_uint64(d) * from_uint64(phi(q / d)), q2);
  }

  BigInt direct_num = 0;
  for (std::uint64_t r = 1; r <= q; ++r) {
    const std::uint64_t g = std::gcd(q, r);
    if (std::binary_search(kept_d.begin(), kept_d.end(), g)) direct_num += from_uint64(g * g);
  }
  const Rational direct = make_rational(direct_num, q2);

  Rational middle(0), upper(0);
  for (std::uint64_t e : divs) {
    // e >= q^(delta/(delta+3)) / 4  <=>  4e >= q^(delta/(delta+3))
    if (cmp_rpow(Rational(from_uint64(4 * e)), qq, large_exp) == std::strong_ordering::less) continue;
    const BigInt eb = from_uint64(e);
    middle += make_rational(from_uint64(phi(e)), eb * eb);
    upper += make_rational(1, eb);
  }
  // U < 4 tau / q^(delta/(delta+3))  <=>  U / (4 tau) < q^(-delta/(delta+3))
  const Rational four_tau(from_uint64(4 * t));
  const bool tail_ok = cmp_rpow(upper / four_tau, qq, -large_exp) == std::strong_ordering::less;

  report.computed_values = {{"L_direct", direct}, {"L", lower},       {"M", middle},
                            {"U", upper},         {"tau", four_tau / 4}};
  const bool first = direct == lower;
  const bool second = lower == middle;
  const bool third = middle <= upper;
  report.conclusion_verified = first && second && third && tail_ok;
  if (!first) {
    report.witness = "r-sum != divisor sum";
  } else if (!second) {
    report.witness = "L != M";
  } else if (!third) {
    report.witness = "M > U";
  } else if (!tail_ok) {
    report.witness = "U >= 4 tau(q) / q^(delta/(delta+3))";
  }
  return report;
}

std::vector<std::optional<Rational>> quasi_independence_profile(std::uint64_t q_max,
                                                                const PsiFunction& psi,
                                                                const Target& target, unsigned jobs,
                                                                const EnumerationCaps& caps) {
  std::vector<SetDescriptor> sets;
  sets.reserve(q_max);
  for (std::uint64_t q = 1; q <= q_max; ++q) {
    sets.push_back(SetDescriptor::from_target(target, psi, q, Variant::tilde));
  }
  std::vector<Rational> row(q_max);
  parallel_for(q_max, jobs, [&](std::size_t i) {
    Rational sum(0);
    for (std::size_t j = 0; j < i; ++j) sum += pair_intersection_measure(sets[i], sets[j], caps);
    row[i] = std::move(sum);
  });

  std::vector<std::optional<Rational>> out;
  out.reserve(q_max);
  Rational single(0), pairs(0);
  for (std::size_t i = 0; i < q_max; ++i) {
    const Rational m = measure_closed_form(sets[i]);
    single += m;
    pairs += m + 2 * row[i];
    if (pairs == 0) {
      out.emplace_back();
    } else {
      out.emplace_back(single * single / pairs);
    }
  }
  return out;
}

Rational quasi_independence_ratio(std::uint64_t q_max, const PsiFunction& psi, const Target& target,
                                  unsigned jobs, const EnumerationCaps& caps) {
  if (q_max == 0) throw std::invalid_argument("quasi_independence_ratio: Q must be positive");
  auto profile = quasi_independence_profile(q_max, psi, target, jobs, caps);
  if (!profile.back()) {
    throw UndefinedRatio("quasi_independence_ratio: psi vanishes on [1, " + u(q_max) + "]");
  }
  return *profile.back();
}

LemmaReport quasi_independence_report(std::uint64_t q_max, const PsiFunction& psi,
                                      const Target& target, unsigned jobs,
                                      const EnumerationCaps& caps) {
  LemmaReport report;
  report.lemma_id = LemmaId::ratio;
  report.parameters = {{"Q", u(q_max)},
                       {"psi", psi.describe()},
                       {"y", pair_text(target.y())},
                       {"delta", to_string(target.delta())}};
  report.hypothesis_satisfied = true;
  try {
    const Rational ratio = quasi_independence_ratio(q_max, psi, target, jobs, caps);
    report.computed_values = {{"R", ratio}};
    report.conclusion_verified = ratio <= 1;
    if (!report.conclusion_verified) report.witness = "R(Q) > 1 violates Cauchy-Schwarz";
  } catch (const UndefinedRatio& e) {
    report.hypothesis_satisfied = false;
    report.witness = e.what();
  }
  return report;
}

}  // namespace khinlab
