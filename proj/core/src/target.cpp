#include "khinlab/target.hpp"

#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace khinlab {

namespace {

void check_coordinate(const Rational& v) {
  if (v < 0 || v >= 1) throw std::invalid_argument("target coordinate outside [0,1): " + to_string(v));
}

// delta / (delta + 3)
Rational error_exponent(const Rational& delta) { return delta / (delta + 3); }

std::uint64_t abs64(std::int64_t v) { return static_cast<std::uint64_t>(v < 0 ? -v : v); }

}  // namespace

Target::Target(RationalPair y, Rational delta) : y_(std::move(y)), delta_(std::move(delta)) {
  check_coordinate(y_.first);
  check_coordinate(y_.second);
  if (delta_ <= 0) throw std::invalid_argument("target: delta must be positive");
}

Target::Target(const Target& other) : y_(other.y_), delta_(other.delta_) {
  std::shared_lock lock(other.mutex_);
  cache_ = other.cache_;
}

Target& Target::operator=(const Target& other) {
  if (this == &other) return *this;
  std::map<std::uint64_t, ApproximantPair> copy;
  {
    std::shared_lock lock(other.mutex_);
    copy = other.cache_;
  }
  std::unique_lock lock(mutex_);
  y_ = other.y_;
  delta_ = other.delta_;
  cache_ = std::move(copy);
  return *this;
}

std::uint64_t Target::max_denominator(std::uint64_t q) const {
  // b <= q^(2p/(p+3s))  <=>  b^(p+3s) <= q^(2p)
  const Rational e = 2 * error_exponent(delta_);
  const unsigned long num = mpz_get_ui(e.num_ref().get_mpz_t());
  const unsigned long den = mpz_get_ui(e.den_ref().get_mpz_t());
  BigInt power;
  mpz_ui_pow_ui(power.get_mpz_t(), q, num);
  return to_uint64(integer_root(power, den));
}

ApproximantPair Target::approximant(std::uint64_t q) const {
  if (q == 0) throw std::invalid_argument("approximant: q must be positive");
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(q); it != cache_.end()) return it->second;
  }

  const Rational q_rat(from_uint64(q));
  const Rational neg_exp = -error_exponent(delta_);
  const std::uint64_t b_max = max_denominator(q);

  std::optional<ApproximantPair> found;
  for (std::uint64_t b = 1; b <= b_max && !found; ++b) {
    const Rational by1 = y_.first * Rational(from_uint64(b));
    const Rational by2 = y_.second * Rational(from_uint64(b));
    // The threshold is at most 1, so only floor and floor+1 can qualify.
    const std::int64_t f1 = to_int64(floor_of(by1));
    const std::int64_t f2 = to_int64(floor_of(by2));
    Rational best_error;
    for (std::int64_t a1 = f1; a1 <= f1 + 1; ++a1) {
      for (std::int64_t a2 = f2; a2 <= f2 + 1; ++a2) {
        if (std::gcd(std::gcd(abs64(a1), abs64(a2)), b) != 1) continue;
        const Rational e1 = abs(by1 - a1);
        const Rational e2 = abs(by2 - a2);
        const Rational err = e1 > e2 ? e1 : e2;
        if (cmp_rpow(err, q_rat, neg_exp) != std::strong_ordering::less) continue;
        if (!found || err < best_error) {
          found = ApproximantPair{{a1, a2}, b, q};
          best_error = err;
        }
      }
    }
  }
  if (!found) {
    throw std::runtime_error("approximant: no admissible b <= " + std::to_string(b_max) +
                             " for q=" + std::to_string(q));
  }

  std::unique_lock lock(mutex_);
  return cache_.emplace(q, *found).first->second;
}

std::size_t Target::cached_count() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

Rational approximation_error(const RationalPair& y, const ApproximantPair& p) {
  const Rational b(from_uint64(p.b));
  const Rational e1 = abs(b * y.first - p.a.first);
  const Rational e2 = abs(b * y.second - p.a.second);
  return e1 > e2 ? e1 : e2;
}

ApproximantReport validate_approximant(const Target& t, const ApproximantPair& p) {
  ApproximantReport report;
  if (p.q == 0) return report;
  const Rational q(from_uint64(p.q));
  const Rational ratio = t.delta() / (t.delta() + 3);
  report.error = approximation_error(t.y(), p);
  report.error_ok = cmp_rpow(report.error, q, -ratio) == std::strong_ordering::less;
  report.bound_ok = p.b >= 1 && cmp_rpow(Rational(from_uint64(p.b)), q, 2 * ratio) !=
                                    std::strong_ordering::greater;
  report.coprime_ok = std::gcd(std::gcd(abs64(p.a.first), abs64(p.a.second)), p.b) == 1;
  return report;
}

}  // namespace khinlab
