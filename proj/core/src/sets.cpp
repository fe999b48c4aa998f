#include "khinlab/sets.hpp"

#include "khinlab/numtheory.hpp"

#include <map>
#include <numeric>
#include <vector>

namespace khinlab {

namespace {

using i128 = __int128;
using u64 = std::uint64_t;

const Rational kHalf(1, 2);

void check_psi(const Rational& psi_q) {
  if (psi_q < 0) throw std::invalid_argument("set descriptor: negative psi");
  if (psi_q > kHalf) {
    throw std::invalid_argument("set descriptor: psi_q = " + to_string(psi_q) + " exceeds 1/2");
  }
}

void check_cap(u64 q, u64 cap, const char* what) {
  if (q > cap) {
    throw CapExceeded(std::string(what) + ": q=" + std::to_string(q) + " exceeds cap " +
                      std::to_string(cap));
  }
}

u64 residue(i128 v, u64 q) {
  const i128 m = static_cast<i128>(q);
  i128 r = v % m;
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

// gcd(q, b*k + a_c) for every residue k; all ones for the full variant.
std::vector<u64> gcd_table(const SetDescriptor& d, int coordinate) {
  std::vector<u64> out(d.q, 1);
  if (d.variant == Variant::full) return out;
  const auto& ap = *d.approximant;
  const u64 b = ap.b % d.q;
  const u64 a = residue(coordinate == 0 ? ap.a.first : ap.a.second, d.q);
  u64 c = a;
  for (u64 k = 0; k < d.q; ++k) {
    out[k] = std::gcd(d.q, c);
    c = (c + b) % d.q;
  }
  return out;
}

Rational center(const SetDescriptor& d, u64 k, const Rational& y) {
  return (Rational(from_uint64(k)) + y) / Rational(from_uint64(d.q));
}

const Rational& coord(const RationalPair& p, int c) { return c == 0 ? p.first : p.second; }

// ---- integer kernel -------------------------------------------------------

template <class Int>
struct KernelTraits;

template <>
struct KernelTraits<std::int64_t> {
  using Acc = i128;
  static std::int64_t from(const BigInt& v) { return to_int64(v); }
  static std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  }
  static BigInt to_big(i128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    BigInt hi = from_uint64(static_cast<u64>(u >> 64U));
    BigInt out = (hi << 64) + from_uint64(static_cast<u64>(u));
    return neg ? BigInt(-out) : out;
  }
  static Acc mul(std::int64_t a, std::int64_t b) { return static_cast<i128>(a) * b; }
};

template <>
struct KernelTraits<BigInt> {
  using Acc = BigInt;
  static BigInt from(const BigInt& v) { return v; }
  static BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
  }
  static BigInt to_big(const BigInt& v) { return v; }
  static Acc mul(const BigInt& a, const BigInt& b) { return a * b; }
};

// One coordinate of a set scaled to the integer circle Z/L.
template <class Int>
struct ScaledAxis {
  u64 q;
  Int step;    // L / q
  Int offset;  // y * L / q
  Int half;    // psi * L / q
};

template <class Int>
struct AxisOverlap {
  u64 fine;    // residue of the finer set
  u64 coarse;  // residue of the coarser set
  Int length;
};

template <class Int>
Int circle_overlap(const Int& ca, const Int& ha, const Int& cb, const Int& hb, const Int& circle) {
  Int total = 0;
  for (int shift = -1; shift <= 1; ++shift) {
    const Int lift = cb + Int(shift) * circle;
    const Int lo_a = ca - ha, hi_a = ca + ha;
    const Int lo_b = lift - hb, hi_b = lift + hb;
    const Int& lo = lo_a > lo_b ? lo_a : lo_b;
    const Int& hi = hi_a < hi_b ? hi_a : hi_b;
    if (lo < hi) total += hi - lo;
  }
  return total;
}

template <class Int>
std::vector<AxisOverlap<Int>> axis_overlaps(const ScaledAxis<Int>& fine, const ScaledAxis<Int>& coarse,
                                            const Int& circle) {
  using T = KernelTraits<Int>;
  std::vector<AxisOverlap<Int>> out;
  std::vector<u64> candidates;
  for (u64 k = 0; k < fine.q; ++k) {
    const Int c = Int(static_cast<long>(k)) * fine.step + fine.offset;
    candidates.clear();
    if (coarse.q <= 4) {
      for (u64 s = 0; s < coarse.q; ++s) candidates.push_back(s);
    } else {
      // Only the coarser centers bracketing c lie within the summed halfwidths.
      const Int s0 = T::floor_div(c - coarse.offset, coarse.step);
      for (int delta = -1; delta <= 2; ++delta) {
        const Int s = s0 + Int(delta);
        const Int qc = Int(static_cast<long>(coarse.q));
        Int r = s - T::floor_div(s, qc) * qc;
        if constexpr (std::is_same_v<Int, BigInt>) {
          candidates.push_back(to_uint64(r));
        } else {
          candidates.push_back(static_cast<u64>(r));
        }
      }
    }
    for (u64 s : candidates) {
      const Int cs = Int(static_cast<long>(s)) * coarse.step + coarse.offset;
      Int len = circle_overlap<Int>(c, fine.half, cs, coarse.half, circle);
      if (len > 0) out.push_back({k, s, std::move(len)});
    }
  }
  return out;
}

struct AxisScale {
  BigInt circle;
  BigInt step_f, offset_f, half_f;
  BigInt step_g, offset_g, half_g;
};

AxisScale scale_axis(const SetDescriptor& fine, const SetDescriptor& coarse, int c) {
  const Rational& y = coord(fine.y, c);
  const BigInt& ny = y.num_ref();
  const BigInt& dy = y.den_ref();
  const BigInt qf = from_uint64(fine.q), qg = from_uint64(coarse.q);
  BigInt circle = 1;
  for (const BigInt& v : {BigInt(qf * dy), BigInt(qf * fine.psi_q.den_ref()), BigInt(qg * dy),
                          BigInt(qg * coarse.psi_q.den_ref())}) {
    mpz_lcm(circle.get_mpz_t(), circle.get_mpz_t(), v.get_mpz_t());
  }
  AxisScale s;
  s.step_f = circle / qf;
  s.offset_f = ny * (circle / (qf * dy));
  s.half_f = fine.psi_q.num_ref() * (circle / (qf * fine.psi_q.den_ref()));
  s.step_g = circle / qg;
  s.offset_g = ny * (circle / (qg * dy));
  s.half_g = coarse.psi_q.num_ref() * (circle / (qg * coarse.psi_q.den_ref()));
  s.circle = std::move(circle);
  return s;
}

template <class Int>
Rational enumerate_pair(const SetDescriptor& fine, const SetDescriptor& coarse, const AxisScale (&scale)[2]) {
  using T = KernelTraits<Int>;
  using Acc = typename T::Acc;

  // Per coordinate, sum overlap lengths grouped by the admissibility keys
  // (gcd(q_f, b_f k + a_f), gcd(q_g, b_g s + a_g)): a residue pair carries a
  // box iff the keys of both coordinates are coprime.
  std::map<std::pair<u64, u64>, Int> grouped[2];
  for (int c = 0; c < 2; ++c) {
    const ScaledAxis<Int> f{fine.q, T::from(scale[c].step_f), T::from(scale[c].offset_f),
                            T::from(scale[c].half_f)};
    const ScaledAxis<Int> g{coarse.q, T::from(scale[c].step_g), T::from(scale[c].offset_g),
                            T::from(scale[c].half_g)};
    const auto overlaps = axis_overlaps<Int>(f, g, T::from(scale[c].circle));
    const auto keys_f = gcd_table(fine, c);
    const auto keys_g = gcd_table(coarse, c);
    for (const auto& o : overlaps) grouped[c][{keys_f[o.fine], keys_g[o.coarse]}] += o.length;
  }

  Acc total = 0;
  for (const auto& [k1, len1] : grouped[0]) {
    for (const auto& [k2, len2] : grouped[1]) {
      if (std::gcd(k1.first, k2.first) != 1 || std::gcd(k1.second, k2.second) != 1) continue;
      total += T::mul(len1, len2);
    }
  }
  return make_rational(T::to_big(total), scale[0].circle * scale[1].circle);
}

}  // namespace

std::string to_string(Variant v) { return v == Variant::full ? "full" : "tilde"; }

Variant parse_variant(const std::string& text) {
  if (text == "full") return Variant::full;
  if (text == "tilde") return Variant::tilde;
  throw std::invalid_argument("unknown variant '" + text + "' (expected full or tilde)");
}

SetDescriptor SetDescriptor::full(std::uint64_t q, Rational psi_q, RationalPair y) {
  if (q == 0) throw std::invalid_argument("set descriptor: q must be positive");
  check_psi(psi_q);
  return SetDescriptor{q, std::move(psi_q), std::move(y), Variant::full, std::nullopt};
}

SetDescriptor SetDescriptor::tilde(std::uint64_t q, Rational psi_q, RationalPair y,
                                   ApproximantPair approximant) {
  if (q == 0) throw std::invalid_argument("set descriptor: q must be positive");
  if (approximant.b == 0) throw std::invalid_argument("set descriptor: approximant b must be positive");
  check_psi(psi_q);
  return SetDescriptor{q, std::move(psi_q), std::move(y), Variant::tilde, approximant};
}

SetDescriptor SetDescriptor::from_target(const Target& t, const PsiFunction& psi, std::uint64_t q,
                                         Variant variant) {
  if (variant == Variant::full) return full(q, psi(q), t.y());
  return tilde(q, psi(q), t.y(), t.approximant(q));
}

Rational SetDescriptor::halfwidth() const { return psi_q / Rational(from_uint64(q)); }

bool SetDescriptor::admissible(std::int64_t p1, std::int64_t p2) const {
  if (variant == Variant::full) return true;
  const auto& ap = *approximant;
  const i128 b = static_cast<i128>(ap.b % q);
  const u64 c1 = residue(b * residue(p1, q) + ap.a.first, q);
  const u64 c2 = residue(b * residue(p2, q) + ap.a.second, q);
  return std::gcd(std::gcd(q, c1), c2) == 1;
}

Rational measure_closed_form(const SetDescriptor& d) {
  check_psi(d.psi_q);
  const Rational base = 4 * d.psi_q * d.psi_q;
  if (d.variant == Variant::full) return base;
  return base * coprime_box_density(d.q, d.approximant->b);
}

Rational measure_oracle(const SetDescriptor& d, const EnumerationCaps& caps) {
  check_psi(d.psi_q);
  check_cap(d.q, caps.oracle, "measure_oracle");
  const Rational h = d.halfwidth();
  std::vector<Rational> side[2];
  for (int c = 0; c < 2; ++c) {
    side[c].reserve(d.q);
    for (u64 k = 0; k < d.q; ++k) {
      side[c].push_back(measure(IntervalSet1D::arc(center(d, k, coord(d.y, c)), h)));
    }
  }
  Rational total(0);
  for (u64 p1 = 0; p1 < d.q; ++p1) {
    for (u64 p2 = 0; p2 < d.q; ++p2) {
      if (d.admissible(static_cast<std::int64_t>(p1), static_cast<std::int64_t>(p2))) {
        total += side[0][p1] * side[1][p2];
      }
    }
  }
  return total;
}

Rational pair_intersection_by_enumeration(const SetDescriptor& d1, const SetDescriptor& d2,
                                          const EnumerationCaps& caps) {
  if (d1.y != d2.y) throw std::invalid_argument("pair intersection: descriptors differ in y");
  check_cap(d1.q, caps.pair, "pair_intersection_measure");
  check_cap(d2.q, caps.pair, "pair_intersection_measure");
  if (d1.psi_q == 0 || d2.psi_q == 0) return Rational(0);
  const SetDescriptor& fine = d1.q >= d2.q ? d1 : d2;
  const SetDescriptor& coarse = d1.q >= d2.q ? d2 : d1;
  const AxisScale scale[2] = {scale_axis(fine, coarse, 0), scale_axis(fine, coarse, 1)};

  static const BigInt kLimit = BigInt(1) << 61;
  if (scale[0].circle < kLimit && scale[1].circle < kLimit) {
    return enumerate_pair<std::int64_t>(fine, coarse, scale);
  }
  return enumerate_pair<BigInt>(fine, coarse, scale);
}

Rational pair_intersection_measure(const SetDescriptor& d1, const SetDescriptor& d2,
                                   const EnumerationCaps& caps) {
  if (d1.variant != Variant::full || d2.variant != Variant::full) {
    return pair_intersection_by_enumeration(d1, d2, caps);
  }
  if (d1.y != d2.y) throw std::invalid_argument("pair intersection: descriptors differ in y");
  check_cap(d1.q, caps.pair, "pair_intersection_measure");
  check_cap(d2.q, caps.pair, "pair_intersection_measure");
  Rational total(1);
  for (int c = 0; c < 2; ++c) {
    const auto a = progression_set(d1.q, coord(d1.y, c), d1.halfwidth());
    const auto b = progression_set(d2.q, coord(d2.y, c), d2.halfwidth());
    total *= measure(intersect(a, b));
    if (total == 0) break;
  }
  return total;
}

bool member(const RationalPair& x, const SetDescriptor& d) {
  if (d.psi_q == 0) return false;
  const Rational q(from_uint64(d.q));
  std::int64_t p[2];
  for (int c = 0; c < 2; ++c) {
    const Rational t = q * coord(x, c) - coord(d.y, c);
    const Rational shifted = t + kHalf;
    const BigInt nearest = floor_of(shifted);
    bool hit = false;
    // At a tie both neighbours sit at distance 1/2, which never beats psi <= 1/2,
    // but they are checked all the same.
    const bool tie = shifted.den_ref() == 1;
    for (const BigInt& cand : {nearest, BigInt(nearest - 1)}) {
      if (abs(t - Rational(cand)) < d.psi_q) {
        p[c] = to_int64(cand);
        hit = true;
        break;
      }
      if (!tie) break;
    }
    if (!hit) return false;
  }
  return d.admissible(p[0], p[1]);
}

Rational window_measure(const SetDescriptor& d, const TorusBox& window, const EnumerationCaps& caps) {
  check_cap(d.q, caps.pair, "window_measure");
  const Rational h = d.halfwidth();
  // Weights per admissibility key; residues with coprime keys carry a box.
  std::map<u64, Rational> weight[2];
  for (int c = 0; c < 2; ++c) {
    const auto keys = gcd_table(d, c);
    const Rational& wc = coord(window.center, c);
    const Rational& wh = coord(window.halfwidth, c);
    for (u64 k = 0; k < d.q; ++k) {
      Rational len = arc_overlap(center(d, k, coord(d.y, c)), h, wc, wh);
      if (len != 0) weight[c][keys[k]] += len;
    }
  }
  Rational total(0);
  for (const auto& [g1, w1] : weight[0]) {
    for (const auto& [g2, w2] : weight[1]) {
      if (std::gcd(g1, g2) == 1) total += w1 * w2;
    }
  }
  return total;
}

MembershipProbe::MembershipProbe(SetDescriptor d) : descriptor_(std::move(d)) {
  if (descriptor_.psi_q == 0) {
    empty_ = true;
    return;
  }
  constexpr u64 kBound = u64{1} << 62U;
  const BigInt& pn = descriptor_.psi_q.num_ref();
  const BigInt& pd = descriptor_.psi_q.den_ref();
  if (!mpz_fits_ulong_p(pd.get_mpz_t()) || descriptor_.q >= kBound) return;
  psi_num_ = mpz_get_ui(pn.get_mpz_t());
  psi_den_ = mpz_get_ui(pd.get_mpz_t());
  for (int c = 0; c < 2; ++c) {
    const Rational& y = coord(descriptor_.y, c);
    if (!mpz_fits_ulong_p(y.den_ref().get_mpz_t())) return;
    axis_[c] = {mpz_get_ui(y.num_ref().get_mpz_t()), mpz_get_ui(y.den_ref().get_mpz_t())};
    const auto qd = static_cast<unsigned __int128>(descriptor_.q) * axis_[c].y_den;
    const auto pdd = static_cast<unsigned __int128>(psi_den_) * axis_[c].y_den;
    if (qd >= kBound || pdd >= kBound) return;
  }
  fast_ = true;
}

bool MembershipProbe::contains_dyadic(std::uint64_t x1, std::uint64_t x2) const {
  if (empty_) return false;
  if (!fast_) {
    const BigInt two64 = BigInt(1) << 64;
    return member({make_rational(from_uint64(x1), two64), make_rational(from_uint64(x2), two64)},
                  descriptor_);
  }
  const u64 xs[2] = {x1, x2};
  std::int64_t p[2];
  for (int c = 0; c < 2; ++c) {
    const Axis& ax = axis_[c];
    // q*x - y = t / den with den = 2^64 * y_den.
    const i128 den = static_cast<i128>(ax.y_den) << 64U;
    const i128 t = static_cast<i128>(xs[c]) * static_cast<i128>(descriptor_.q * ax.y_den) -
                   (static_cast<i128>(ax.y_num) << 64U);
    i128 nearest = t / den;
    i128 rem = t - nearest * den;
    if (rem < 0) {
      nearest -= 1;
      rem += den;
    }
    i128 dist = rem;
    if (2 * rem > den) {
      nearest += 1;
      dist = den - rem;
    }
    if (!(dist * static_cast<i128>(psi_den_) < static_cast<i128>(psi_num_) * den)) return false;
    p[c] = static_cast<std::int64_t>(nearest);
  }
  return descriptor_.admissible(p[0], p[1]);
}

}  // namespace khinlab
