#include "khinlab/sets.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace khinlab;

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }

const RationalPair kOrigin{0, 0};
const RationalPair kThirds{R(1, 3), R(2, 3)};

oracle::BoxFamily family_of(const SetDescriptor& d) {
  oracle::BoxFamily f{static_cast<std::int64_t>(d.q), to_int64(d.psi_q.num()), to_int64(d.psi_q.den()),
                      std::nullopt};
  if (d.variant == Variant::tilde) {
    const auto& p = *d.approximant;
    f.approximant = {{p.a.first, p.a.second}, static_cast<std::int64_t>(p.b)};
  }
  return f;
}

Rational brute(const SetDescriptor& a, const SetDescriptor& b) {
  const auto& y = a.y;
  return oracle::brute_pair_intersection(family_of(a), family_of(b), to_int64(y.first.num()),
                                         to_int64(y.first.den()), to_int64(y.second.num()),
                                         to_int64(y.second.den()));
}

// Membership straight from the definition: try every residue p.
bool member_by_residues(const RationalPair& x, const SetDescriptor& d) {
  const Rational q(d.q);
  for (std::int64_t p1 = -1; p1 <= static_cast<std::int64_t>(d.q); ++p1) {
    const Rational t1 = q * x.first - p1 - d.y.first;
    if (abs(t1) >= d.psi_q) continue;
    for (std::int64_t p2 = -1; p2 <= static_cast<std::int64_t>(d.q); ++p2) {
      const Rational t2 = q * x.second - p2 - d.y.second;
      if (abs(t2) < d.psi_q && d.admissible(p1, p2)) return true;
    }
  }
  return false;
}

// |d ∩ U| box by box on an integer circle per axis.
Rational brute_window(const SetDescriptor& d, const TorusBox& u) {
  const auto fam = family_of(d);
  std::int64_t circle[2];
  std::vector<std::int64_t> axis[2];
  const Rational* ys[2] = {&d.y.first, &d.y.second};
  const Rational* uc[2] = {&u.center.first, &u.center.second};
  const Rational* uh[2] = {&u.halfwidth.first, &u.halfwidth.second};
  for (int c = 0; c < 2; ++c) {
    const std::int64_t yd = to_int64(ys[c]->den());
    const std::int64_t L = std::lcm(std::lcm(fam.q * yd, fam.q * fam.psi_den),
                                    std::lcm(to_int64(uc[c]->den()), to_int64(uh[c]->den())));
    circle[c] = L;
    const std::int64_t center_u = to_int64((*uc[c] * Rational(L)).num());
    const std::int64_t half_u = to_int64((*uh[c] * Rational(L)).num());
    const std::int64_t half_box = fam.psi_num * (L / (fam.q * fam.psi_den));
    for (std::int64_t p = 0; p < fam.q; ++p) {
      const std::int64_t center = (p * yd + to_int64(ys[c]->num())) * (L / (fam.q * yd));
      const std::int64_t ov = 2 * half_u >= L
                                  ? 2 * half_box
                                  : oracle::arc_overlap_by_distance(center, half_box, center_u, half_u, L);
      axis[c].push_back(std::min(ov, 2 * half_box));
    }
  }
  BigInt total = 0;
  for (std::int64_t p1 = 0; p1 < fam.q; ++p1) {
    for (std::int64_t p2 = 0; p2 < fam.q; ++p2) {
      if (fam.admissible(p1, p2)) total += from_int64(axis[0][p1]) * from_int64(axis[1][p2]);
    }
  }
  return make_rational(total, from_int64(circle[0]) * from_int64(circle[1]));
}

}  // namespace

TEST(ClosedForm, Examples) {
  EXPECT_EQ(measure_closed_form(SetDescriptor::full(5, R(1, 10), kOrigin)), R(1, 25));
  const auto tilde = SetDescriptor::tilde(12, R(1, 4), kThirds, {{1, 0}, 5, 12});
  EXPECT_EQ(measure_closed_form(tilde), R(1, 6));
  EXPECT_EQ(measure_oracle(tilde), R(1, 6));
  EXPECT_EQ(measure_closed_form(SetDescriptor::full(7, 0, kThirds)), R(0));
}

TEST(ClosedForm, RejectsPsiAboveHalf) {
  EXPECT_THROW(SetDescriptor::full(3, R(3, 5), kOrigin), std::invalid_argument);
  EXPECT_THROW(SetDescriptor::full(3, R(-1, 5), kOrigin), std::invalid_argument);
}

TEST(ClosedForm, MatchesBoxEnumeration) {
  const Target t(kThirds, 3);
  for (std::uint64_t q = 1; q <= 60; ++q) {
    for (const Rational& psi : {R(1, 2), R(1, 4), R(1, 7), R(3, 10)}) {
      const auto a = t.approximant(q);
      for (const auto& d : {SetDescriptor::full(q, psi, kThirds), SetDescriptor::tilde(q, psi, kThirds, a)}) {
        ASSERT_EQ(measure_closed_form(d), measure_oracle(d)) << q << " " << to_string(psi);
      }
    }
  }
}

TEST(ClosedForm, TildeNeverExceedsFull) {
  const Target t(kThirds, Rational(1, 2));
  for (std::uint64_t q = 1; q <= 500; ++q) {
    const auto full = SetDescriptor::full(q, R(1, 4), kThirds);
    const auto tilde = SetDescriptor::tilde(q, R(1, 4), kThirds, t.approximant(q));
    const Rational f = measure_closed_form(full);
    const Rational g = measure_closed_form(tilde);
    ASSERT_LE(g, f);
    // prod over primes of (1 - p^-2) is 6/pi^2 > 3/5.
    ASSERT_GT(g / f, R(3, 5)) << q;
  }
}

TEST(MeasureOracle, HonoursCap) {
  EnumerationCaps caps;
  caps.oracle = 10;
  EXPECT_THROW(measure_oracle(SetDescriptor::full(11, R(1, 4), kOrigin), caps), CapExceeded);
}

TEST(PairIntersection, Examples) {
  const auto two = SetDescriptor::full(2, R(1, 4), kOrigin);
  const auto three = SetDescriptor::full(3, R(1, 4), kOrigin);
  EXPECT_EQ(pair_intersection_measure(two, three), R(1, 16));

  const Target t(kThirds, 1);
  const auto hundred = SetDescriptor::from_target(t, constant_psi(R(1, 100)), 100, Variant::tilde);
  const auto fifty = SetDescriptor::from_target(t, constant_psi(R(1, 50)), 50, Variant::full);
  EXPECT_EQ(pair_intersection_measure(hundred, fifty), R(0));

  const auto tilde = SetDescriptor::tilde(12, R(1, 4), kThirds, {{1, 0}, 5, 12});
  EXPECT_EQ(pair_intersection_measure(tilde, tilde), R(1, 6));
}

TEST(PairIntersection, RejectsDifferentShifts) {
  EXPECT_THROW(pair_intersection_measure(SetDescriptor::full(2, R(1, 4), kOrigin),
                                         SetDescriptor::full(3, R(1, 4), kThirds)),
               std::invalid_argument);
}

TEST(PairIntersection, SelfIntersectionIsMeasure) {
  const Target t(kThirds, 2);
  for (std::uint64_t q = 1; q <= 40; ++q) {
    for (const auto v : {Variant::full, Variant::tilde}) {
      const auto d = SetDescriptor::from_target(t, constant_psi(R(2, 7)), q, v);
      ASSERT_EQ(pair_intersection_measure(d, d), measure_closed_form(d)) << q;
    }
  }
}

TEST(PairIntersection, KernelMatchesBruteForce) {
  const std::vector<RationalPair> shifts{kOrigin, kThirds, {R(1, 2), R(1, 5)}, {R(3, 7), R(2, 9)}};
  const std::vector<Rational> psis{R(1, 2), R(1, 4), R(1, 3), R(2, 9), R(1, 11)};
  for (const auto& y : shifts) {
    const Target t(y, 3);
    for (std::uint64_t q = 1; q <= 20; ++q) {
      for (std::uint64_t r = 1; r <= q; ++r) {
        const Rational pq = psis[(q + r) % psis.size()];
        const Rational pr = psis[(q * r) % psis.size()];
        for (const auto vq : {Variant::full, Variant::tilde}) {
          for (const auto vr : {Variant::full, Variant::tilde}) {
            const auto a = SetDescriptor::from_target(t, constant_psi(pq), q, vq);
            const auto b = SetDescriptor::from_target(t, constant_psi(pr), r, vr);
            const Rational expected = brute(a, b);
            ASSERT_EQ(pair_intersection_by_enumeration(a, b), expected)
                << to_string(y.first) << "," << to_string(y.second) << " q=" << q << " r=" << r;
            ASSERT_EQ(pair_intersection_measure(b, a), expected);
          }
        }
      }
    }
  }
}

TEST(PairIntersection, KernelMatchesProductRouteForFullSets) {
  const RationalPair y{R(2, 5), R(1, 6)};
  const auto psi = normalize(power_psi(1, 1, 1 << 10), 1);
  for (std::uint64_t q = 1; q <= 60; ++q) {
    for (std::uint64_t r = 1; r < q; r += 3) {
      const auto a = SetDescriptor::full(q, psi(q), y);
      const auto b = SetDescriptor::full(r, psi(r), y);
      ASSERT_EQ(pair_intersection_by_enumeration(a, b), pair_intersection_measure(a, b)) << q << " " << r;
    }
  }
}

TEST(PairIntersection, HonoursCap) {
  EnumerationCaps caps;
  caps.pair = 50;
  const Target t(kThirds, 3);
  const auto a = SetDescriptor::from_target(t, constant_psi(R(1, 4)), 60, Variant::tilde);
  const auto b = SetDescriptor::from_target(t, constant_psi(R(1, 4)), 30, Variant::tilde);
  EXPECT_THROW(pair_intersection_measure(a, b, caps), CapExceeded);
}

TEST(Member, Examples) {
  const auto tilde = SetDescriptor::tilde(12, R(1, 4), kThirds, {{1, 0}, 5, 12});
  // p = (0, 0): gcd(12, 1, 0) = 1, center (1/36, 2/36).
  EXPECT_TRUE(member({R(1, 36), R(1, 18)}, tilde));
  // p = (1, 0): gcd(12, 6, 0) = 6.
  EXPECT_FALSE(member({R(4, 36), R(2, 36)}, tilde));
  EXPECT_TRUE(member({R(4, 36), R(2, 36)}, SetDescriptor::full(12, R(1, 4), kThirds)));
  EXPECT_FALSE(member({R(1, 36), R(1, 18)}, SetDescriptor::full(12, 0, kThirds)));
  // Boundary is excluded.
  EXPECT_FALSE(member({R(1, 8), 0}, SetDescriptor::full(2, R(1, 4), kOrigin)));
  EXPECT_TRUE(member({R(7, 8), 0}, SetDescriptor::full(1, R(1, 4), kOrigin)));
}

TEST(Member, MatchesResidueSearch) {
  const Target t({R(1, 2), R(1, 5)}, 1);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> coord(0, 359);
  for (std::uint64_t q = 1; q <= 30; ++q) {
    for (const auto v : {Variant::full, Variant::tilde}) {
      const auto d = SetDescriptor::from_target(t, constant_psi(R(1, 3)), q, v);
      for (int i = 0; i < 60; ++i) {
        const RationalPair x{R(coord(rng), 360), R(coord(rng), 360)};
        ASSERT_EQ(member(x, d), member_by_residues(x, d)) << q << " " << to_string(x.first);
      }
    }
  }
}

TEST(MembershipProbe, FastPathMatchesRationalPath) {
  const Target t(kThirds, Rational(1, 2));
  const auto psi = normalize(power_psi(1, Rational(1, 2)), 1);
  std::mt19937_64 rng(5);
  for (std::uint64_t q = 1; q <= 400; q += 7) {
    for (const auto v : {Variant::full, Variant::tilde}) {
      const MembershipProbe probe(SetDescriptor::from_target(t, psi, q, v));
      ASSERT_TRUE(probe.uses_fast_path());
      for (int i = 0; i < 200; ++i) {
        const std::uint64_t x1 = rng();
        const std::uint64_t x2 = rng();
        const RationalPair x{make_rational(from_uint64(x1), BigInt(1) << 64),
                             make_rational(from_uint64(x2), BigInt(1) << 64)};
        ASSERT_EQ(probe.contains_dyadic(x1, x2), member(x, probe.descriptor())) << q;
      }
    }
  }
}

TEST(MembershipProbe, BoundaryPointsOnDyadicGrid) {
  // y = 0, q = 4, psi = 1/4: boxes (k/4 - 1/16, k/4 + 1/16), endpoints dyadic.
  const MembershipProbe probe(SetDescriptor::full(4, R(1, 4), kOrigin));
  const std::uint64_t sixteenth = std::uint64_t{1} << 60;
  EXPECT_FALSE(probe.contains_dyadic(sixteenth, 0));
  EXPECT_TRUE(probe.contains_dyadic(sixteenth - 1, 0));
  EXPECT_TRUE(probe.contains_dyadic(0, 0));
  EXPECT_FALSE(probe.contains_dyadic(std::uint64_t{0} - sixteenth, 0));
  EXPECT_TRUE(probe.contains_dyadic(std::uint64_t{0} - sixteenth + 1, 0));
}

TEST(WindowMeasure, Examples) {
  const auto tilde = SetDescriptor::tilde(12, R(1, 4), kThirds, {{1, 0}, 5, 12});
  EXPECT_EQ(window_measure(tilde, TorusBox::whole()), R(1, 6));
  EXPECT_EQ(window_measure(tilde, TorusBox({R(1, 2), R(1, 2)}, {0, R(1, 4)})), R(0));

  const Target t(kThirds, 3);
  const auto d = SetDescriptor::from_target(t, constant_psi(R(1, 4)), 60, Variant::tilde);
  const TorusBox u({R(1, 2), R(1, 2)}, {R(1, 4), R(1, 4)});
  const Rational ratio = window_measure(d, u) / (measure_closed_form(d) * u.area());
  EXPECT_EQ(ratio, R(1));
}

TEST(WindowMeasure, MatchesBruteForce) {
  const Target t({R(1, 2), R(1, 5)}, 3);
  const std::vector<TorusBox> windows{
      TorusBox::whole(), TorusBox({R(1, 2), R(1, 2)}, {R(1, 4), R(1, 4)}),
      TorusBox({R(1, 10), R(9, 10)}, {R(1, 7), R(1, 3)}), TorusBox({0, R(1, 3)}, {R(1, 2), R(1, 9)})};
  for (std::uint64_t q = 1; q <= 30; ++q) {
    for (const auto v : {Variant::full, Variant::tilde}) {
      const auto d = SetDescriptor::from_target(t, constant_psi(R(1, 6)), q, v);
      for (const auto& u : windows) {
        ASSERT_EQ(window_measure(d, u), brute_window(d, u)) << q;
      }
    }
  }
}

TEST(Variant, ParseRoundTrip) {
  for (const auto v : {Variant::full, Variant::tilde}) EXPECT_EQ(parse_variant(to_string(v)), v);
  EXPECT_THROW(parse_variant("partial"), std::invalid_argument);
}
