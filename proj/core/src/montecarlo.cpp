#include "khinlab/montecarlo.hpp"

#include "khinlab/parallel.hpp"

#include <algorithm>
#include <stdexcept>

namespace khinlab {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31U);
}

void check_window(const QWindow& w) {
  if (w.first == 0 || w.first > w.second) {
    throw std::invalid_argument("hit window requires 1 <= q0 <= q1");
  }
}

// Probes for every q in [lo, hi]; entry i serves q = lo + i.
std::vector<MembershipProbe> build_probes(std::uint64_t lo, std::uint64_t hi, const PsiFunction& psi,
                                          const Target& target, Variant variant) {
  std::vector<MembershipProbe> probes;
  probes.reserve(hi - lo + 1);
  for (std::uint64_t q = lo; q <= hi; ++q) {
    probes.emplace_back(SetDescriptor::from_target(target, psi, q, variant));
  }
  return probes;
}

}  // namespace

std::uint64_t counter_draw(std::uint64_t seed, std::uint64_t index, unsigned coordinate) {
  return splitmix64(splitmix64(seed) ^ (2 * index + coordinate));
}

RationalPair SampleRun::point(std::size_t i) const {
  const BigInt two64 = BigInt(1) << 64;
  return {make_rational(from_uint64(points[i][0]), two64),
          make_rational(from_uint64(points[i][1]), two64)};
}

SampleRun sample(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample: N must be at least 1");
  SampleRun run;
  run.seed = seed;
  run.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    run.points[i] = {counter_draw(seed, i, 0), counter_draw(seed, i, 1)};
  }
  run.hits.resize(n);
  return run;
}

std::vector<Rational> window_hit_fractions(const SampleRun& run, const std::vector<QWindow>& windows,
                                           const PsiFunction& psi, const Target& target,
                                           Variant variant, unsigned jobs) {
  if (windows.empty()) return {};
  for (const auto& w : windows) check_window(w);
  std::uint64_t lo = windows.front().first, hi = windows.front().second;
  for (const auto& w : windows) {
    lo = std::min(lo, w.first);
    hi = std::max(hi, w.second);
  }
  const auto probes = build_probes(lo, hi, psi, target, variant);

  // hit[i * windows + w]
  std::vector<char> hit(run.size() * windows.size(), 0);
  parallel_for(run.size(), jobs, [&](std::size_t i) {
    const auto& x = run.points[i];
    for (std::size_t w = 0; w < windows.size(); ++w) {
      for (std::uint64_t q = windows[w].first; q <= windows[w].second; ++q) {
        if (probes[q - lo].contains_dyadic(x[0], x[1])) {
          hit[i * windows.size() + w] = 1;
          break;
        }
      }
    }
  });

  std::vector<Rational> out;
  out.reserve(windows.size());
  for (std::size_t w = 0; w < windows.size(); ++w) {
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < run.size(); ++i) count += hit[i * windows.size() + w];
    out.push_back(make_rational(from_uint64(count), from_uint64(run.size())));
  }
  return out;
}

Rational tail_hit_fraction(const SampleRun& run, std::uint64_t q0, std::uint64_t q1,
                           const PsiFunction& psi, const Target& target, Variant variant,
                           unsigned jobs) {
  return window_hit_fractions(run, {{q0, q1}}, psi, target, variant, jobs).front();
}

std::vector<Rational> dyadic_hit_profile(const SampleRun& run, unsigned kmax, const PsiFunction& psi,
                                         const Target& target, Variant variant, unsigned jobs) {
  if (kmax == 0 || kmax > 40) throw std::invalid_argument("dyadic_hit_profile: kmax must lie in [1, 40]");
  std::vector<QWindow> windows;
  for (unsigned k = 0; k <= kmax; ++k) {
    windows.emplace_back(std::uint64_t{1} << k, (std::uint64_t{1} << (k + 1)) - 1);
  }
  return window_hit_fractions(run, windows, psi, target, variant, jobs);
}

void record_hits(SampleRun& run, std::uint64_t q0, std::uint64_t q1, const PsiFunction& psi,
                 const Target& target, Variant variant, unsigned jobs) {
  check_window({q0, q1});
  const auto probes = build_probes(q0, q1, psi, target, variant);
  run.hits.assign(run.size(), {});
  parallel_for(run.size(), jobs, [&](std::size_t i) {
    const auto& x = run.points[i];
    for (std::uint64_t q = q0; q <= q1; ++q) {
      if (probes[q - q0].contains_dyadic(x[0], x[1])) run.hits[i].push_back(q);
    }
  });
}

}  // namespace khinlab
