#include "khinlab/montecarlo.hpp"
#include "khinlab/numtheory.hpp"
#include "khinlab/sets.hpp"
#include "khinlab/verify.hpp"

#include <benchmark/benchmark.h>

using namespace khinlab;

namespace {

const RationalPair kThirds{Rational(1, 3), Rational(2, 3)};

void BM_PairKernelTilde(benchmark::State& state) {
  const auto q = static_cast<std::uint64_t>(state.range(0));
  const Target t(kThirds, Rational(1, 2));
  const auto psi = normalize(power_psi(1, Rational(1, 2)), 1);
  const auto a = SetDescriptor::from_target(t, psi, q, Variant::tilde);
  const auto b = SetDescriptor::from_target(t, psi, q / 2 + 1, Variant::tilde);
  for (auto _ : state) benchmark::DoNotOptimize(pair_intersection_measure(a, b));
}
BENCHMARK(BM_PairKernelTilde)->Arg(50)->Arg(200)->Arg(1000)->Arg(4000);

void BM_PairProductRoute(benchmark::State& state) {
  const auto q = static_cast<std::uint64_t>(state.range(0));
  const auto a = SetDescriptor::full(q, Rational(1, 4), kThirds);
  const auto b = SetDescriptor::full(q - 1, Rational(1, 4), kThirds);
  for (auto _ : state) benchmark::DoNotOptimize(pair_intersection_measure(a, b));
}
BENCHMARK(BM_PairProductRoute)->Arg(30)->Arg(300);

void BM_KeyStress(benchmark::State& state) {
  const Target t(kThirds, 1);
  const auto psi = power_psi(1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(key_disjointness(8192, 4096, psi, t));
}
BENCHMARK(BM_KeyStress)->Unit(benchmark::kMillisecond);

void BM_CmpPower(benchmark::State& state) {
  const Rational x(12345, 6789);
  for (auto _ : state) benchmark::DoNotOptimize(cmp_power(x, 7, Rational(3), 4));
}
BENCHMARK(BM_CmpPower);

void BM_MemberRational(benchmark::State& state) {
  const Target t(kThirds, Rational(1, 2));
  const auto d = SetDescriptor::from_target(t, constant_psi(Rational(1, 4)), 997, Variant::tilde);
  const auto run = sample(1024, 1);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(member(run.point(i++ & 1023U), d));
}
BENCHMARK(BM_MemberRational);

void BM_MemberDyadicProbe(benchmark::State& state) {
  const Target t(kThirds, Rational(1, 2));
  const MembershipProbe probe(SetDescriptor::from_target(t, constant_psi(Rational(1, 4)), 997, Variant::tilde));
  const auto run = sample(1024, 1);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& p = run.points[i++ & 1023U];
    benchmark::DoNotOptimize(probe.contains_dyadic(p[0], p[1]));
  }
}
BENCHMARK(BM_MemberDyadicProbe);

}  // namespace

BENCHMARK_MAIN();
