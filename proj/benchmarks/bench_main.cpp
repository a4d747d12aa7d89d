#include <benchmark/benchmark.h>

#include <random>

#include "besum/construction.hpp"
#include "besum/dimension.hpp"
#include "besum/expsum.hpp"
#include "besum/factoradic.hpp"

using namespace besum;

static void BM_StreamSum(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> turns(0.0, 1.0);
  std::vector<double> phases(static_cast<std::size_t>(state.range(0)));
  for (auto& t : phases) t = turns(rng);
  for (auto _ : state) benchmark::DoNotOptimize(stream_sum(phases).partial_sum());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StreamSum)->Range(1 << 10, 1 << 20);

static void BM_AfSumRational(benchmark::State& state) {
  const auto f = growth_function("n2");
  for (auto _ : state) benchmark::DoNotOptimize(af_sum_rational(f, 7, 19, state.range(0)).sum());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AfSumRational)->Range(1 << 10, 1 << 17);

static void BM_FracFactorial(benchmark::State& state) {
  const DigitConstraintSet e2(growth_function("n2"), weight_sequence("n2"));
  const FactoradicReal alpha = sample_E(e2, static_cast<std::size_t>(state.range(0)), 1);
  const std::uint64_t m = static_cast<std::uint64_t>(state.range(0)) / 2;
  for (auto _ : state) benchmark::DoNotOptimize(frac_factorial(m, alpha).value);
}
BENCHMARK(BM_FracFactorial)->Range(64, 4096);

static void BM_AfSumFactoradic(benchmark::State& state) {
  const auto f = growth_function("n2");
  const DigitConstraintSet e2(f, weight_sequence("n2"));
  const FactoradicReal alpha = sample_E(e2, 950, 1);
  for (auto _ : state) benchmark::DoNotOptimize(af_sum_factoradic(f, alpha, state.range(0)).sum());
}
BENCHMARK(BM_AfSumFactoradic)->Arg(10)->Arg(30);

static void BM_CountCylinders(benchmark::State& state) {
  const DigitConstraintSet e2(growth_function("n2"), weight_sequence("n2"));
  for (auto _ : state) benchmark::DoNotOptimize(count_cylinders(e2, static_cast<std::uint64_t>(state.range(0))));
}
BENCHMARK(BM_CountCylinders)->Range(16, 4096);

static void BM_IntervalMeasure(benchmark::State& state) {
  const DigitConstraintSet e2(growth_function("n2"), weight_sequence("n2"));
  const ExactFraction lo = make_fraction(BigInt(1), BigInt(7));
  const ExactFraction hi = make_fraction(BigInt(5), BigInt(11));
  for (auto _ : state) benchmark::DoNotOptimize(interval_measure(e2, lo, hi));
}
BENCHMARK(BM_IntervalMeasure);
BENCHMARK_MAIN();
