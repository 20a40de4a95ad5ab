// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "evo/benchmarks.hpp"
#include "evo/evaluate.hpp"
#include "evo/hp_lattice.hpp"

namespace {

evo::Population hp_batch(const evo::Problem& problem, std::size_t n) {
  evo::Random rng(7);
  evo::Population pop;
  for (std::size_t i = 0; i < n; ++i) pop.emplace_back(problem.sample(rng));
  return pop;
}

const evo::hp::HPSequence& long_sequence() {
  static const auto seq = evo::hp::HPSequence::parse(
      "HPHPPHHPHPPHPHHPPHPHHPHPPHHPHPPHPHHPPHPHHPPHHPPHPHHPHPPHHPHH");
  return seq;
}

void BM_EvaluateSerial(benchmark::State& state) {
  const auto problem = evo::hp::make_problem(long_sequence(), evo::hp::EnergyScheme::scheme1(),
                                             evo::hp::PenaltyPolicy{2.0});
  auto pop = hp_batch(problem, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evo::evaluate_serial(pop, problem.evaluate));
}

void BM_EvaluateParallel(benchmark::State& state) {
  const auto problem = evo::hp::make_problem(long_sequence(), evo::hp::EnergyScheme::scheme1(),
                                             evo::hp::PenaltyPolicy{2.0});
  auto pop = hp_batch(problem, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(evo::evaluate_parallel(pop, problem.evaluate, 4));
}

void BM_EnumerateSerial(benchmark::State& state) {
  const auto seq = evo::hp::HPSequence::parse(std::string(state.range(0), 'H'));
  for (auto _ : state)
    benchmark::DoNotOptimize(evo::hp::enumerate_optimal(seq, evo::hp::EnergyScheme::scheme1()));
}

void BM_EnumerateParallel(benchmark::State& state) {
  const auto seq = evo::hp::HPSequence::parse(std::string(state.range(0), 'H'));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        evo::hp::enumerate_optimal_parallel(seq, evo::hp::EnergyScheme::scheme1()));
}

void BM_GridOracleSerial(benchmark::State& state) {
  const auto f = evo::bench::himmelblau();
  for (auto _ : state) benchmark::DoNotOptimize(evo::bench::grid_peak_oracle(f));
}

void BM_GridOracleParallel(benchmark::State& state) {
  const auto f = evo::bench::himmelblau();
  for (auto _ : state) benchmark::DoNotOptimize(evo::bench::grid_peak_oracle_parallel(f));
}

}  // namespace

BENCHMARK(BM_EvaluateSerial)->Arg(256)->Arg(4096);
BENCHMARK(BM_EvaluateParallel)->Arg(256)->Arg(4096);
BENCHMARK(BM_EnumerateSerial)->Arg(8)->Arg(10);
BENCHMARK(BM_EnumerateParallel)->Arg(8)->Arg(10);
BENCHMARK(BM_GridOracleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridOracleParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
