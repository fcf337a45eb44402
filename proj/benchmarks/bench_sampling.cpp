#include <benchmark/benchmark.h>

#include "yulesim/cmj.hpp"
#include "yulesim/mutation_forest.hpp"
#include "yulesim/rng.hpp"

namespace {

using namespace yulesim;

void BM_StreamDraw(benchmark::State& state) {
  Stream s = make_stream(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(s());
}
BENCHMARK(BM_StreamDraw);

void BM_StreamExponential(benchmark::State& state) {
  Stream s = make_stream(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(s.exponential());
}
BENCHMARK(BM_StreamExponential);

void BM_StreamSetup(benchmark::State& state) {
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(make_stream(1, i++));
}
BENCHMARK(BM_StreamSetup);

void BM_StepNextBirth(benchmark::State& state) {
  const cmj::FertilityState fs{1.0, 3.5, 4};
  Stream s = make_stream(2, 0);
  for (auto _ : state) benchmark::DoNotOptimize(cmj::step_next_birth(fs, 0.5, s.exponential()));
}
BENCHMARK(BM_StepNextBirth);

// Argument pair: theta * 10, rho * 10.
void BM_SampleX(benchmark::State& state) {
  const ModelParams params(static_cast<double>(state.range(0)) / 10.0,
                           static_cast<double>(state.range(1)) / 10.0);
  std::uint64_t i = 0;
  for (auto _ : state) {
    Stream s = make_stream(3, i++);
    benchmark::DoNotOptimize(cmj::sample_X(params, s));
  }
}
BENCHMARK(BM_SampleX)->Args({0, 20})->Args({-10, 20})->Args({5, 10})->Args({20, 10});

void BM_TotalProgeny(benchmark::State& state) {
  std::uint64_t i = 0;
  for (auto _ : state) {
    Stream s = make_stream(4, i++);
    benchmark::DoNotOptimize(cmj::sample_total_progeny(2.0, s));
  }
}
BENCHMARK(BM_TotalProgeny);

void BM_Genealogy(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) {
    Stream s = make_stream(5, i++);
    benchmark::DoNotOptimize(cmj::simulate_genealogy(-1.0, n, s));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Genealogy)->Arg(1'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_AllelicPartition(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  Stream tree = make_stream(6, 0);
  const auto genealogy = cmj::simulate_genealogy(0.0, n, tree);
  const auto regime = forest::MutationRegime::iid_bernoulli(0.5);
  std::uint64_t i = 0;
  for (auto _ : state) {
    Stream s = make_stream(6, i++, StreamLane::kMarks);
    benchmark::DoNotOptimize(
        forest::allelic_partition(genealogy, forest::mark_mutations(genealogy, regime, s)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AllelicPartition)->Arg(100'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
