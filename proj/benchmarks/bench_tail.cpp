#include <benchmark/benchmark.h>

#include "yulesim/tail_mc.hpp"

namespace {

using namespace yulesim;

// Argument pair: theta * 10, arrivals.
void BM_DriftPath(benchmark::State& state) {
  const double theta = static_cast<double>(state.range(0)) / 10.0;
  const auto n = static_cast<std::uint64_t>(state.range(1));
  const double lambda = tail::default_tilt(theta);
  std::uint64_t i = 0;
  for (auto _ : state) {
    Stream s = make_stream(7, i++);
    benchmark::DoNotOptimize(tail::simulate_drift_path(theta, n, lambda, s));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_DriftPath)->Args({5, 500})->Args({10, 2000})->Args({20, 80});

void BM_RepresentationCurve(benchmark::State& state) {
  const ModelParams params(0.5, 1.0);
  const auto ns = tail::range_1_to(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(tail::representation_curve(params, ns, {10'000, 8, 1}));
  }
  state.SetItemsProcessed(state.iterations() * 10'000);
}
BENCHMARK(BM_RepresentationCurve)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_TiltedCurve(benchmark::State& state) {
  const ModelParams params(2.0, 1.0);
  const auto ns = tail::range_1_to(80);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tail::tilted_curve(params, ns, 2.0, {10'000, 9, 1}));
  }
  state.SetItemsProcessed(state.iterations() * 10'000);
}
BENCHMARK(BM_TiltedCurve)->Unit(benchmark::kMillisecond);

}  // namespace
