#include <benchmark/benchmark.h>

#include <vector>

#include "hotspot/critical_values.hpp"
#include "hotspot/detectors.hpp"
#include "hotspot/local_stats.hpp"
#include "hotspot/rng.hpp"
#include "hotspot/segmentation.hpp"
#include "hotspot/simbench.hpp"

namespace {

using namespace hotspot;

ContinuousSeries noise(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return ContinuousSeries(std::move(v));
}

WindowConfig window(std::size_t n, std::size_t g) {
  WindowConfig cfg;
  cfg.n = n;
  cfg.bandwidth = g;
  return cfg;
}

void BM_LocalMoments(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = static_cast<std::size_t>(state.range(1));
  const auto y = noise(n, 1);
  const auto cfg = window(n, g);
  for (auto _ : state) benchmark::DoNotOptimize(local_moments(y, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_LocalMoments)->Args({100, 20})->Args({1000, 20})->Args({1000, 100})->Args({10000, 50});

void BM_AllSixTraces(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto y = noise(n, 1);
  const auto x = noise(n, 2);
  const auto cfg = window(n, 20);
  for (auto _ : state) benchmark::DoNotOptimize(detector_traces(y, &x, kAllKinds, cfg));
}
BENCHMARK(BM_AllSixTraces)->Arg(100)->Arg(1000);

void BM_Threshold(benchmark::State& state) {
  ThresholdRequest req;
  req.n = static_cast<std::size_t>(state.range(0));
  req.replications = 200;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_threshold(req));
}
BENCHMARK(BM_Threshold)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_BootstrapCI(benchmark::State& state) {
  sim::ScenarioSpec spec;
  spec.y_points = {50};
  const auto data = sim::generate(spec, 0);
  const auto cfg = window(100, 20);
  BootstrapSettings bs;
  bs.replications = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bootstrap_cis(data.y, nullptr, DetectorKind::UniY, {50}, cfg, bs));
  }
}
BENCHMARK(BM_BootstrapCI)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_TableOneSmoke(benchmark::State& state) {
  sim::TableOptions options;
  options.replications = 10;
  options.threshold = 3.59;
  for (auto _ : state) benchmark::DoNotOptimize(sim::run_table(options));
}
BENCHMARK(BM_TableOneSmoke)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
