#include "siegel/engine.hpp"
#include "siegel/evaluate.hpp"
#include "siegel/hecke.hpp"
#include "siegel/igusa.hpp"

#include <benchmark/benchmark.h>

#include <memory>

using namespace siegel;

namespace {

struct Workload {
  std::vector<NumericSeries> series;
  SeriesSet set{};
  std::vector<EvalPoint> points;
};

// Images of the standard point under the T_p cosets, all four generators at trace T.
const Workload& workload(long p, long T) {
  static std::map<std::pair<long, long>, std::unique_ptr<Workload>> cache;
  auto& slot = cache[{p, T}];
  if (!slot) {
    static GeneratorCache gens;
    slot = std::make_unique<Workload>();
    const Precision prec = 256;
    for (auto id : kGenerators) slot->series.emplace_back(gens.get(id, T), prec);
    for (int j = 0; j < 4; ++j) slot->set[j] = &slot->series[j];
    EvalPoint Z = standard_point(default_y11(p), prec);
    for (const auto& r : tp_reps(p)) slot->points.push_back(act_on_point(r, Z).w);
  }
  return *slot;
}

void BM_reference(benchmark::State& state) {
  const auto& w = workload(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_batch_reference(w.set, w.points, state.range(1)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(w.points.size()));
}

void BM_batch(benchmark::State& state) {
  const auto& w = workload(state.range(0), state.range(1));
  const int threads = static_cast<int>(state.range(2));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_batch(w.set, w.points, state.range(1), threads));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(w.points.size()));
}

void BM_eigenvalue(benchmark::State& state) {
  static GeneratorCache gens;
  EngineConfig cfg;
  cfg.threads = static_cast<int>(state.range(1));
  const auto spec = builtin_form("ups20");
  for (auto _ : state) {
    Engine engine(gens, cfg);
    benchmark::DoNotOptimize(engine.eigenvalue(spec, state.range(0), HeckeOp::Tp, 3));
  }
}

}  // namespace

BENCHMARK(BM_reference)->Args({5, 10})->Args({7, 14})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_batch)
    ->ArgsProduct({{5}, {10}, {1, 2, 4, 8}})
    ->ArgsProduct({{7}, {14}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(BM_eigenvalue)->ArgsProduct({{3, 5}, {1, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
