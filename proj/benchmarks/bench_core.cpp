#include <benchmark/benchmark.h>

#include "vlcqos/markov_onoff.hpp"
#include "vlcqos/nonasym_bounds.hpp"
#include "vlcqos/qos_analysis.hpp"
#include "vlcqos/queue_sim.hpp"

using namespace vlcqos;

static void BM_SourceLogMgf(benchmark::State& state) {
  const markov::OnOffChain c{0.3, 0.7, 1000.0};
  double theta = 1e-4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(markov::source_log_mgf(c, theta));
    theta = theta < 1e-2 ? theta * 1.001 : 1e-4;
  }
}
BENCHMARK(BM_SourceLogMgf);

static void BM_ArrivalLogMgfFinite(benchmark::State& state) {
  const markov::OnOffChain c{0.1, 0.2, 1000.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(markov::arrival_log_mgf_finite(c, 1e-3, state.range(0)));
  }
}
BENCHMARK(BM_ArrivalLogMgfFinite)->Arg(10)->Arg(10000)->Arg(1000000);

static void BM_ArrivalLogMgfSup(benchmark::State& state) {
  const markov::OnOffChain c{0.1, 0.2, 1000.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(markov::arrival_log_mgf_sup(c, 1e-3, 10000));
  }
}
BENCHMARK(BM_ArrivalLogMgfSup);

static void BM_OptimizeFixedRate(benchmark::State& state) {
  const phy::PhyConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(qos::optimize_fixed_rate(cfg, 1e-4));
}
BENCHMARK(BM_OptimizeFixedRate)->Unit(benchmark::kMillisecond);

static void BM_ReferenceLogMgf(benchmark::State& state) {
  const phy::PhyConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(qos::reference_log_mgf(cfg, 1e-3));
}
BENCHMARK(BM_ReferenceLogMgf)->Unit(benchmark::kMillisecond);

static void BM_QueueBound(benchmark::State& state) {
  const markov::OnOffChain src{0.3, 0.7, 1000.0};
  const markov::ServiceAbstraction svc{0.9, 2000.0};
  const auto query = bounds::BoundQuery::even_split(1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(bounds::queue_bound(src, svc, query));
}
BENCHMARK(BM_QueueBound)->Unit(benchmark::kMillisecond);

static void BM_Simulate(benchmark::State& state) {
  sim::SimConfig cfg;
  cfg.source = {0.3, 0.7, 1000.0};
  cfg.service = {0.9, 2000.0};
  cfg.frames = state.range(0);
  cfg.warmup = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sim::simulate(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
