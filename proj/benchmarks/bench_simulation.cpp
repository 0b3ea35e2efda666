// Microbenchmarks for the hot simulation paths. The headline number is the
// full replication: 100 of them (x2 scenarios) must fit the five-minute
// budget with plenty of headroom.

#include <benchmark/benchmark.h>

#include "commute/engine.hpp"

using namespace commute;

namespace {

ScenarioConfig bench_config(int n_agents) {
  ScenarioConfig cfg = default_config();
  cfg.n_agents = n_agents;
  cfg.rng_seed = 13;
  return cfg;
}

void BM_NetworkBuild(benchmark::State& state) {
  const ScenarioConfig cfg = bench_config(static_cast<int>(state.range(0)));
  RngStream pop_rng = make_stream(cfg.rng_seed, 0, StreamConcern::Population);
  const std::vector<Agent> agents = synthesize_population(cfg, pop_rng);
  for (auto _ : state) {
    RngStream rng = make_stream(cfg.rng_seed, 0, StreamConcern::Network);
    benchmark::DoNotOptimize(build_network(agents, cfg.network_params, rng));
  }
}
BENCHMARK(BM_NetworkBuild)->Arg(1200)->Arg(10000);

void BM_PeakHour(benchmark::State& state) {
  const ScenarioConfig cfg = bench_config(static_cast<int>(state.range(0)));
  RunState run = init_replication(cfg, 0);
  for (auto _ : state) {
    const PerMode<ModeParams> params = apply_policy(cfg, 0);
    TravelState travel = begin_period(run.agents, run.grid, cfg.traffic, params);
    for (int t = 0; t < cfg.ticks_per_period; ++t)
      tick(travel, run.agents, run.grid, cfg.traffic, params);
    finish_period(travel, run.agents, params);
    benchmark::DoNotOptimize(travel.logs.data());
  }
  state.SetItemsProcessed(state.iterations() * cfg.n_agents * cfg.ticks_per_period);
}
BENCHMARK(BM_PeakHour)->Arg(1200)->Arg(4800);

void BM_DecisionPhase(benchmark::State& state) {
  const ScenarioConfig cfg = bench_config(1200);
  RunState run = init_replication(cfg, 0);
  PeriodOutputs out = simulate_period(run);
  const std::vector<Agent> snapshot = run.agents;
  const PerMode<ModeParams> params = apply_policy(cfg, 0);
  for (auto _ : state) {
    for (const Agent& a : snapshot) {
      benchmark::DoNotOptimize(
          decide(a, out.logs[a.id], run.network, snapshot, out.state, params, cfg));
    }
  }
  state.SetItemsProcessed(state.iterations() * snapshot.size());
}
BENCHMARK(BM_DecisionPhase);

void BM_FullReplication(benchmark::State& state) {
  const ScenarioConfig cfg = bench_config(1200);
  int id = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_replication(cfg, id++));
  }
}
BENCHMARK(BM_FullReplication)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
