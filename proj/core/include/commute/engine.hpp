#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "commute/config.hpp"
#include "commute/decision.hpp"
#include "commute/metrics.hpp"
#include "commute/network.hpp"
#include "commute/population.hpp"
#include "commute/rng.hpp"
#include "commute/traffic.hpp"

namespace commute {

// Everything one replication owns. Streams are derived from
// (config.rng_seed, replication_id) per concern, so replications are
// independent and a paired scenario run reuses the same draws.
struct RunState {
  int replication_id = 0;
  int period = 0;
  const ScenarioConfig* config = nullptr;
  std::vector<Agent> agents;
  SocialNetwork network;
  WorldGrid grid;
  RngStream traffic_rng;
  RngStream decision_rng;  // reserved; the shipped strategies are deterministic

  RunState() : traffic_rng(0), decision_rng(0) {}
};

// Optional per-tick trace sink: (period, tick, agent, x, y, speed_kmh).
// Tracing never consumes RNG draws, so enabling it cannot change results.
using TickTrace = std::function<void(int, int, int, int, int, double)>;

struct PeriodOutputs {
  IndicatorRow row;
  std::vector<TripLog> logs;
  std::vector<bool> accident_flags;
  SystemState state;
};

// Builds population, network and grid for one replication.
RunState init_replication(const ScenarioConfig& config, int replication_id);

// Runs one peak hour (ticks_per_period ticks) under the period's effective
// mode parameters, samples accidents, and captures the period indicators.
// Indicators reflect the mode distribution agents held while traveling.
PeriodOutputs simulate_period(RunState& state, const TickTrace* trace = nullptr);

// Synchronous CONSUMAT update: every agent decides on the same pre-decision
// snapshot, then switches (paying acquisition for newly owned vehicles).
// Advances state.period. Returns the outcomes in agent id order.
std::vector<DecisionOutcome> decide_period(RunState& state, const PeriodOutputs& outputs);

// Full replication: horizon_years indicator rows, deterministic given
// (config.rng_seed, replication_id).
std::vector<IndicatorRow> run_replication(const ScenarioConfig& config, int replication_id,
                                          const TickTrace* trace = nullptr);

struct ExperimentOptions {
  int threads = 0;  // 0 = hardware concurrency
  const TickTrace* trace = nullptr;               // applied to replication 0 only
  std::function<void(const RunState&)> on_first_replication_init;  // diagnostics hook
};

// Runs config.replications replications (in parallel) and aggregates them in
// replication order. Results do not depend on the thread count.
IndicatorSeries run_experiment(const ScenarioConfig& config, const std::string& scenario_name,
                               const ExperimentOptions& options = {});

}  // namespace commute
