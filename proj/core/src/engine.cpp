#include "commute/engine.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

namespace commute {

RunState init_replication(const ScenarioConfig& config, int replication_id) {
  RunState state;
  state.replication_id = replication_id;
  state.config = &config;

  RngStream pop_rng = make_stream(config.rng_seed, replication_id, StreamConcern::Population);
  RngStream net_rng = make_stream(config.rng_seed, replication_id, StreamConcern::Network);
  state.traffic_rng = make_stream(config.rng_seed, replication_id, StreamConcern::Traffic);
  state.decision_rng = make_stream(config.rng_seed, replication_id, StreamConcern::Decisions);

  state.agents = synthesize_population(config, pop_rng);
  state.network = build_network(state.agents, config.network_params, net_rng);
  state.grid = WorldGrid(config.traffic.grid_width, config.traffic.grid_height);
  return state;
}

PeriodOutputs simulate_period(RunState& state, const TickTrace* trace) {
  const ScenarioConfig& cfg = *state.config;
  const PerMode<ModeParams> params = apply_policy(cfg, state.period);

  TravelState travel = begin_period(state.agents, state.grid, cfg.traffic, params);
  for (int t = 0; t < cfg.ticks_per_period; ++t) {
    tick(travel, state.agents, state.grid, cfg.traffic, params);
    if (trace && *trace) {
      for (const Agent& a : state.agents) {
        const TripLog& log = travel.logs[a.id];
        const double speed =
            log.travel_time_min > 0.0 ? log.km_traveled / (log.travel_time_min / 60.0) : 0.0;
        (*trace)(state.period, t, a.id, travel.position[a.id].x, travel.position[a.id].y,
                 speed);
      }
    }
  }
  finish_period(travel, state.agents, params);

  PeriodOutputs out;
  out.logs = std::move(travel.logs);
  out.accident_flags = sample_accidents(state.agents, params, state.traffic_rng);
  for (size_t i = 0; i < state.agents.size(); ++i)
    out.logs[i].had_accident = out.accident_flags[i];

  out.row.period = state.period;
  out.row.mode_shares = mode_shares(state.agents);
  const AccidentRates rates = accident_rate(out.accident_flags, state.agents,
                                            cfg.population_scale);
  out.row.accident_rate_all = rates.all;
  out.row.accident_rate = rates.by_mode;
  const Co2Tons tons = co2_tons(out.logs, state.agents, params, cfg.population_scale);
  out.row.co2_tons_all = tons.all;
  out.row.co2_tons = tons.by_mode;
  const AvgSpeeds speeds = avg_speed(out.logs, state.agents);
  out.row.avg_speed_all = speeds.all;
  out.row.avg_speed = speeds.by_mode;

  out.state = summarize_period(state.agents, out.logs, out.accident_flags, cfg);
  return out;
}

std::vector<DecisionOutcome> decide_period(RunState& state, const PeriodOutputs& outputs) {
  const ScenarioConfig& cfg = *state.config;
  const PerMode<ModeParams> params = apply_policy(cfg, state.period);

  // The period being evaluated counts as experience with the current mode
  // before times_fraction is read (period 0 -> 1/1).
  for (Agent& a : state.agents) {
    a.history.periods_elapsed += 1;
    a.history.periods_used[mode_index(a.current_mode)] += 1;
  }

  // All agents decide on the same snapshot; no decision observes another.
  const std::vector<Agent> snapshot = state.agents;
  std::vector<DecisionOutcome> outcomes(snapshot.size());
  for (size_t i = 0; i < snapshot.size(); ++i) {
    outcomes[i] = decide(snapshot[i], outputs.logs[i], state.network, snapshot, outputs.state,
                         params, cfg);
  }

  for (size_t i = 0; i < snapshot.size(); ++i) {
    Agent& a = state.agents[i];
    a.last_satisfaction = outcomes[i].satisfaction;
    const Mode next = outcomes[i].chosen_mode;
    if (next != a.current_mode) {
      a.owned_vehicles[mode_index(next)] = true;  // acquisition paid on switch
      a.current_mode = next;
    }
  }
  state.period += 1;
  return outcomes;
}

std::vector<IndicatorRow> run_replication(const ScenarioConfig& config, int replication_id,
                                          const TickTrace* trace) {
  RunState state = init_replication(config, replication_id);
  std::vector<IndicatorRow> rows;
  rows.reserve(config.horizon_years);
  for (int period = 0; period < config.horizon_years; ++period) {
    PeriodOutputs outputs = simulate_period(state, trace);
    rows.push_back(outputs.row);
    decide_period(state, outputs);
  }
  return rows;
}

IndicatorSeries run_experiment(const ScenarioConfig& config, const std::string& scenario_name,
                               const ExperimentOptions& options) {
  validate(config);
  const int r = config.replications;
  std::vector<std::vector<IndicatorRow>> results(r);

  if (options.on_first_replication_init) {
    RunState first = init_replication(config, 0);
    options.on_first_replication_init(first);
  }

  int threads = options.threads > 0 ? options.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, r));

  if (threads == 1) {
    for (int i = 0; i < r; ++i)
      results[i] = run_replication(config, i, i == 0 ? options.trace : nullptr);
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (int i = next.fetch_add(1); i < r; i = next.fetch_add(1))
        results[i] = run_replication(config, i, i == 0 ? options.trace : nullptr);
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Reduction is ordered by replication id, independent of completion order.
  return aggregate(scenario_name, results);
}

}  // namespace commute
