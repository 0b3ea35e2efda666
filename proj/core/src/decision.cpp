#include "commute/decision.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace commute {

namespace {

void set(AttributeVector& v, Attribute a, double value) {
  v.values[attribute_index(a)] = value;
}

// Operating cost of one commute trip: per-km cost over the given distance for
// private modes, the flat fare for transit.
double trip_operating_cost(Mode mode, const ModeParams& params, double trip_km) {
  if (mode == Mode::Transit) return params.operating_cost_per_km;
  return params.operating_cost_per_km * trip_km;
}

double acquisition_value(const Agent& agent, Mode mode, const PerMode<ModeParams>& params,
                         const ScenarioConfig& cfg) {
  const ModeParams& mp = params[mode_index(mode)];
  if (agent.owned_vehicles[mode_index(mode)] || mp.acquisition_cost == 0.0) return 1.0;
  return normalize_attribute(cfg, Attribute::AcquisitionCost,
                             amortized_acquisition_cost(cfg, mp));
}

}  // namespace

double satisfaction(const AttributeVector& values, std::span<const double> weights) {
  if (weights.size() != kNumAttributes)
    throw std::invalid_argument("satisfaction: expected one weight per attribute");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("satisfaction: weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("satisfaction: weights must sum to 1");
  double s = 0.0;
  for (int i = 0; i < kNumAttributes; ++i) s += values.values[i] * weights[i];
  return s;
}

double uncertainty(double alpha, double times_frac, double peers_frac) {
  return alpha * (1.0 - times_frac) + (1.0 - alpha) * (1.0 - peers_frac);
}

Strategy select_strategy(double s, double u, double s_thresh, double u_thresh) {
  const bool satisfied = s >= s_thresh;
  const bool uncertain = u >= u_thresh;
  if (satisfied) return uncertain ? Strategy::Imitate : Strategy::Repeat;
  return uncertain ? Strategy::Inquire : Strategy::Deliberate;
}

SystemState summarize_period(std::span<const Agent> agents, std::span<const TripLog> logs,
                             const std::vector<bool>& accident_flags,
                             const ScenarioConfig& cfg) {
  SystemState state;
  PerMode<double> time_sum{}, co2_sum{};
  PerMode<int> accidents{};
  double trip_km_sum = 0.0;

  for (size_t i = 0; i < agents.size(); ++i) {
    const int m = mode_index(agents[i].current_mode);
    state.users[m] += 1;
    time_sum[m] += logs[i].travel_time_min;
    co2_sum[m] += logs[i].co2_g;
    if (accident_flags[i]) accidents[m] += 1;
    trip_km_sum +=
        (std::abs(agents[i].workplace.x - agents[i].home.x) +
         std::abs(agents[i].workplace.y - agents[i].home.y)) *
        cfg.traffic.patch_km;
  }
  state.mean_trip_km = agents.empty() ? 0.0 : trip_km_sum / static_cast<double>(agents.size());

  for (int m = 0; m < kNumModes; ++m) {
    if (state.users[m] > 0) {
      state.avg_time_min[m] = time_sum[m] / state.users[m];
      state.accident_frac[m] = static_cast<double>(accidents[m]) / state.users[m];
      state.avg_co2_g[m] = co2_sum[m] / state.users[m];
    }
  }
  return state;
}

AttributeVector experienced_attributes(const Agent& agent, const TripLog& log,
                                       const PerMode<ModeParams>& params,
                                       const ScenarioConfig& cfg) {
  const Mode mode = agent.current_mode;
  const ModeParams& mp = params[mode_index(mode)];
  AttributeVector v;

  set(v, Attribute::AcquisitionCost, acquisition_value(agent, mode, params, cfg));
  set(v, Attribute::OperatingCost,
      normalize_attribute(cfg, Attribute::OperatingCost,
                          trip_operating_cost(mode, mp, log.km_traveled)));
  // A lived accident wipes out the period's road-safety experience.
  set(v, Attribute::RoadSafety, log.had_accident ? 0.0 : mp.road_safety_score);
  set(v, Attribute::PersonalSecurity, mp.personal_security_score);
  set(v, Attribute::Comfort, mp.comfort_score);
  set(v, Attribute::CommuteTime,
      normalize_attribute(cfg, Attribute::CommuteTime, log.travel_time_min));
  set(v, Attribute::Pollution, normalize_attribute(cfg, Attribute::Pollution, log.co2_g));
  return v;
}

AttributeVector forecast_attributes(const Agent& agent, Mode mode, const SystemState& state,
                                    const PerMode<ModeParams>& params,
                                    const ScenarioConfig& cfg) {
  const int m = mode_index(mode);
  const ModeParams& mp = params[m];

  const double trip_km =
      (std::abs(agent.workplace.x - agent.home.x) + std::abs(agent.workplace.y - agent.home.y)) *
      cfg.traffic.patch_km;

  // Modes nobody used last period fall back to nominal free-flow forecasts.
  double time_min, accident_frac, co2_g;
  if (state.users[m] > 0) {
    time_min = state.avg_time_min[m];
    accident_frac = state.accident_frac[m];
    co2_g = state.avg_co2_g[m];
  } else {
    time_min = state.mean_trip_km / mp.free_flow_speed * 60.0;
    accident_frac = mp.accident_probability;
    co2_g = per_rider_emission_g_per_km(mp) * state.mean_trip_km;
  }

  AttributeVector v;
  set(v, Attribute::AcquisitionCost, acquisition_value(agent, mode, params, cfg));
  set(v, Attribute::OperatingCost,
      normalize_attribute(cfg, Attribute::OperatingCost,
                          trip_operating_cost(mode, mp, trip_km)));
  set(v, Attribute::RoadSafety, mp.road_safety_score * (1.0 - accident_frac));
  set(v, Attribute::PersonalSecurity, mp.personal_security_score);
  set(v, Attribute::Comfort, mp.comfort_score);
  set(v, Attribute::CommuteTime, normalize_attribute(cfg, Attribute::CommuteTime, time_min));
  set(v, Attribute::Pollution, normalize_attribute(cfg, Attribute::Pollution, co2_g));
  return v;
}

double expected_utility(const Agent& agent, Mode mode, const SystemState& state,
                        const PerMode<ModeParams>& params, const ScenarioConfig& cfg) {
  return satisfaction(forecast_attributes(agent, mode, state, params, cfg),
                      cfg.attribute_weights[agent.income_level - 1]);
}

bool mode_affordable(const Agent& agent, Mode mode, const PerMode<ModeParams>& params,
                     const ScenarioConfig& cfg) {
  if (agent.owned_vehicles[mode_index(mode)]) return true;
  const double budget = cfg.economy.income_budgets[agent.income_level - 1] *
                        cfg.economy.affordability_multiplier;
  return amortized_acquisition_cost(cfg, params[mode_index(mode)]) <= budget;
}

Mode execute_strategy(const Agent& agent, Strategy strategy, const SocialNetwork& net,
                      std::span<const Agent> agents, const PerMode<double>& utilities,
                      const PerMode<bool>& affordable) {
  switch (strategy) {
    case Strategy::Repeat:
      return agent.current_mode;

    case Strategy::Imitate:
      return most_common_peer_mode(net, agent, agents);

    case Strategy::Deliberate: {
      int best = -1;
      for (int m = 0; m < kNumModes; ++m) {
        if (!affordable[m]) continue;
        if (best < 0 || utilities[m] > utilities[best]) best = m;
      }
      return best < 0 ? agent.current_mode : static_cast<Mode>(best);
    }

    case Strategy::Inquire: {
      PerMode<bool> candidate{};
      for (int p : net.neighbors(agent.id))
        candidate[mode_index(agents[p].current_mode)] = true;
      candidate[mode_index(agent.current_mode)] = true;
      int best = -1;
      for (int m = 0; m < kNumModes; ++m) {
        if (!candidate[m] || !affordable[m]) continue;
        if (best < 0 || utilities[m] > utilities[best]) best = m;
      }
      return best < 0 ? agent.current_mode : static_cast<Mode>(best);
    }
  }
  return agent.current_mode;
}

DecisionOutcome decide(const Agent& agent, const TripLog& log, const SocialNetwork& net,
                       std::span<const Agent> agents, const SystemState& state,
                       const PerMode<ModeParams>& params, const ScenarioConfig& cfg) {
  const int cur = mode_index(agent.current_mode);

  DecisionOutcome out;
  out.satisfaction = satisfaction(experienced_attributes(agent, log, params, cfg),
                                  cfg.attribute_weights[agent.income_level - 1]);
  out.uncertainty = uncertainty(cfg.alpha, agent.history.times_fraction(agent.current_mode),
                                peers_using_mode(net, agent, agent.current_mode, agents));
  out.strategy = select_strategy(out.satisfaction, out.uncertainty,
                                 agent.satisfaction_threshold[cur],
                                 agent.uncertainty_threshold[cur]);

  PerMode<double> utilities{};
  PerMode<bool> affordable{};
  for (Mode m : kAllModes) {
    affordable[mode_index(m)] = mode_affordable(agent, m, params, cfg);
    if (affordable[mode_index(m)])
      utilities[mode_index(m)] = expected_utility(agent, m, state, params, cfg);
  }
  out.chosen_mode = execute_strategy(agent, out.strategy, net, agents, utilities, affordable);
  return out;
}

void write_decision_audit_header(std::ostream& out) {
  out << "period,agent,strategy,S,U,prev_mode,new_mode\n";
}

void append_decision_audit(std::ostream& out, int period,
                           std::span<const DecisionOutcome> outcomes,
                           std::span<const Mode> previous_modes) {
  char buf[64];
  for (size_t i = 0; i < outcomes.size(); ++i) {
    const DecisionOutcome& d = outcomes[i];
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f", d.satisfaction, d.uncertainty);
    out << period << ',' << i << ',' << strategy_name(d.strategy) << ',' << buf << ','
        << mode_name(previous_modes[i]) << ',' << mode_name(d.chosen_mode) << '\n';
  }
}

}  // namespace commute
