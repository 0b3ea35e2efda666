#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "commute/config.hpp"
#include "commute/network.hpp"
#include "commute/population.hpp"
#include "commute/traffic.hpp"

namespace commute {

// Normalized attribute values, 1 = best, in Attribute order.
struct AttributeVector {
  PerAttribute<double> values{};
};

enum class Strategy : uint8_t { Repeat = 0, Imitate = 1, Deliberate = 2, Inquire = 3 };

constexpr std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Repeat: return "repeat";
    case Strategy::Imitate: return "imitate";
    case Strategy::Deliberate: return "deliberate";
    case Strategy::Inquire: return "inquire";
  }
  return "?";
}

struct DecisionOutcome {
  Strategy strategy = Strategy::Repeat;
  Mode chosen_mode = Mode::Motorcycle;
  double satisfaction = 0.0;
  double uncertainty = 0.0;
};

// S = sum_i V_i * W_i. Throws std::invalid_argument unless the weights are
// non-negative and sum to 1 within 1e-9.
double satisfaction(const AttributeVector& values, std::span<const double> weights);

// U = alpha*(1 - times_frac) + (1 - alpha)*(1 - peers_frac).
double uncertainty(double alpha, double times_frac, double peers_frac);

// The CONSUMAT quadrant:
//   satisfied & certain    -> repeat
//   satisfied & uncertain  -> imitate
//   unsatisfied & certain  -> deliberate
//   unsatisfied & uncertain-> inquire
// "Satisfied" means s >= s_thresh; "uncertain" means u >= u_thresh.
Strategy select_strategy(double s, double u, double s_thresh, double u_thresh);

// Last-period per-mode averages used to forecast attributes of modes the
// agent has not (recently) experienced.
struct SystemState {
  PerMode<int> users{};
  PerMode<double> avg_time_min{};
  PerMode<double> accident_frac{};
  PerMode<double> avg_co2_g{};
  double mean_trip_km = 0.0;  // fallback when a mode had no users
};

SystemState summarize_period(std::span<const Agent> agents, std::span<const TripLog> logs,
                             const std::vector<bool>& accident_flags,
                             const ScenarioConfig& config);

// Attribute values the agent just experienced on its current mode.
AttributeVector experienced_attributes(const Agent& agent, const TripLog& log,
                                       const PerMode<ModeParams>& params,
                                       const ScenarioConfig& config);

// Forecast attribute values for `mode` from system-wide averages. Owned
// modes (and modes without acquisition cost) score 1 on acquisition.
AttributeVector forecast_attributes(const Agent& agent, Mode mode, const SystemState& state,
                                    const PerMode<ModeParams>& params,
                                    const ScenarioConfig& config);

// Eq-style expected utility of `mode`: satisfaction over forecast values with
// the agent's income-level weights.
double expected_utility(const Agent& agent, Mode mode, const SystemState& state,
                        const PerMode<ModeParams>& params, const ScenarioConfig& config);

// A mode can be newly acquired only if its amortized yearly acquisition cost
// fits within the income-level budget. Owned modes are always affordable.
bool mode_affordable(const Agent& agent, Mode mode, const PerMode<ModeParams>& params,
                     const ScenarioConfig& config);

// Applies the selected strategy:
//   repeat     -> current mode
//   imitate    -> modal mode among network neighbors
//   deliberate -> argmax utility over affordable modes
//   inquire    -> argmax utility over affordable modes used by >=1 neighbor,
//                 plus the current mode
// Ties break toward the lower mode index. `utilities` must be populated for
// every affordable mode.
Mode execute_strategy(const Agent& agent, Strategy strategy, const SocialNetwork& net,
                      std::span<const Agent> agents, const PerMode<double>& utilities,
                      const PerMode<bool>& affordable);

// Full pipeline for one agent on an immutable pre-decision snapshot. The
// agent's history must already count the period being evaluated.
DecisionOutcome decide(const Agent& agent, const TripLog& log, const SocialNetwork& net,
                       std::span<const Agent> agents, const SystemState& state,
                       const PerMode<ModeParams>& params, const ScenarioConfig& config);

// Decision audit rows: period,agent,strategy,S,U,prev_mode,new_mode.
void write_decision_audit_header(std::ostream& out);
void append_decision_audit(std::ostream& out, int period,
                           std::span<const DecisionOutcome> outcomes,
                           std::span<const Mode> previous_modes);

}  // namespace commute
