#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "commute/mode.hpp"

namespace commute {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Per-mode technical and perception parameters.
//
// For transit, operating_cost_per_km holds the flat fare per trip (no
// per-km charge), emission_factor is per vehicle-km (a full bus) and gets
// divided by passengers_per_vehicle when attributed to one rider, and
// congestion_exposure 0 models the dedicated bus lanes of a BRT system.
struct ModeParams {
  double acquisition_cost = 0.0;
  double operating_cost_per_km = 0.0;
  double free_flow_speed = 0.0;          // km/h
  double emission_factor = 0.0;          // g CO2 per vehicle-km
  double fuel_efficiency = 0.0;          // km/gal, carried for reporting
  double accident_probability = 0.0;     // per decision period
  double comfort_score = 0.0;            // [0,1], 1 best
  double personal_security_score = 0.0;  // [0,1]
  double road_safety_score = 0.0;        // [0,1]
  double car_equivalent = 1.0;           // PCE per vehicle
  double passengers_per_vehicle = 1.0;   // riders sharing one vehicle
  double congestion_exposure = 1.0;      // [0,1] scale on the speed-decay coefficient

  bool operator==(const ModeParams&) const = default;
};

struct NetworkParams {
  int m0 = 5;                        // initial clique size
  int m = 3;                         // edges added per new node
  double homophily_multiplier = 3.0; // >=1 weight boost for same-income candidates

  bool operator==(const NetworkParams&) const = default;
};

struct PolicySpec {
  bool fare_free_transit = false;
  int activation_period = 0;  // first decision period the policy applies to

  bool operator==(const PolicySpec&) const = default;
};

// Normal-distribution parameters for per-agent thresholds, one set per mode.
struct ThresholdParams {
  double satisfaction_mean = 0.64;
  double satisfaction_sd = 0.08;
  double uncertainty_mean = 0.55;
  double uncertainty_sd = 0.10;

  bool operator==(const ThresholdParams&) const = default;
};

// Raw-value range mapped onto [0,1]: raw == best -> 1, raw == worst -> 0,
// linear and clamped in between. Score attributes use best=1, worst=0 so the
// configured score passes through unchanged.
struct AnchorRange {
  double best = 1.0;
  double worst = 0.0;

  bool operator==(const AnchorRange&) const = default;
};

// World geometry and congestion response.
struct TrafficParams {
  int grid_width = 40;          // patches
  int grid_height = 40;
  double patch_km = 0.25;       // edge length of one patch
  int cbd_extent = 2;           // CBD = central square of half-width cbd_extent
  int neighborhood_patches = 5; // residential block edge, must divide the grid
  double decay_k = 0.3;         // logarithmic speed-decay coefficient
  double decay_rho0 = 3.0;      // reference density (car equivalents)
  double speed_floor = 0.15;    // fraction of free-flow speed never undercut
  int density_radius = 1;       // patches around own patch counted as "local"

  bool operator==(const TrafficParams&) const = default;
};

// Budget proxies used by the affordability rule: a mode can be newly acquired
// only if its amortized yearly acquisition cost fits the agent's budget.
struct EconomyParams {
  PerIncomeLevel<double> income_budgets{3000.0, 14000.0, 45000.0};
  double affordability_multiplier = 1.0;
  double vehicle_lifetime_years = 5.0;

  bool operator==(const EconomyParams&) const = default;
};

// Full experiment parameterization. Immutable after load_config; safe to
// share read-only across concurrent replications.
struct ScenarioConfig {
  double population_scale = 1000.0;  // real persons per agent
  int n_agents = 1200;
  int horizon_years = 10;
  int ticks_per_period = 30;  // one 60-minute peak hour at 2 minutes per tick
  int replications = 100;
  uint64_t rng_seed = 20240520ULL;
  double alpha = 0.48;  // personal vs social experience balance in uncertainty

  PerMode<double> initial_mode_shares{0.20, 0.43, 0.37};
  PerIncomeLevel<double> income_level_shares{0.34, 0.42, 0.24};
  PerIncomeLevel<PerAttribute<double>> attribute_weights;  // each row sums to 1
  PerMode<ThresholdParams> threshold_params;
  PerMode<ModeParams> mode_params;
  NetworkParams network_params;
  PolicySpec policy;
  TrafficParams traffic;
  EconomyParams economy;
  PerAttribute<AnchorRange> attribute_anchors;

  bool operator==(const ScenarioConfig&) const = default;
};

// Defaults calibrated for the reference city. Monetary values are
// calibration placeholders in thousands of local currency units (see README).
ScenarioConfig default_config();

// Throws ConfigError naming the first violated invariant.
void validate(const ScenarioConfig& config);

// Reads a JSON config file and overlays it on the defaults. An empty file or
// empty object yields default_config(). Unknown keys are rejected.
ScenarioConfig load_config(const std::filesystem::path& path);
ScenarioConfig parse_config(const std::string& json_text);

// Serializes every field; load(parse(write_config(c))) == c.
std::string write_config(const ScenarioConfig& config);

// Mode parameters in force at `period`: fare-free zeroes the transit fare
// from the activation period onward and touches nothing else. Idempotent.
PerMode<ModeParams> apply_policy(const ScenarioConfig& config, int period);

// Maps a raw attribute value through the configured anchor range.
double normalize_attribute(const ScenarioConfig& config, Attribute attribute, double raw);

// Amortized yearly acquisition cost of a mode.
double amortized_acquisition_cost(const ScenarioConfig& config, const ModeParams& params);

}  // namespace commute
