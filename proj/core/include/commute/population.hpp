#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <vector>

#include "commute/config.hpp"
#include "commute/mode.hpp"
#include "commute/rng.hpp"

namespace commute {

enum class Sex : uint8_t { Female = 0, Male = 1 };

struct Patch {
  int x = 0;
  int y = 0;

  bool operator==(const Patch&) const = default;
};

// Per-mode usage counts; times_fraction feeds the uncertainty formula.
struct ModeHistory {
  PerMode<int> periods_used{};
  int periods_elapsed = 0;

  double times_fraction(Mode m) const {
    return periods_elapsed == 0
               ? 0.0
               : static_cast<double>(periods_used[mode_index(m)]) / periods_elapsed;
  }
};

struct Agent {
  int id = 0;
  Sex sex = Sex::Female;  // carried attribute, not used by the core equations
  int age = 0;            // carried attribute
  int income_level = 1;   // 1..3
  Patch home;
  Patch workplace;
  Mode current_mode = Mode::Transit;
  ModeHistory history;
  PerMode<double> satisfaction_threshold{};
  PerMode<double> uncertainty_threshold{};
  double last_satisfaction = 0.0;
  PerMode<bool> owned_vehicles{};  // modes whose acquisition cost was already paid
};

// Largest-remainder apportionment: counts sum to n and each count differs
// from n*share by less than 1. Remainder ties go to the lower index.
std::vector<int> apportion(int n, std::span<const double> shares);

// Draws per-mode thresholds Normal(mean, sd), clamped to [0,1]. Consumes a
// fixed number of draws (eight normals) for any parameters.
void assign_thresholds(Agent& agent, const PerMode<ThresholdParams>& params, RngStream& rng);

// Builds the synthetic population: income levels and initial modes by
// largest-remainder apportionment, homes inside contiguous same-income
// neighborhoods, workplaces inside the central business district, thresholds
// normally distributed per mode. Deterministic given the stream state.
std::vector<Agent> synthesize_population(const ScenarioConfig& config, RngStream& rng);

// Central business district: the square of half-width cbd_extent around the
// grid center. Commutes run home -> workplace inside this region.
bool in_cbd(const TrafficParams& traffic, Patch p);

// One row per agent: id,sex,age,income_level,home_x,home_y,initial_mode.
void write_population_csv(const std::filesystem::path& path, std::span<const Agent> agents);

}  // namespace commute
