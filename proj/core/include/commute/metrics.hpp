#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "commute/config.hpp"
#include "commute/population.hpp"
#include "commute/traffic.hpp"

namespace commute {

// The four output indicators of one decision period of one replication.
// Accident rates are per 100,000 represented persons; the per-mode entries
// are each mode's contribution to the consolidated rate, so they sum to the
// overall value. CO2 is in tons for the represented city population.
struct IndicatorRow {
  int period = 0;
  PerMode<double> mode_shares{};
  double accident_rate_all = 0.0;
  PerMode<double> accident_rate{};
  double co2_tons_all = 0.0;
  PerMode<double> co2_tons{};
  double avg_speed_all = 0.0;  // km/h, mean over agents that traveled
  PerMode<double> avg_speed{};
};

PerMode<double> mode_shares(std::span<const Agent> agents);

struct AccidentRates {
  double all = 0.0;
  PerMode<double> by_mode{};
};
AccidentRates accident_rate(const std::vector<bool>& flags, std::span<const Agent> agents,
                            double scale);

struct Co2Tons {
  double all = 0.0;
  PerMode<double> by_mode{};
};
// Per-mode tons computed as per-rider factor * total mode km * scale / 1e6,
// so the overall value is exactly the sum of the per-mode values.
Co2Tons co2_tons(std::span<const TripLog> logs, std::span<const Agent> agents,
                 const PerMode<ModeParams>& params, double scale);

struct AvgSpeeds {
  double all = 0.0;
  PerMode<double> by_mode{};
};
// Mean over agents of km / (time/60); agents with zero travel time are
// skipped, and a mode nobody used reports 0. Throws if no agent traveled.
AvgSpeeds avg_speed(std::span<const TripLog> logs, std::span<const Agent> agents);

// ---- aggregation over replications -----------------------------------------

enum class Indicator : uint8_t { Share = 0, AccidentRate = 1, Co2Tons = 2, AvgSpeed = 3 };
inline constexpr int kNumIndicators = 4;
inline constexpr int kModeSlotAll = kNumModes;  // mode slots: 0..2 per mode, 3 = "all"

std::string_view indicator_name(Indicator ind);

// Value of (indicator, mode slot) in one row.
double indicator_value(const IndicatorRow& row, Indicator ind, int mode_slot);

struct SeriesCell {
  double mean = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

// Replication-aggregated indicator series for one scenario: per period, per
// indicator, per mode slot the mean and normal-approximation 95% CI
// (mean +/- 1.96 * sd / sqrt(R)).
struct IndicatorSeries {
  std::string scenario;
  int replications = 0;
  int horizon = 0;
  std::vector<std::array<std::array<SeriesCell, kNumModes + 1>, kNumIndicators>> periods;

  const SeriesCell& cell(int period, Indicator ind, int mode_slot) const {
    return periods[period][static_cast<int>(ind)][mode_slot];
  }
};

// Deterministic reduction in replication order. Throws std::invalid_argument
// if fewer than two replications are supplied (CI undefined).
IndicatorSeries aggregate(const std::string& scenario,
                          const std::vector<std::vector<IndicatorRow>>& per_replication);

// Per-period, per-indicator deltas between a base and a policy series.
struct ComparisonEntry {
  int period;
  Indicator indicator;
  int mode_slot;
  double base_mean;
  double policy_mean;
  double delta;       // policy - base
  double pct_change;  // 100 * delta / base, 0 when base is 0
};
struct ComparisonReport {
  std::vector<ComparisonEntry> entries;
};
// Throws std::invalid_argument on horizon mismatch.
ComparisonReport compare_scenarios(const IndicatorSeries& base, const IndicatorSeries& policy);

// Writes shares.csv and indicators.csv (one block per scenario), plus
// comparison.csv when a comparison is given, and optional SVG plots. All
// files are written atomically (temp file + rename).
void write_results(std::span<const IndicatorSeries> series,
                   const std::optional<ComparisonReport>& comparison,
                   const std::filesystem::path& out_dir, bool emit_plots);

}  // namespace commute
