#include "commute/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "commute/plot.hpp"

namespace commute {

PerMode<double> mode_shares(std::span<const Agent> agents) {
  if (agents.empty()) throw std::invalid_argument("mode_shares: empty population");
  PerMode<double> shares{};
  for (const Agent& a : agents) shares[mode_index(a.current_mode)] += 1.0;
  for (double& s : shares) s /= static_cast<double>(agents.size());
  return shares;
}

AccidentRates accident_rate(const std::vector<bool>& flags, std::span<const Agent> agents,
                            double scale) {
  if (scale <= 0.0) throw std::invalid_argument("accident_rate: scale must be positive");
  // Each agent stands for `scale` persons, so the representation factor
  // cancels: accidents * 100000 / n_agents.
  AccidentRates rates;
  const double denom = static_cast<double>(agents.size());
  for (size_t i = 0; i < agents.size(); ++i) {
    if (flags[i]) rates.by_mode[mode_index(agents[i].current_mode)] += 1.0;
  }
  for (int m = 0; m < kNumModes; ++m) {
    rates.by_mode[m] = rates.by_mode[m] * 100000.0 / denom;
    rates.all += rates.by_mode[m];
  }
  return rates;
}

Co2Tons co2_tons(std::span<const TripLog> logs, std::span<const Agent> agents,
                 const PerMode<ModeParams>& params, double scale) {
  Co2Tons tons;
  PerMode<double> km{};
  for (size_t i = 0; i < agents.size(); ++i)
    km[mode_index(agents[i].current_mode)] += logs[i].km_traveled;
  for (int m = 0; m < kNumModes; ++m) {
    tons.by_mode[m] =
        per_rider_emission_g_per_km(params[m]) * km[m] * scale / 1e6;
    tons.all += tons.by_mode[m];
  }
  return tons;
}

AvgSpeeds avg_speed(std::span<const TripLog> logs, std::span<const Agent> agents) {
  AvgSpeeds speeds;
  PerMode<double> sums{};
  PerMode<int> counts{};
  double sum_all = 0.0;
  int count_all = 0;
  for (size_t i = 0; i < agents.size(); ++i) {
    if (logs[i].travel_time_min <= 0.0) continue;
    const double v = logs[i].km_traveled / (logs[i].travel_time_min / 60.0);
    sums[mode_index(agents[i].current_mode)] += v;
    counts[mode_index(agents[i].current_mode)] += 1;
    sum_all += v;
    count_all += 1;
  }
  if (count_all == 0) throw std::invalid_argument("avg_speed: no agent traveled");
  speeds.all = sum_all / count_all;
  for (int m = 0; m < kNumModes; ++m)
    speeds.by_mode[m] = counts[m] > 0 ? sums[m] / counts[m] : 0.0;
  return speeds;
}

std::string_view indicator_name(Indicator ind) {
  switch (ind) {
    case Indicator::Share: return "share";
    case Indicator::AccidentRate: return "accident_rate_per_100k";
    case Indicator::Co2Tons: return "co2_tons";
    case Indicator::AvgSpeed: return "avg_speed_kmh";
  }
  return "?";
}

double indicator_value(const IndicatorRow& row, Indicator ind, int mode_slot) {
  const bool all = mode_slot == kModeSlotAll;
  switch (ind) {
    case Indicator::Share: return all ? 1.0 : row.mode_shares[mode_slot];
    case Indicator::AccidentRate:
      return all ? row.accident_rate_all : row.accident_rate[mode_slot];
    case Indicator::Co2Tons: return all ? row.co2_tons_all : row.co2_tons[mode_slot];
    case Indicator::AvgSpeed: return all ? row.avg_speed_all : row.avg_speed[mode_slot];
  }
  return 0.0;
}

IndicatorSeries aggregate(const std::string& scenario,
                          const std::vector<std::vector<IndicatorRow>>& per_replication) {
  const int r = static_cast<int>(per_replication.size());
  if (r < 2) throw std::invalid_argument("aggregate: need >= 2 replications for a CI");
  const int horizon = static_cast<int>(per_replication[0].size());
  for (const auto& rows : per_replication)
    if (static_cast<int>(rows.size()) != horizon)
      throw std::invalid_argument("aggregate: replications disagree on horizon");

  IndicatorSeries series;
  series.scenario = scenario;
  series.replications = r;
  series.horizon = horizon;
  series.periods.resize(horizon);

  for (int t = 0; t < horizon; ++t) {
    for (int ind = 0; ind < kNumIndicators; ++ind) {
      for (int slot = 0; slot <= kNumModes; ++slot) {
        double sum = 0.0;
        for (int i = 0; i < r; ++i)
          sum += indicator_value(per_replication[i][t], static_cast<Indicator>(ind), slot);
        const double mean = sum / r;
        double ss = 0.0;
        for (int i = 0; i < r; ++i) {
          const double d =
              indicator_value(per_replication[i][t], static_cast<Indicator>(ind), slot) - mean;
          ss += d * d;
        }
        const double sd = std::sqrt(ss / (r - 1));
        const double half = 1.96 * sd / std::sqrt(static_cast<double>(r));
        series.periods[t][ind][slot] = SeriesCell{mean, mean - half, mean + half};
      }
    }
  }
  return series;
}

ComparisonReport compare_scenarios(const IndicatorSeries& base, const IndicatorSeries& policy) {
  if (base.horizon != policy.horizon)
    throw std::invalid_argument("compare_scenarios: horizon mismatch");
  ComparisonReport report;
  for (int t = 0; t < base.horizon; ++t) {
    for (int ind = 0; ind < kNumIndicators; ++ind) {
      for (int slot = 0; slot <= kNumModes; ++slot) {
        const double b = base.cell(t, static_cast<Indicator>(ind), slot).mean;
        const double p = policy.cell(t, static_cast<Indicator>(ind), slot).mean;
        const double delta = p - b;
        report.entries.push_back(ComparisonEntry{
            t, static_cast<Indicator>(ind), slot, b, p, delta,
            b != 0.0 ? 100.0 * delta / b : 0.0});
      }
    }
  }
  return report;
}

namespace {

std::string mode_slot_name(int slot) {
  return slot == kModeSlotAll ? "all" : std::string(mode_name(static_cast<Mode>(slot)));
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// Temp-file-then-rename so a rerun never leaves a torn CSV behind.
void write_atomically(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("metrics: cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

void write_results(std::span<const IndicatorSeries> series,
                   const std::optional<ComparisonReport>& comparison,
                   const std::filesystem::path& out_dir, bool emit_plots) {
  std::filesystem::create_directories(out_dir);

  std::string shares = "scenario,period";
  for (Mode m : kAllModes) {
    const std::string n(mode_name(m));
    shares += ",replication_mean_" + n + ",ci_lo_" + n + ",ci_hi_" + n;
  }
  shares += "\n";
  for (const IndicatorSeries& s : series) {
    for (int t = 0; t < s.horizon; ++t) {
      shares += s.scenario + "," + std::to_string(t);
      for (int m = 0; m < kNumModes; ++m) {
        const SeriesCell& c = s.cell(t, Indicator::Share, m);
        shares += "," + fmt(c.mean) + "," + fmt(c.ci_lo) + "," + fmt(c.ci_hi);
      }
      shares += "\n";
    }
  }
  write_atomically(out_dir / "shares.csv", shares);

  std::string indicators = "scenario,period,indicator,mode,mean,ci_lo,ci_hi\n";
  for (const IndicatorSeries& s : series) {
    for (int t = 0; t < s.horizon; ++t) {
      for (int ind = 0; ind < kNumIndicators; ++ind) {
        for (int slot = 0; slot <= kNumModes; ++slot) {
          if (static_cast<Indicator>(ind) == Indicator::Share && slot == kModeSlotAll)
            continue;  // share of "all" is identically 1
          const SeriesCell& c = s.cell(t, static_cast<Indicator>(ind), slot);
          indicators += s.scenario + "," + std::to_string(t) + "," +
                        std::string(indicator_name(static_cast<Indicator>(ind))) + "," +
                        mode_slot_name(slot) + "," + fmt(c.mean) + "," + fmt(c.ci_lo) + "," +
                        fmt(c.ci_hi) + "\n";
        }
      }
    }
  }
  write_atomically(out_dir / "indicators.csv", indicators);

  if (comparison) {
    std::string cmp = "period,indicator,mode,base_mean,policy_mean,delta,pct_change\n";
    for (const ComparisonEntry& e : comparison->entries) {
      if (e.indicator == Indicator::Share && e.mode_slot == kModeSlotAll) continue;
      cmp += std::to_string(e.period) + "," + std::string(indicator_name(e.indicator)) + "," +
             mode_slot_name(e.mode_slot) + "," + fmt(e.base_mean) + "," + fmt(e.policy_mean) +
             "," + fmt(e.delta) + "," + fmt(e.pct_change) + "\n";
    }
    write_atomically(out_dir / "comparison.csv", cmp);
  }

  if (emit_plots) {
    write_atomically(out_dir / "mode_shares.svg", render_shares_svg(series));
    write_atomically(out_dir / "indicators.svg", render_indicators_svg(series));
  }
}

}  // namespace commute
