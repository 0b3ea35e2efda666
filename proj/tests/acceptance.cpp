// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria 1-3 run the full default experiment (100 replications,
// 10 periods, both scenarios, paired seeds).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "commute/engine.hpp"
#include "hand_trace.hpp"

using namespace commute;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  if (!pass) ++g_failures;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

double share(const IndicatorSeries& s, int t, Mode m) {
  return s.cell(t, Indicator::Share, mode_index(m)).mean;
}

// ---- criteria 1-3: default-calibration experiment ---------------------------

void run_experiment_criteria() {
  const ScenarioConfig defaults = default_config();
  ScenarioConfig base_cfg = defaults;
  base_cfg.policy.fare_free_transit = false;
  ScenarioConfig policy_cfg = defaults;
  policy_cfg.policy.fare_free_transit = true;
  policy_cfg.policy.activation_period = 0;

  const auto start = std::chrono::steady_clock::now();
  const IndicatorSeries base = run_experiment(base_cfg, "base", {});
  const IndicatorSeries policy = run_experiment(policy_cfg, "fare-free", {});
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const int horizon = base.horizon;
  const int activation = policy_cfg.policy.activation_period;

  // Criterion 1: fare-free transit share strictly above base from the first
  // period that reflects policy-influenced decisions (activation + 1; the
  // activation-period row is captured before any decision and is identical
  // under paired seeds), base transit monotone non-increasing within 1 pp,
  // and the whole paired experiment under five minutes.
  bool policy_above = true;
  for (int t = activation + 1; t < horizon; ++t)
    if (!(share(policy, t, Mode::Transit) > share(base, t, Mode::Transit)))
      policy_above = false;
  bool base_monotone = true;
  for (int t = 0; t + 1 < horizon; ++t)
    if (share(base, t + 1, Mode::Transit) > share(base, t, Mode::Transit) + 0.01)
      base_monotone = false;
  const bool on_time = seconds < 300.0;
  {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "policy transit > base in periods %d..%d (%s), base transit "
                  "non-increasing (%s), runtime %.1fs (< 300s: %s)",
                  activation + 1, horizon - 1, policy_above ? "yes" : "no",
                  base_monotone ? "yes" : "no", seconds, on_time ? "yes" : "no");
    report(1, policy_above && base_monotone && on_time, buf);
  }

  // Criterion 2: final-period indicator directions plus favorable CIs (or
  // favorable means where the CIs overlap) in at least 8 of 10 periods.
  const int last = horizon - 1;
  auto cell = [](const IndicatorSeries& s, int t, Indicator ind) {
    return s.cell(t, ind, kModeSlotAll);
  };
  const bool final_co2 = cell(policy, last, Indicator::Co2Tons).mean <
                         cell(base, last, Indicator::Co2Tons).mean;
  const bool final_acc = cell(policy, last, Indicator::AccidentRate).mean <
                         cell(base, last, Indicator::AccidentRate).mean;
  const bool final_speed = cell(policy, last, Indicator::AvgSpeed).mean >=
                           cell(base, last, Indicator::AvgSpeed).mean;
  int co2_fav = 0, acc_fav = 0, speed_fav = 0;
  for (int t = 0; t < horizon; ++t) {
    if (cell(policy, t, Indicator::Co2Tons).mean < cell(base, t, Indicator::Co2Tons).mean)
      ++co2_fav;
    if (cell(policy, t, Indicator::AccidentRate).mean <
        cell(base, t, Indicator::AccidentRate).mean)
      ++acc_fav;
    if (cell(policy, t, Indicator::AvgSpeed).mean >
        cell(base, t, Indicator::AvgSpeed).mean)
      ++speed_fav;
  }
  const bool counts_ok = co2_fav >= 8 && acc_fav >= 8 && speed_fav >= 8;
  {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "final period: CO2 %s, accidents %s, speed %s; favorable periods "
                  "CO2 %d/10, accidents %d/10, speed %d/10",
                  final_co2 ? "lower" : "NOT lower", final_acc ? "lower" : "NOT lower",
                  final_speed ? ">= base" : "BELOW base", co2_fav, acc_fav, speed_fav);
    report(2, final_co2 && final_acc && final_speed && counts_ok, buf);
  }

  // Criterion 3: motorcycle accident dominance every period under defaults,
  // rate above 10 per 100k, and the metric equals a brute-force recount.
  bool moto_dominates = true, above_10 = true;
  for (int t = 0; t < horizon; ++t) {
    const double m = base.cell(t, Indicator::AccidentRate, mode_index(Mode::Motorcycle)).mean;
    const double c = base.cell(t, Indicator::AccidentRate, mode_index(Mode::Car)).mean;
    const double tr = base.cell(t, Indicator::AccidentRate, mode_index(Mode::Transit)).mean;
    if (!(m > c && m > tr)) moto_dominates = false;
    if (!(m > 10.0)) above_10 = false;
  }
  bool recount_exact = true;
  {
    RngStream rng(1717);
    for (int trial = 0; trial < 1000 && recount_exact; ++trial) {
      const int n = 5 + static_cast<int>(rng.uniform_int(400));
      std::vector<Agent> agents(n);
      std::vector<bool> flags(n);
      for (int i = 0; i < n; ++i) {
        agents[i].id = i;
        agents[i].current_mode = static_cast<Mode>(rng.uniform_int(3));
        flags[i] = rng.bernoulli(0.25);
      }
      const AccidentRates rates = accident_rate(flags, agents, 1000.0);
      PerMode<double> recount{};
      for (int i = 0; i < n; ++i)
        if (flags[i]) recount[mode_index(agents[i].current_mode)] += 1.0;
      double total = 0.0;
      for (int m = 0; m < kNumModes; ++m) {
        const double expect = recount[m] * 100000.0 / n;
        if (rates.by_mode[m] != expect) recount_exact = false;
        total += expect;
      }
      if (std::abs(rates.all - total) > 1e-9) recount_exact = false;
    }
  }
  {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "motorcycle > car,transit every period (%s), rate > 10/100k (%s), "
                  "brute-force recount exact over 1000 cases (%s)",
                  moto_dominates ? "yes" : "no", above_10 ? "yes" : "no",
                  recount_exact ? "yes" : "no");
    report(3, moto_dominates && above_10 && recount_exact, buf);
  }
}

// ---- criterion 4: formula oracles -------------------------------------------

void run_formula_oracles() {
  bool ok = true;
  RngStream rng(2024);

  // 25 randomized satisfaction cases against an independent accumulation.
  for (int trial = 0; trial < 25; ++trial) {
    AttributeVector v;
    PerAttribute<double> w;
    double total = 0.0;
    for (int i = 0; i < kNumAttributes; ++i) {
      v.values[i] = rng.next_double();
      w[i] = rng.next_double() + 1e-6;
      total += w[i];
    }
    for (double& x : w) x /= total;
    double head = 0.0;
    for (int i = 0; i < kNumAttributes - 1; ++i) head += w[i];
    w[kNumAttributes - 1] = 1.0 - head;

    long double expected = 0.0L;
    for (int i = kNumAttributes - 1; i >= 0; --i)
      expected += static_cast<long double>(v.values[i]) * w[i];
    if (std::abs(satisfaction(v, w) - static_cast<double>(expected)) > 1e-12) ok = false;
  }

  // 25 randomized uncertainty cases against a literal transliteration.
  for (int trial = 0; trial < 25; ++trial) {
    const double alpha = rng.next_double();
    const double times = rng.next_double();
    const double peers = rng.next_double();
    const long double expected = static_cast<long double>(alpha) * (1.0L - times) +
                                 (1.0L - alpha) * (1.0L - peers);
    if (std::abs(uncertainty(alpha, times, peers) - static_cast<double>(expected)) > 1e-12)
      ok = false;
  }

  // Exhaustive four-quadrant truth table on a 101x101 grid.
  bool quadrants = true;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const double s = i / 100.0;
      const double u = j / 100.0;
      const bool satisfied = s >= 0.5;
      const bool uncertain = u >= 0.5;
      const Strategy want = satisfied
                                ? (uncertain ? Strategy::Imitate : Strategy::Repeat)
                                : (uncertain ? Strategy::Inquire : Strategy::Deliberate);
      if (select_strategy(s, u, 0.5, 0.5) != want) quadrants = false;
    }
  }

  report(4, ok && quadrants,
         std::string("satisfaction/uncertainty match hand oracles to 1e-12 (") +
             (ok ? "yes" : "no") + "), strategy truth table exhaustive on 101x101 (" +
             (quadrants ? "yes" : "no") + ")");
}

// ---- criterion 5: network properties ----------------------------------------

// Independent tail-exponent oracle: brute-force degree histogram, CCDF at
// every distinct degree with at least 10 nodes in the tail, least squares in
// log-log space; CCDF slope -(gamma - 1) gives gamma = 1 - slope.
double ccdf_tail_exponent(const SocialNetwork& net) {
  std::vector<int> degrees(net.size());
  int max_deg = 0;
  for (int i = 0; i < net.size(); ++i) {
    degrees[i] = net.degree(i);
    max_deg = std::max(max_deg, degrees[i]);
  }
  std::vector<long long> hist(max_deg + 1, 0);
  for (int d : degrees) hist[d] += 1;
  std::vector<long long> tail(max_deg + 2, 0);  // tail[k] = #nodes with degree >= k
  for (int k = max_deg; k >= 0; --k) tail[k] = tail[k + 1] + hist[k];

  std::vector<double> xs, ys;
  for (int k = 1; k <= max_deg; ++k) {
    if (hist[k] == 0) continue;
    if (tail[k] < 10) break;  // noisy extreme tail
    xs.push_back(std::log(static_cast<double>(k)));
    ys.push_back(std::log(static_cast<double>(tail[k]) / net.size()));
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return 1.0 - sxy / sxx;
}

void run_network_criterion() {
  const int n = 10000;
  const PerIncomeLevel<double> shares{0.34, 0.42, 0.24};

  double exponent_sum = 0.0;
  bool all_simple_connected = true;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    RngStream level_rng(seed * 31 + 7);
    std::vector<int> levels(n);
    for (int& lv : levels) {
      const double r = level_rng.next_double();
      lv = r < shares[0] ? 1 : (r < shares[0] + shares[1] ? 2 : 3);
    }
    RngStream rng = make_stream(seed, 0, StreamConcern::Network);
    const SocialNetwork net =
        build_network_from_levels(levels, NetworkParams{5, 3, 1.0}, rng);
    if (!net.is_simple_symmetric() || !net.is_connected()) all_simple_connected = false;
    exponent_sum += ccdf_tail_exponent(net);
  }
  const double mean_exponent = exponent_sum / 20.0;
  const bool exponent_ok = mean_exponent >= 2.5 && mean_exponent <= 3.5;

  int homophily_wins = 0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    RngStream level_rng(seed * 17 + 3);
    std::vector<int> levels(n);
    for (int& lv : levels) {
      const double r = level_rng.next_double();
      lv = r < shares[0] ? 1 : (r < shares[0] + shares[1] ? 2 : 3);
    }
    RngStream rng = make_stream(seed, 1, StreamConcern::Network);
    const SocialNetwork net =
        build_network_from_levels(levels, NetworkParams{5, 3, 3.0}, rng);
    if (same_income_edge_fraction(net, levels) > demographic_baseline(levels))
      ++homophily_wins;
  }

  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "mean tail exponent %.3f in [2.5,3.5] (%s), simple+connected 20/20 (%s), "
                "homophily beats baseline %d/20 (need >= 19)",
                mean_exponent, exponent_ok ? "yes" : "no",
                all_simple_connected ? "yes" : "no", homophily_wins);
  report(5, exponent_ok && all_simple_connected && homophily_wins >= 19, buf);
}

// ---- criterion 6: traffic properties ----------------------------------------

void run_traffic_criterion() {
  RngStream rng(6161);
  bool monotone = true;
  for (int i = 0; i < 1000; ++i) {
    double d1 = rng.next_double() * 400.0;
    double d2 = rng.next_double() * 400.0;
    if (d1 > d2) std::swap(d1, d2);
    const double k = 0.05 + rng.next_double() * 0.5;
    const double rho0 = 0.5 + rng.next_double() * 10.0;
    const double floor = 0.05 + rng.next_double() * 0.9;
    if (effective_speed(25.0, d1, k, rho0, floor) < effective_speed(25.0, d2, k, rho0, floor))
      monotone = false;
  }

  // CO2 additivity: metric total == sum over modes of factor * km * scale,
  // computed the same way, hence bitwise equal; per-agent logs carry exactly
  // factor * km.
  bool additive = true;
  {
    const PerMode<ModeParams> params = default_config().mode_params;
    for (int trial = 0; trial < 200 && additive; ++trial) {
      const int n = 1 + static_cast<int>(rng.uniform_int(200));
      std::vector<Agent> agents(n);
      std::vector<TripLog> logs(n);
      for (int i = 0; i < n; ++i) {
        agents[i].id = i;
        agents[i].current_mode = static_cast<Mode>(rng.uniform_int(3));
        logs[i].km_traveled = rng.next_double() * 20.0;
      }
      const Co2Tons tons = co2_tons(logs, agents, params, 1000.0);
      PerMode<double> km{};
      for (int i = 0; i < n; ++i) km[mode_index(agents[i].current_mode)] += logs[i].km_traveled;
      double total = 0.0;
      for (int m = 0; m < kNumModes; ++m) {
        const double expect = per_rider_emission_g_per_km(params[m]) * km[m] * 1000.0 / 1e6;
        if (tons.by_mode[m] != expect) additive = false;
        total += expect;
      }
      if (tons.all != total) additive = false;
    }
  }

  // Mass conservation on the 5-agent line trace, against a hand-simulated
  // oracle (one patch per tick, arrivals at distances 3,4,5,6,7).
  bool conserved = true;
  {
    TrafficParams t;
    t.grid_width = 20;
    t.grid_height = 20;
    t.patch_km = 1.0;
    t.cbd_extent = 0;
    t.neighborhood_patches = 5;
    t.decay_k = 0.0;

    PerMode<ModeParams> params = default_config().mode_params;
    for (auto& p : params) p.free_flow_speed = 30.0;

    const Patch work{12, 5};
    std::vector<Agent> agents(5);
    const Mode modes[5] = {Mode::Motorcycle, Mode::Car, Mode::Motorcycle, Mode::Car,
                           Mode::Transit};
    const int dist[5] = {3, 4, 5, 6, 7};
    for (int i = 0; i < 5; ++i) {
      agents[i].id = i;
      agents[i].current_mode = modes[i];
      agents[i].home = Patch{work.x - dist[i], work.y};
      agents[i].workplace = work;
    }
    WorldGrid grid(20, 20);
    TravelState state = begin_period(agents, grid, t, params);
    const double expected_totals[8] = {3.075, 3.075, 2.575, 1.575, 1.075, 0.075, 0.0, 0.0};
    for (int step = 1; step <= 8; ++step) {
      tick(state, agents, grid, t, params);
      double oracle = 0.0;
      for (int i = 0; i < 5; ++i)
        if (step < dist[i]) oracle += per_rider_equivalent(params[mode_index(modes[i])]);
      if (std::abs(grid.total() - oracle) > 1e-9) conserved = false;
      if (std::abs(grid.total() - expected_totals[step - 1]) > 1e-9) conserved = false;
    }
  }

  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "speed monotone on 1000 density pairs (%s), CO2 additivity exact (%s), "
                "mass conserved on hand-traced ticks (%s)",
                monotone ? "yes" : "no", additive ? "yes" : "no", conserved ? "yes" : "no");
  report(6, monotone && additive && conserved, buf);
}

// ---- criterion 7: determinism through the CLI --------------------------------

void run_determinism_criterion() {
#ifndef COMMUTE_CLI_PATH
  report(7, false, "CLI path not configured");
#else
  const std::string cli = COMMUTE_CLI_PATH;
  const std::string dir = "acceptance_runs";
  const std::string cfg_path = dir + "/config.json";
  std::system(("rm -rf " + dir).c_str());
  std::filesystem::create_directories(dir);
  {
    std::ofstream cfg(cfg_path);
    cfg << R"({"simulation": {"n_agents": 300, "horizon_years": 4, "replications": 6}})";
  }

  auto run = [&](const std::string& out, const std::string& extra) {
    const std::string cmd = cli + " --config " + cfg_path +
                            " --scenario both --seed 42 --out " + dir + "/" + out + " " +
                            extra + " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };

  bool ran = run("a", "") && run("b", "") && run("t1", "--threads 1") &&
             run("t4", "--threads 4");
  bool identical = true;
  for (const char* file : {"shares.csv", "indicators.csv", "comparison.csv"}) {
    if (read_file(dir + "/a/" + file) != read_file(dir + "/b/" + file)) identical = false;
    if (read_file(dir + "/t1/" + file) != read_file(dir + "/t4/" + file)) identical = false;
    if (read_file(dir + "/a/" + file).empty()) identical = false;
  }

  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "CLI runs succeeded (%s), same-seed reruns byte-identical and "
                "thread count irrelevant (%s)",
                ran ? "yes" : "no", identical ? "yes" : "no");
  report(7, ran && identical, buf);
#endif
}

// ---- criterion 8: hand-traced small instance ---------------------------------

void run_hand_trace_criterion() {
  const ScenarioConfig cfg = handtrace::config();
  RunState state = handtrace::make_state(cfg);

  bool ok = true;
  const auto expected = {handtrace::expected_period0(), handtrace::expected_period1()};
  int period = 0;
  for (const auto& want : expected) {
    PeriodOutputs out = simulate_period(state);
    const std::vector<DecisionOutcome> got = decide_period(state, out);
    for (size_t i = 0; i < want.size(); ++i) {
      if (got[i].strategy != want[i].first || got[i].chosen_mode != want[i].second) ok = false;
    }
    ++period;
  }
  for (const Agent& a : state.agents)
    if (a.current_mode != Mode::Motorcycle) ok = false;

  report(8, ok,
         std::string("5-agent, 2-period trace matches the hand-derived strategies and "
                     "modes exactly (") +
             (ok ? "yes" : "no") + ")");
}

}  // namespace

int main() {
  run_experiment_criteria();
  run_formula_oracles();
  run_network_criterion();
  run_traffic_criterion();
  run_determinism_criterion();
  run_hand_trace_criterion();

  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
