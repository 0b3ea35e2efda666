// commute-abm: runs the commuter mode-choice simulation for a base and/or
// fare-free-transit scenario and writes aggregated indicator CSVs.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commute/engine.hpp"
#include "commute/network.hpp"
#include "commute/plot.hpp"

namespace fs = std::filesystem;

namespace {

struct CliArgs {
  std::string config_path;
  std::string scenario = "both";
  std::optional<uint64_t> seed;
  std::optional<int> replications;
  std::string out_dir = "results";
  bool emit_plots = false;
  bool trace = false;
  bool dump_population = false;
  int threads = 0;
};

commute::ScenarioConfig scenario_config(const commute::ScenarioConfig& base, bool fare_free) {
  commute::ScenarioConfig cfg = base;
  cfg.policy.fare_free_transit = fare_free;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CliArgs args;

  CLI::App app{"Agent-based commuter mode-choice simulator"};
  app.add_option("--config", args.config_path,
                 "Config file (JSON); falls back to $COMMUTE_ABM_CONFIG, then defaults");
  app.add_option("--scenario", args.scenario, "base, fare-free, or both")
      ->check(CLI::IsMember({"base", "fare-free", "both"}));
  app.add_option("--seed", args.seed, "Override the master RNG seed");
  app.add_option("--replications", args.replications, "Override the replication count")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", args.out_dir, "Output directory");
  app.add_flag("--emit-plots", args.emit_plots, "Also write SVG plots");
  app.add_flag("--trace", args.trace, "Write per-tick trace CSV for replication 0 (slow)");
  app.add_flag("--dump-population", args.dump_population,
               "Write population and network edge CSVs for replication 0");
  app.add_option("--threads", args.threads, "Worker threads (default: machine cores)")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    commute::ScenarioConfig cfg;
    if (args.config_path.empty()) {
      if (const char* env = std::getenv("COMMUTE_ABM_CONFIG")) args.config_path = env;
    }
    cfg = args.config_path.empty() ? commute::default_config()
                                   : commute::load_config(args.config_path);
    if (args.seed) cfg.rng_seed = *args.seed;
    if (args.replications) cfg.replications = *args.replications;
    commute::validate(cfg);

    const fs::path out_dir(args.out_dir);
    fs::create_directories(out_dir);

    std::ofstream trace_file;
    commute::TickTrace trace_fn;
    if (args.trace) {
      trace_file.open(out_dir / "trace.csv");
      trace_file << "period,tick,agent,x,y,speed\n";
      trace_fn = [&trace_file](int period, int tick, int agent, int x, int y, double speed) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", speed);
        trace_file << period << ',' << tick << ',' << agent << ',' << x << ',' << y << ','
                   << buf << '\n';
      };
    }

    commute::ExperimentOptions options;
    options.threads = args.threads;
    if (args.trace) options.trace = &trace_fn;
    if (args.dump_population) {
      options.on_first_replication_init = [&out_dir](const commute::RunState& state) {
        commute::write_population_csv(out_dir / "population.csv", state.agents);
        commute::write_edge_list_csv(out_dir / "network_edges.csv", state.network);
      };
    }

    std::vector<commute::IndicatorSeries> series;
    std::optional<commute::ComparisonReport> comparison;

    if (args.scenario == "base" || args.scenario == "both") {
      series.push_back(
          commute::run_experiment(scenario_config(cfg, false), "base", options));
      options.on_first_replication_init = nullptr;  // dump once
      options.trace = nullptr;
    }
    if (args.scenario == "fare-free" || args.scenario == "both") {
      series.push_back(
          commute::run_experiment(scenario_config(cfg, true), "fare-free", options));
    }
    if (args.scenario == "both") comparison = commute::compare_scenarios(series[0], series[1]);

    commute::write_results(series, comparison, out_dir, args.emit_plots);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "commute-abm: " << e.what() << '\n';
    return 1;
  }
}
