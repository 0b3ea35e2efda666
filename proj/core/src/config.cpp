#include "commute/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace commute {

using nlohmann::json;

namespace {

constexpr double kShareTolerance = 1e-9;

PerIncomeLevel<PerAttribute<double>> default_weights() {
  // Level 1 weights costs highest, level 3 weights comfort and personal
  // security highest; level 2 sits in between. Order follows Attribute:
  // acquisition, operating, road_safety, personal_security, comfort,
  // commute_time, pollution.
  return {{
      {0.26, 0.24, 0.09, 0.09, 0.07, 0.17, 0.08},
      {0.18, 0.18, 0.12, 0.14, 0.13, 0.18, 0.07},
      {0.07, 0.07, 0.13, 0.23, 0.23, 0.20, 0.07},
  }};
}

PerMode<ModeParams> default_mode_params() {
  ModeParams moto;
  moto.acquisition_cost = 6000.0;
  moto.operating_cost_per_km = 0.13;
  moto.free_flow_speed = 20.0;
  moto.emission_factor = 126.0;
  moto.fuel_efficiency = 120.0;
  moto.accident_probability = 0.2;
  moto.comfort_score = 0.60;
  moto.personal_security_score = 0.45;
  moto.road_safety_score = 0.45;
  moto.car_equivalent = 0.5;
  moto.passengers_per_vehicle = 1.0;
  moto.congestion_exposure = 0.5;

  ModeParams car;
  car.acquisition_cost = 60000.0;
  car.operating_cost_per_km = 0.32;
  car.free_flow_speed = 18.0;
  car.emission_factor = 204.0;
  car.fuel_efficiency = 50.0;
  car.accident_probability = 0.02;
  car.comfort_score = 0.90;
  car.personal_security_score = 0.85;
  car.road_safety_score = 0.80;
  car.car_equivalent = 1.0;
  car.passengers_per_vehicle = 1.0;
  car.congestion_exposure = 1.0;

  ModeParams transit;
  transit.acquisition_cost = 0.0;
  transit.operating_cost_per_km = 2.9;  // flat fare per trip
  transit.free_flow_speed = 16.0;
  transit.emission_factor = 900.0;  // per bus-km; divided among riders
  transit.fuel_efficiency = 10.0;
  transit.accident_probability = 0.005;
  transit.comfort_score = 0.30;
  transit.personal_security_score = 0.30;
  transit.road_safety_score = 0.90;
  transit.car_equivalent = 3.0;
  transit.passengers_per_vehicle = 40.0;
  transit.congestion_exposure = 0.0;  // dedicated BRT lanes

  return {moto, car, transit};
}

PerAttribute<AnchorRange> default_anchors() {
  PerAttribute<AnchorRange> anchors;
  anchors[attribute_index(Attribute::AcquisitionCost)] = {0.0, 20000.0};  // amortized/yr
  anchors[attribute_index(Attribute::OperatingCost)] = {0.0, 5.0};        // per trip
  anchors[attribute_index(Attribute::CommuteTime)] = {0.0, 60.0};         // minutes
  anchors[attribute_index(Attribute::Pollution)] = {0.0, 2000.0};         // g CO2 per trip
  // Score attributes pass through.
  anchors[attribute_index(Attribute::RoadSafety)] = {1.0, 0.0};
  anchors[attribute_index(Attribute::PersonalSecurity)] = {1.0, 0.0};
  anchors[attribute_index(Attribute::Comfort)] = {1.0, 0.0};
  return anchors;
}

void check(bool ok, const std::string& message) {
  if (!ok) throw ConfigError("config: " + message);
}

void check_share_sum(const double* begin, const double* end, const std::string& name) {
  double sum = 0.0;
  for (const double* p = begin; p != end; ++p) {
    check(*p >= 0.0, name + " entries must be non-negative");
    sum += *p;
  }
  check(std::abs(sum - 1.0) <= kShareTolerance, name + " must sum to 1");
}

void check_unit(double v, const std::string& name) {
  check(v >= 0.0 && v <= 1.0, name + " must be in [0,1]");
}

// ---- JSON helpers ----------------------------------------------------------

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool found = false;
    for (const char* k : known) {
      if (it.key() == k) {
        found = true;
        break;
      }
    }
    check(found, "unknown key \"" + it.key() + "\" in " + where);
  }
}

template <typename T>
void get_if_present(const json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end()) out = it->get<T>();
}

void parse_mode_map(const json& obj, const std::string& where, PerMode<double>& out) {
  reject_unknown_keys(obj, {"motorcycle", "car", "transit"}, where);
  for (Mode m : kAllModes) {
    get_if_present(obj, mode_name(m).data(), out[mode_index(m)]);
  }
}

void parse_level_map(const json& obj, const std::string& where, PerIncomeLevel<double>& out) {
  reject_unknown_keys(obj, {"1", "2", "3"}, where);
  for (int level = 1; level <= kNumIncomeLevels; ++level) {
    get_if_present(obj, std::to_string(level).c_str(), out[level - 1]);
  }
}

void parse_mode_params(const json& obj, const std::string& where, ModeParams& out) {
  reject_unknown_keys(obj,
                      {"acquisition_cost", "operating_cost_per_km", "free_flow_speed",
                       "emission_factor", "fuel_efficiency", "accident_probability",
                       "comfort_score", "personal_security_score", "road_safety_score",
                       "car_equivalent", "passengers_per_vehicle", "congestion_exposure"},
                      where);
  get_if_present(obj, "acquisition_cost", out.acquisition_cost);
  get_if_present(obj, "operating_cost_per_km", out.operating_cost_per_km);
  get_if_present(obj, "free_flow_speed", out.free_flow_speed);
  get_if_present(obj, "emission_factor", out.emission_factor);
  get_if_present(obj, "fuel_efficiency", out.fuel_efficiency);
  get_if_present(obj, "accident_probability", out.accident_probability);
  get_if_present(obj, "comfort_score", out.comfort_score);
  get_if_present(obj, "personal_security_score", out.personal_security_score);
  get_if_present(obj, "road_safety_score", out.road_safety_score);
  get_if_present(obj, "car_equivalent", out.car_equivalent);
  get_if_present(obj, "passengers_per_vehicle", out.passengers_per_vehicle);
  get_if_present(obj, "congestion_exposure", out.congestion_exposure);
}

void parse_anchor(const json& obj, const std::string& where, AnchorRange& out) {
  reject_unknown_keys(obj, {"best", "worst"}, where);
  get_if_present(obj, "best", out.best);
  get_if_present(obj, "worst", out.worst);
}

json mode_map_json(const PerMode<double>& values) {
  json obj;
  for (Mode m : kAllModes) obj[mode_name(m)] = values[mode_index(m)];
  return obj;
}

json level_map_json(const PerIncomeLevel<double>& values) {
  json obj;
  for (int level = 1; level <= kNumIncomeLevels; ++level)
    obj[std::to_string(level)] = values[level - 1];
  return obj;
}

}  // namespace

ScenarioConfig default_config() {
  ScenarioConfig cfg;
  cfg.attribute_weights = default_weights();
  cfg.mode_params = default_mode_params();
  cfg.attribute_anchors = default_anchors();
  cfg.threshold_params = {ThresholdParams{}, ThresholdParams{}, ThresholdParams{}};
  return cfg;
}

void validate(const ScenarioConfig& cfg) {
  check_share_sum(cfg.initial_mode_shares.data(),
                  cfg.initial_mode_shares.data() + kNumModes, "initial_mode_shares");
  check_share_sum(cfg.income_level_shares.data(),
                  cfg.income_level_shares.data() + kNumIncomeLevels, "income_level_shares");
  check_unit(cfg.alpha, "alpha");
  check(cfg.population_scale > 0.0, "population_scale must be positive");
  check(cfg.n_agents > 0, "n_agents must be positive");
  check(cfg.horizon_years > 0, "horizon_years must be positive");
  check(cfg.ticks_per_period > 0, "ticks_per_period must be positive");
  check(cfg.replications > 0, "replications must be positive");

  for (int level = 0; level < kNumIncomeLevels; ++level) {
    const auto& w = cfg.attribute_weights[level];
    check_share_sum(w.data(), w.data() + kNumAttributes,
                    "attribute_weights level " + std::to_string(level + 1));
  }

  for (Mode m : kAllModes) {
    const std::string name(mode_name(m));
    const ModeParams& p = cfg.mode_params[mode_index(m)];
    check(p.acquisition_cost >= 0.0, name + " acquisition_cost must be non-negative");
    check(p.operating_cost_per_km >= 0.0, name + " operating_cost_per_km must be non-negative");
    check(p.free_flow_speed > 0.0, name + " free_flow_speed must be positive");
    check(p.emission_factor >= 0.0, name + " emission_factor must be non-negative");
    check(p.fuel_efficiency >= 0.0, name + " fuel_efficiency must be non-negative");
    check_unit(p.accident_probability, name + " accident_probability");
    check_unit(p.comfort_score, name + " comfort_score");
    check_unit(p.personal_security_score, name + " personal_security_score");
    check_unit(p.road_safety_score, name + " road_safety_score");
    check(p.car_equivalent >= 0.0, name + " car_equivalent must be non-negative");
    check(p.passengers_per_vehicle >= 1.0, name + " passengers_per_vehicle must be >= 1");
    check_unit(p.congestion_exposure, name + " congestion_exposure");

    const ThresholdParams& t = cfg.threshold_params[mode_index(m)];
    check_unit(t.satisfaction_mean, name + " satisfaction_mean");
    check_unit(t.satisfaction_sd, name + " satisfaction_sd");
    check_unit(t.uncertainty_mean, name + " uncertainty_mean");
    check_unit(t.uncertainty_sd, name + " uncertainty_sd");
  }

  check(cfg.network_params.m0 >= 1, "network m0 must be >= 1");
  check(cfg.network_params.m >= 1, "network m must be >= 1");
  check(cfg.network_params.m <= cfg.network_params.m0, "network m must be <= m0");
  check(cfg.network_params.homophily_multiplier >= 1.0,
        "network homophily_multiplier must be >= 1");
  check(cfg.n_agents >= cfg.network_params.m0 + 1, "n_agents must be >= network m0 + 1");

  check(cfg.policy.activation_period >= 0, "policy activation_period must be >= 0");
  check(cfg.policy.activation_period < cfg.horizon_years,
        "policy activation_period must be < horizon_years");

  const TrafficParams& t = cfg.traffic;
  check(t.grid_width > 0 && t.grid_height > 0, "grid dimensions must be positive");
  check(t.patch_km > 0.0, "patch_km must be positive");
  check(t.cbd_extent >= 0, "cbd_extent must be >= 0");
  check(2 * t.cbd_extent + 1 <= t.grid_width && 2 * t.cbd_extent + 1 <= t.grid_height,
        "cbd_extent must fit inside the grid");
  check(t.neighborhood_patches > 0, "neighborhood_patches must be positive");
  check(t.grid_width % t.neighborhood_patches == 0 &&
            t.grid_height % t.neighborhood_patches == 0,
        "neighborhood_patches must divide both grid dimensions");
  check(t.decay_k >= 0.0, "decay_k must be non-negative");
  check(t.decay_rho0 > 0.0, "decay_rho0 must be positive");
  check(t.speed_floor > 0.0 && t.speed_floor < 1.0, "speed_floor must be in (0,1)");
  check(t.density_radius >= 0, "density_radius must be >= 0");

  for (double b : cfg.economy.income_budgets)
    check(b >= 0.0, "income_budgets must be non-negative");
  check(cfg.economy.affordability_multiplier > 0.0,
        "affordability_multiplier must be positive");
  check(cfg.economy.vehicle_lifetime_years > 0.0,
        "vehicle_lifetime_years must be positive");

  for (Attribute a : kAllAttributes) {
    const AnchorRange& r = cfg.attribute_anchors[attribute_index(a)];
    check(r.best != r.worst,
          std::string("anchor for ") + std::string(attribute_name(a)) +
              " must have best != worst");
  }
}

ScenarioConfig parse_config(const std::string& text) {
  // An all-whitespace file means "all defaults".
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    ScenarioConfig cfg = default_config();
    validate(cfg);
    return cfg;
  }

  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  check(root.is_object(), "top level must be a JSON object");
  reject_unknown_keys(
      root, {"simulation", "population", "modes", "network", "weights", "thresholds", "policy"},
      "top level");

  ScenarioConfig cfg = default_config();

  if (auto it = root.find("simulation"); it != root.end()) {
    const json& sim = *it;
    reject_unknown_keys(sim,
                        {"population_scale", "n_agents", "horizon_years", "ticks_per_period",
                         "replications", "rng_seed", "alpha", "traffic", "economy",
                         "attribute_anchors"},
                        "simulation");
    get_if_present(sim, "population_scale", cfg.population_scale);
    get_if_present(sim, "n_agents", cfg.n_agents);
    get_if_present(sim, "horizon_years", cfg.horizon_years);
    get_if_present(sim, "ticks_per_period", cfg.ticks_per_period);
    get_if_present(sim, "replications", cfg.replications);
    get_if_present(sim, "rng_seed", cfg.rng_seed);
    get_if_present(sim, "alpha", cfg.alpha);
    if (auto jt = sim.find("traffic"); jt != sim.end()) {
      reject_unknown_keys(*jt,
                          {"grid_width", "grid_height", "patch_km", "cbd_extent",
                           "neighborhood_patches", "decay_k", "decay_rho0", "speed_floor",
                           "density_radius"},
                          "simulation.traffic");
      get_if_present(*jt, "grid_width", cfg.traffic.grid_width);
      get_if_present(*jt, "grid_height", cfg.traffic.grid_height);
      get_if_present(*jt, "patch_km", cfg.traffic.patch_km);
      get_if_present(*jt, "cbd_extent", cfg.traffic.cbd_extent);
      get_if_present(*jt, "neighborhood_patches", cfg.traffic.neighborhood_patches);
      get_if_present(*jt, "decay_k", cfg.traffic.decay_k);
      get_if_present(*jt, "decay_rho0", cfg.traffic.decay_rho0);
      get_if_present(*jt, "speed_floor", cfg.traffic.speed_floor);
      get_if_present(*jt, "density_radius", cfg.traffic.density_radius);
    }
    if (auto je = sim.find("economy"); je != sim.end()) {
      reject_unknown_keys(
          *je, {"income_budgets", "affordability_multiplier", "vehicle_lifetime_years"},
          "simulation.economy");
      if (auto jb = je->find("income_budgets"); jb != je->end())
        parse_level_map(*jb, "simulation.economy.income_budgets", cfg.economy.income_budgets);
      get_if_present(*je, "affordability_multiplier", cfg.economy.affordability_multiplier);
      get_if_present(*je, "vehicle_lifetime_years", cfg.economy.vehicle_lifetime_years);
    }
    if (auto ja = sim.find("attribute_anchors"); ja != sim.end()) {
      reject_unknown_keys(*ja,
                          {"acquisition_cost", "operating_cost", "road_safety",
                           "personal_security", "comfort", "commute_time", "pollution"},
                          "simulation.attribute_anchors");
      for (Attribute a : kAllAttributes) {
        if (auto jr = ja->find(attribute_name(a)); jr != ja->end())
          parse_anchor(*jr, std::string("anchor ") + std::string(attribute_name(a)),
                       cfg.attribute_anchors[attribute_index(a)]);
      }
    }
  }

  if (auto it = root.find("population"); it != root.end()) {
    reject_unknown_keys(*it, {"initial_mode_shares", "income_level_shares"}, "population");
    if (auto jm = it->find("initial_mode_shares"); jm != it->end())
      parse_mode_map(*jm, "population.initial_mode_shares", cfg.initial_mode_shares);
    if (auto jl = it->find("income_level_shares"); jl != it->end())
      parse_level_map(*jl, "population.income_level_shares", cfg.income_level_shares);
  }

  if (auto it = root.find("modes"); it != root.end()) {
    reject_unknown_keys(*it, {"motorcycle", "car", "transit"}, "modes");
    for (Mode m : kAllModes) {
      if (auto jm = it->find(mode_name(m)); jm != it->end())
        parse_mode_params(*jm, std::string("modes.") + std::string(mode_name(m)),
                          cfg.mode_params[mode_index(m)]);
    }
  }

  if (auto it = root.find("network"); it != root.end()) {
    reject_unknown_keys(*it, {"m0", "m", "homophily_multiplier"}, "network");
    get_if_present(*it, "m0", cfg.network_params.m0);
    get_if_present(*it, "m", cfg.network_params.m);
    get_if_present(*it, "homophily_multiplier", cfg.network_params.homophily_multiplier);
  }

  if (auto it = root.find("weights"); it != root.end()) {
    reject_unknown_keys(*it, {"1", "2", "3"}, "weights");
    for (int level = 1; level <= kNumIncomeLevels; ++level) {
      auto jl = it->find(std::to_string(level));
      if (jl == it->end()) continue;
      reject_unknown_keys(*jl,
                          {"acquisition_cost", "operating_cost", "road_safety",
                           "personal_security", "comfort", "commute_time", "pollution"},
                          "weights." + std::to_string(level));
      for (Attribute a : kAllAttributes) {
        get_if_present(*jl, attribute_name(a).data(),
                       cfg.attribute_weights[level - 1][attribute_index(a)]);
      }
    }
  }

  if (auto it = root.find("thresholds"); it != root.end()) {
    reject_unknown_keys(*it, {"motorcycle", "car", "transit"}, "thresholds");
    for (Mode m : kAllModes) {
      auto jm = it->find(mode_name(m));
      if (jm == it->end()) continue;
      reject_unknown_keys(*jm,
                          {"satisfaction_mean", "satisfaction_sd", "uncertainty_mean",
                           "uncertainty_sd"},
                          std::string("thresholds.") + std::string(mode_name(m)));
      ThresholdParams& t = cfg.threshold_params[mode_index(m)];
      get_if_present(*jm, "satisfaction_mean", t.satisfaction_mean);
      get_if_present(*jm, "satisfaction_sd", t.satisfaction_sd);
      get_if_present(*jm, "uncertainty_mean", t.uncertainty_mean);
      get_if_present(*jm, "uncertainty_sd", t.uncertainty_sd);
    }
  }

  if (auto it = root.find("policy"); it != root.end()) {
    reject_unknown_keys(*it, {"fare_free_transit", "activation_period"}, "policy");
    get_if_present(*it, "fare_free_transit", cfg.policy.fare_free_transit);
    get_if_present(*it, "activation_period", cfg.policy.activation_period);
  }

  validate(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string write_config(const ScenarioConfig& cfg) {
  json root;

  json sim;
  sim["population_scale"] = cfg.population_scale;
  sim["n_agents"] = cfg.n_agents;
  sim["horizon_years"] = cfg.horizon_years;
  sim["ticks_per_period"] = cfg.ticks_per_period;
  sim["replications"] = cfg.replications;
  sim["rng_seed"] = cfg.rng_seed;
  sim["alpha"] = cfg.alpha;
  sim["traffic"] = {{"grid_width", cfg.traffic.grid_width},
                    {"grid_height", cfg.traffic.grid_height},
                    {"patch_km", cfg.traffic.patch_km},
                    {"cbd_extent", cfg.traffic.cbd_extent},
                    {"neighborhood_patches", cfg.traffic.neighborhood_patches},
                    {"decay_k", cfg.traffic.decay_k},
                    {"decay_rho0", cfg.traffic.decay_rho0},
                    {"speed_floor", cfg.traffic.speed_floor},
                    {"density_radius", cfg.traffic.density_radius}};
  sim["economy"] = {{"income_budgets", level_map_json(cfg.economy.income_budgets)},
                    {"affordability_multiplier", cfg.economy.affordability_multiplier},
                    {"vehicle_lifetime_years", cfg.economy.vehicle_lifetime_years}};
  json anchors;
  for (Attribute a : kAllAttributes) {
    const AnchorRange& r = cfg.attribute_anchors[attribute_index(a)];
    anchors[attribute_name(a)] = {{"best", r.best}, {"worst", r.worst}};
  }
  sim["attribute_anchors"] = anchors;
  root["simulation"] = sim;

  root["population"] = {{"initial_mode_shares", mode_map_json(cfg.initial_mode_shares)},
                        {"income_level_shares", level_map_json(cfg.income_level_shares)}};

  json modes;
  for (Mode m : kAllModes) {
    const ModeParams& p = cfg.mode_params[mode_index(m)];
    modes[mode_name(m)] = {{"acquisition_cost", p.acquisition_cost},
                           {"operating_cost_per_km", p.operating_cost_per_km},
                           {"free_flow_speed", p.free_flow_speed},
                           {"emission_factor", p.emission_factor},
                           {"fuel_efficiency", p.fuel_efficiency},
                           {"accident_probability", p.accident_probability},
                           {"comfort_score", p.comfort_score},
                           {"personal_security_score", p.personal_security_score},
                           {"road_safety_score", p.road_safety_score},
                           {"car_equivalent", p.car_equivalent},
                           {"passengers_per_vehicle", p.passengers_per_vehicle},
                           {"congestion_exposure", p.congestion_exposure}};
  }
  root["modes"] = modes;

  root["network"] = {{"m0", cfg.network_params.m0},
                     {"m", cfg.network_params.m},
                     {"homophily_multiplier", cfg.network_params.homophily_multiplier}};

  json weights;
  for (int level = 1; level <= kNumIncomeLevels; ++level) {
    json row;
    for (Attribute a : kAllAttributes)
      row[attribute_name(a)] = cfg.attribute_weights[level - 1][attribute_index(a)];
    weights[std::to_string(level)] = row;
  }
  root["weights"] = weights;

  json thresholds;
  for (Mode m : kAllModes) {
    const ThresholdParams& t = cfg.threshold_params[mode_index(m)];
    thresholds[mode_name(m)] = {{"satisfaction_mean", t.satisfaction_mean},
                                {"satisfaction_sd", t.satisfaction_sd},
                                {"uncertainty_mean", t.uncertainty_mean},
                                {"uncertainty_sd", t.uncertainty_sd}};
  }
  root["thresholds"] = thresholds;

  root["policy"] = {{"fare_free_transit", cfg.policy.fare_free_transit},
                    {"activation_period", cfg.policy.activation_period}};

  return root.dump(2) + "\n";
}

PerMode<ModeParams> apply_policy(const ScenarioConfig& cfg, int period) {
  PerMode<ModeParams> params = cfg.mode_params;
  if (cfg.policy.fare_free_transit && period >= cfg.policy.activation_period) {
    params[mode_index(Mode::Transit)].operating_cost_per_km = 0.0;
  }
  return params;
}

double normalize_attribute(const ScenarioConfig& cfg, Attribute attribute, double raw) {
  const AnchorRange& r = cfg.attribute_anchors[attribute_index(attribute)];
  double v = (r.worst - raw) / (r.worst - r.best);
  return std::clamp(v, 0.0, 1.0);
}

double amortized_acquisition_cost(const ScenarioConfig& cfg, const ModeParams& params) {
  return params.acquisition_cost / cfg.economy.vehicle_lifetime_years;
}

}  // namespace commute
