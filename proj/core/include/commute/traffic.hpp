#pragma once

#include <span>
#include <vector>

#include "commute/config.hpp"
#include "commute/population.hpp"
#include "commute/rng.hpp"

namespace commute {

// Patch grid holding car-equivalent occupancy of en-route travelers.
class WorldGrid {
 public:
  WorldGrid() = default;
  WorldGrid(int width, int height)
      : width_(width), height_(height), cells_(static_cast<size_t>(width) * height, 0.0) {}

  int width() const { return width_; }
  int height() const { return height_; }
  double occupancy(Patch p) const { return cells_[index(p)]; }
  void add(Patch p, double equivalents) { cells_[index(p)] += equivalents; }
  void remove(Patch p, double equivalents) { cells_[index(p)] -= equivalents; }
  void clear() { std::fill(cells_.begin(), cells_.end(), 0.0); }

  double total() const;  // for mass-conservation checks

 private:
  size_t index(Patch p) const { return static_cast<size_t>(p.y) * width_ + p.x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> cells_;
};

// Sum of occupancy over the (2*radius+1)^2 neighborhood, truncated at edges.
// Includes whatever occupies the center patch itself.
double local_density(const WorldGrid& grid, Patch patch, int radius);

// v = free_flow * max(floor, 1 - k*ln(1 + density/rho0)). Monotone
// non-increasing in density, equal to free_flow at density 0.
double effective_speed(double free_flow, double density, double k, double rho0, double floor);

struct TripLog {
  double km_traveled = 0.0;
  double travel_time_min = 0.0;
  double co2_g = 0.0;
  bool arrived = false;
  bool had_accident = false;
};

// Car-equivalents one rider contributes to road occupancy, and the grams of
// CO2 attributed to one rider per km. Both split a shared vehicle among its
// passengers (a bus among its riders).
double per_rider_equivalent(const ModeParams& params);
double per_rider_emission_g_per_km(const ModeParams& params);

// Patch reached after `progress_km` along the Manhattan path home->work
// (x leg first, then y).
Patch path_patch_at(Patch home, Patch work, double progress_km, double patch_km);

// Per-period travel bookkeeping for one replication.
struct TravelState {
  std::vector<TripLog> logs;
  std::vector<double> progress_km;
  std::vector<double> path_km;
  std::vector<Patch> position;
  int en_route = 0;
};

// Places every agent at home and loads the grid. Agents whose home patch is
// already the workplace arrive immediately with an empty log.
TravelState begin_period(std::span<const Agent> agents, WorldGrid& grid,
                         const TrafficParams& traffic, const PerMode<ModeParams>& params);

// One 2-minute step: every non-arrived agent (in id order) reads its local
// density, derives its congested speed, advances along its path, and updates
// grid occupancy. Movement is deterministic; no RNG draws.
void tick(TravelState& state, std::span<const Agent> agents, WorldGrid& grid,
          const TrafficParams& traffic, const PerMode<ModeParams>& params);

// Closes the period: CO2 is attributed as one multiplication per agent,
// co2_g = per-rider factor * km_traveled.
void finish_period(TravelState& state, std::span<const Agent> agents,
                   const PerMode<ModeParams>& params);

// Independent Bernoulli(accident_probability of the agent's mode), once per
// decision period. Consumes exactly one draw per agent.
std::vector<bool> sample_accidents(std::span<const Agent> agents,
                                   const PerMode<ModeParams>& params, RngStream& rng);

}  // namespace commute
