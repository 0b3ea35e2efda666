#include "commute/traffic.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace commute {

namespace {
constexpr double kTickMinutes = 2.0;  // one tick = two minutes of peak hour
}

double WorldGrid::total() const {
  double sum = 0.0;
  for (double c : cells_) sum += c;
  return sum;
}

double local_density(const WorldGrid& grid, Patch patch, int radius) {
  const int x0 = std::max(0, patch.x - radius);
  const int x1 = std::min(grid.width() - 1, patch.x + radius);
  const int y0 = std::max(0, patch.y - radius);
  const int y1 = std::min(grid.height() - 1, patch.y + radius);
  double sum = 0.0;
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) sum += grid.occupancy(Patch{x, y});
  return sum;
}

double effective_speed(double free_flow, double density, double k, double rho0, double floor) {
  assert(density >= -1e-12);
  assert(floor > 0.0 && floor < 1.0);
  double factor = 1.0 - k * std::log(1.0 + std::max(0.0, density) / rho0);
  return free_flow * std::max(floor, factor);
}

double per_rider_equivalent(const ModeParams& p) {
  return p.car_equivalent / p.passengers_per_vehicle;
}

double per_rider_emission_g_per_km(const ModeParams& p) {
  return p.emission_factor / p.passengers_per_vehicle;
}

Patch path_patch_at(Patch home, Patch work, double progress_km, double patch_km) {
  const int dx = work.x - home.x;
  const int dy = work.y - home.y;
  const int total = std::abs(dx) + std::abs(dy);
  int steps = static_cast<int>(std::floor(progress_km / patch_km));
  steps = std::clamp(steps, 0, total);

  const int sx = std::min(steps, std::abs(dx));  // x leg first
  const int sy = steps - sx;
  return Patch{home.x + (dx > 0 ? sx : -sx), home.y + (dy > 0 ? sy : -sy)};
}

TravelState begin_period(std::span<const Agent> agents, WorldGrid& grid,
                         const TrafficParams& traffic, const PerMode<ModeParams>& params) {
  TravelState state;
  const size_t n = agents.size();
  state.logs.assign(n, TripLog{});
  state.progress_km.assign(n, 0.0);
  state.path_km.assign(n, 0.0);
  state.position.assign(n, Patch{});
  grid.clear();

  for (size_t i = 0; i < n; ++i) {
    const Agent& a = agents[i];
    const int patches = std::abs(a.workplace.x - a.home.x) + std::abs(a.workplace.y - a.home.y);
    state.path_km[i] = patches * traffic.patch_km;
    state.position[i] = a.home;
    if (patches == 0) {
      state.logs[i].arrived = true;
    } else {
      grid.add(a.home, per_rider_equivalent(params[mode_index(a.current_mode)]));
      state.en_route += 1;
    }
  }
  return state;
}

void tick(TravelState& state, std::span<const Agent> agents, WorldGrid& grid,
          const TrafficParams& traffic, const PerMode<ModeParams>& params) {
  for (size_t i = 0; i < agents.size(); ++i) {
    TripLog& log = state.logs[i];
    if (log.arrived) continue;

    const Agent& a = agents[i];
    const ModeParams& mp = params[mode_index(a.current_mode)];
    const double own = per_rider_equivalent(mp);

    // Congestion comes from the other vehicles around; own contribution is
    // excluded so a lone traveler moves at free-flow speed.
    double density = local_density(grid, state.position[i], traffic.density_radius) - own;
    density = std::max(0.0, density);
    const double v = effective_speed(mp.free_flow_speed, density,
                                     traffic.decay_k * mp.congestion_exposure,
                                     traffic.decay_rho0, traffic.speed_floor);

    const double step_km = v * kTickMinutes / 60.0;
    const double remaining = state.path_km[i] - state.progress_km[i];

    if (step_km >= remaining) {
      // Arrives this tick; charge only the time actually needed.
      const double dt_min = v > 0.0 ? remaining / v * 60.0 : kTickMinutes;
      log.km_traveled += remaining;
      log.travel_time_min += dt_min;
      log.arrived = true;
      state.progress_km[i] = state.path_km[i];
      grid.remove(state.position[i], own);
      state.position[i] = a.workplace;
      state.en_route -= 1;
    } else {
      log.km_traveled += step_km;
      log.travel_time_min += kTickMinutes;
      state.progress_km[i] += step_km;
      Patch next = path_patch_at(a.home, a.workplace, state.progress_km[i], traffic.patch_km);
      if (!(next == state.position[i])) {
        grid.remove(state.position[i], own);
        grid.add(next, own);
        state.position[i] = next;
      }
    }
  }
}

void finish_period(TravelState& state, std::span<const Agent> agents,
                   const PerMode<ModeParams>& params) {
  for (size_t i = 0; i < agents.size(); ++i) {
    const ModeParams& mp = params[mode_index(agents[i].current_mode)];
    state.logs[i].co2_g = per_rider_emission_g_per_km(mp) * state.logs[i].km_traveled;
  }
}

std::vector<bool> sample_accidents(std::span<const Agent> agents,
                                   const PerMode<ModeParams>& params, RngStream& rng) {
  std::vector<bool> flags(agents.size(), false);
  for (size_t i = 0; i < agents.size(); ++i) {
    const double p = params[mode_index(agents[i].current_mode)].accident_probability;
    flags[i] = rng.bernoulli(p);
  }
  return flags;
}

}  // namespace commute
