#include "commute/population.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace commute {

namespace {

// Residential neighborhood: one block of neighborhood_patches^2 patches.
struct Block {
  int x0, y0, size;
};

// All blocks that do not intersect the CBD, in row-major order. Contiguous
// runs of this ordering are handed to one income level each.
std::vector<Block> residential_blocks(const TrafficParams& t) {
  std::vector<Block> blocks;
  const int bs = t.neighborhood_patches;
  for (int by = 0; by < t.grid_height / bs; ++by) {
    for (int bx = 0; bx < t.grid_width / bs; ++bx) {
      Block b{bx * bs, by * bs, bs};
      bool touches_cbd = false;
      for (int y = b.y0; y < b.y0 + bs && !touches_cbd; ++y)
        for (int x = b.x0; x < b.x0 + bs && !touches_cbd; ++x)
          touches_cbd = in_cbd(t, Patch{x, y});
      if (!touches_cbd) blocks.push_back(b);
    }
  }
  return blocks;
}

}  // namespace

bool in_cbd(const TrafficParams& t, Patch p) {
  const int cx = t.grid_width / 2;
  const int cy = t.grid_height / 2;
  return std::abs(p.x - cx) <= t.cbd_extent && std::abs(p.y - cy) <= t.cbd_extent;
}

std::vector<int> apportion(int n, std::span<const double> shares) {
  const size_t k = shares.size();
  std::vector<int> counts(k, 0);
  std::vector<double> remainders(k, 0.0);
  int assigned = 0;
  for (size_t i = 0; i < k; ++i) {
    double exact = n * shares[i];
    counts[i] = static_cast<int>(std::floor(exact));
    remainders[i] = exact - counts[i];
    assigned += counts[i];
  }
  std::vector<size_t> order(k);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return remainders[a] > remainders[b]; });
  for (int i = 0; i < n - assigned; ++i) counts[order[i % k]] += 1;
  return counts;
}

void assign_thresholds(Agent& agent, const PerMode<ThresholdParams>& params, RngStream& rng) {
  for (Mode m : kAllModes) {
    const ThresholdParams& t = params[mode_index(m)];
    agent.satisfaction_threshold[mode_index(m)] =
        std::clamp(rng.normal(t.satisfaction_mean, t.satisfaction_sd), 0.0, 1.0);
    agent.uncertainty_threshold[mode_index(m)] =
        std::clamp(rng.normal(t.uncertainty_mean, t.uncertainty_sd), 0.0, 1.0);
  }
}

std::vector<Agent> synthesize_population(const ScenarioConfig& cfg, RngStream& rng) {
  const int n = cfg.n_agents;
  const TrafficParams& traffic = cfg.traffic;

  std::vector<Block> blocks = residential_blocks(traffic);
  if (blocks.empty()) throw std::runtime_error("population: no residential blocks outside CBD");

  const std::vector<int> level_counts = apportion(n, cfg.income_level_shares);

  // Blocks per level, proportional to the level share; every level with
  // agents needs at least one block.
  std::vector<int> level_blocks =
      apportion(static_cast<int>(blocks.size()), cfg.income_level_shares);
  for (int level = 0; level < kNumIncomeLevels; ++level) {
    if (level_counts[level] > 0 && level_blocks[level] == 0) {
      int donor = static_cast<int>(std::max_element(level_blocks.begin(), level_blocks.end()) -
                                   level_blocks.begin());
      level_blocks[donor] -= 1;
      level_blocks[level] += 1;
    }
  }
  std::array<int, kNumIncomeLevels + 1> block_start{};
  for (int level = 0; level < kNumIncomeLevels; ++level)
    block_start[level + 1] = block_start[level] + level_blocks[level];

  // Initial modes apportioned over the whole population, then shuffled so
  // mode assignment is independent of income level and id.
  const std::vector<int> mode_counts = apportion(n, cfg.initial_mode_shares);
  std::vector<Mode> initial_modes;
  initial_modes.reserve(n);
  for (Mode m : kAllModes)
    initial_modes.insert(initial_modes.end(), mode_counts[mode_index(m)], m);
  rng.shuffle(initial_modes);

  std::vector<Agent> agents;
  agents.reserve(n);
  int id = 0;
  for (int level = 0; level < kNumIncomeLevels; ++level) {
    for (int i = 0; i < level_counts[level]; ++i, ++id) {
      Agent a;
      a.id = id;
      a.income_level = level + 1;
      a.sex = rng.bernoulli(0.5) ? Sex::Male : Sex::Female;
      a.age = 18 + static_cast<int>(rng.uniform_int(48));  // 18..65

      const Block& b =
          blocks[block_start[level] +
                 rng.uniform_int(static_cast<uint32_t>(level_blocks[level]))];
      a.home = Patch{b.x0 + static_cast<int>(rng.uniform_int(b.size)),
                     b.y0 + static_cast<int>(rng.uniform_int(b.size))};

      const int cx = traffic.grid_width / 2;
      const int cy = traffic.grid_height / 2;
      const int span = 2 * traffic.cbd_extent + 1;
      a.workplace = Patch{cx - traffic.cbd_extent + static_cast<int>(rng.uniform_int(span)),
                          cy - traffic.cbd_extent + static_cast<int>(rng.uniform_int(span))};

      a.current_mode = initial_modes[id];
      a.owned_vehicles[mode_index(a.current_mode)] = true;  // no acquisition charge at t=0
      assign_thresholds(a, cfg.threshold_params, rng);
      agents.push_back(a);
    }
  }
  return agents;
}

void write_population_csv(const std::filesystem::path& path, std::span<const Agent> agents) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("population: cannot write " + path.string());
  out << "id,sex,age,income_level,home_x,home_y,initial_mode\n";
  for (const Agent& a : agents) {
    out << a.id << ',' << (a.sex == Sex::Male ? 'M' : 'F') << ',' << a.age << ','
        << a.income_level << ',' << a.home.x << ',' << a.home.y << ','
        << mode_name(a.current_mode) << '\n';
  }
}

}  // namespace commute
