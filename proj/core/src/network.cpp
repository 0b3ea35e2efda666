#include "commute/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace commute {

SocialNetwork SocialNetwork::from_edges(int n, std::span<const std::pair<int, int>> edges) {
  SocialNetwork net(n);
  for (auto [a, b] : edges) net.add_edge(a, b);
  net.finalize();
  return net;
}

void SocialNetwork::add_edge(int a, int b) {
  adj_[a].push_back(b);
  adj_[b].push_back(a);
}

void SocialNetwork::finalize() {
  for (auto& list : adj_) std::sort(list.begin(), list.end());
}

long long SocialNetwork::edge_count() const {
  long long total = 0;
  for (const auto& list : adj_) total += static_cast<long long>(list.size());
  return total / 2;
}

bool SocialNetwork::is_simple_symmetric() const {
  for (int i = 0; i < size(); ++i) {
    const auto& list = adj_[i];
    for (size_t k = 0; k < list.size(); ++k) {
      int j = list[k];
      if (j == i) return false;                      // self-loop
      if (k > 0 && list[k] == list[k - 1]) return false;  // duplicate
      if (!std::binary_search(adj_[j].begin(), adj_[j].end(), i)) return false;
    }
  }
  return true;
}

bool SocialNetwork::is_connected() const {
  if (size() == 0) return true;
  std::vector<char> seen(size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj_[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++visited;
        stack.push_back(w);
      }
    }
  }
  return visited == size();
}

namespace {

// Weighted candidate sampler. Nodes are kept in one repeated list per income
// level, each node appearing degree(j) times, so a uniform pick inside a
// level is degree-proportional. Homophily then only reweights the level
// choice, keeping every draw O(1).
class AttachmentSampler {
 public:
  AttachmentSampler(std::span<const int> income_levels, double homophily)
      : levels_(income_levels), homophily_(homophily) {}

  void add_appearance(int node) {
    int lv = levels_[node] - 1;
    repeated_[lv].push_back(node);
  }

  // One weighted draw among all current appearances, seen from a new node of
  // income level `attacher_level` (1..3).
  int draw(int attacher_level, RngStream& rng) const {
    double total = 0.0;
    std::array<double, kNumIncomeLevels> w{};
    for (int lv = 0; lv < kNumIncomeLevels; ++lv) {
      w[lv] = static_cast<double>(repeated_[lv].size());
      if (lv == attacher_level - 1) w[lv] *= homophily_;
      total += w[lv];
    }
    double r = rng.next_double() * total;
    int lv = 0;
    for (; lv < kNumIncomeLevels - 1; ++lv) {
      if (r < w[lv]) break;
      r -= w[lv];
    }
    const auto& list = repeated_[lv];
    return list[rng.uniform_int(static_cast<uint32_t>(list.size()))];
  }

 private:
  std::span<const int> levels_;
  double homophily_;
  std::array<std::vector<int>, kNumIncomeLevels> repeated_;
};

}  // namespace

SocialNetwork build_network_from_levels(std::span<const int> income_levels,
                                        const NetworkParams& params, RngStream& rng) {
  const int n = static_cast<int>(income_levels.size());
  const int m0 = params.m0;
  const int m = params.m;
  if (n < m0) throw std::invalid_argument("network: need at least m0 agents");
  if (m > m0) throw std::invalid_argument("network: m must be <= m0");

  SocialNetwork net(n);
  AttachmentSampler sampler(income_levels, params.homophily_multiplier);

  // Seed clique.
  for (int i = 0; i < m0; ++i)
    for (int j = i + 1; j < m0; ++j) net.add_edge(i, j);
  for (int i = 0; i < m0; ++i)
    for (int d = 0; d < m0 - 1; ++d) sampler.add_appearance(i);

  std::vector<int> chosen;
  chosen.reserve(m);
  for (int i = m0; i < n; ++i) {
    chosen.clear();
    while (static_cast<int>(chosen.size()) < m) {
      int candidate = sampler.draw(income_levels[i], rng);
      if (std::find(chosen.begin(), chosen.end(), candidate) != chosen.end()) continue;
      chosen.push_back(candidate);
    }
    for (int j : chosen) {
      net.add_edge(i, j);
      sampler.add_appearance(i);
      sampler.add_appearance(j);
    }
  }
  net.finalize();
  return net;
}

SocialNetwork build_network(std::span<const Agent> agents, const NetworkParams& params,
                            RngStream& rng) {
  std::vector<int> levels(agents.size());
  for (size_t i = 0; i < agents.size(); ++i) levels[i] = agents[i].income_level;
  return build_network_from_levels(levels, params, rng);
}

double peers_using_mode(const SocialNetwork& net, const Agent& agent, Mode mode,
                        std::span<const Agent> agents) {
  const auto& peers = net.neighbors(agent.id);
  if (peers.empty()) return 0.0;
  int count = 0;
  for (int p : peers)
    if (agents[p].current_mode == mode) ++count;
  return static_cast<double>(count) / static_cast<double>(peers.size());
}

Mode most_common_peer_mode(const SocialNetwork& net, const Agent& agent,
                           std::span<const Agent> agents) {
  PerMode<int> counts{};
  for (int p : net.neighbors(agent.id)) counts[mode_index(agents[p].current_mode)] += 1;
  int best = 0;
  for (int m = 1; m < kNumModes; ++m)
    if (counts[m] > counts[best]) best = m;
  return static_cast<Mode>(best);
}

DegreeFitStats degree_distribution_fit(const SocialNetwork& net) {
  DegreeFitStats stats;
  if (net.size() == 0) return stats;

  int max_deg = 0, min_deg = net.degree(0);
  std::vector<int> histogram;
  for (int i = 0; i < net.size(); ++i) {
    int d = net.degree(i);
    max_deg = std::max(max_deg, d);
    min_deg = std::min(min_deg, d);
    if (d >= static_cast<int>(histogram.size())) histogram.resize(d + 1, 0);
    histogram[d] += 1;
  }
  stats.min_degree = min_deg;
  stats.max_degree = max_deg;
  if (min_deg < 1) min_deg = 1;

  // Logarithmic binning: [lo, 2*lo), density = count / width, then OLS of
  // log density against log bin center.
  std::vector<double> xs, ys;
  for (int lo = min_deg; lo <= max_deg;) {
    int hi = std::max(lo + 1, 2 * lo);
    long long count = 0;
    for (int d = lo; d < hi && d <= max_deg; ++d) count += histogram[d];
    if (count > 0) {
      double width = hi - lo;
      double center = std::sqrt(static_cast<double>(lo) * (hi - 1));
      xs.push_back(std::log(center));
      ys.push_back(std::log(static_cast<double>(count) / width));
    }
    lo = hi;
  }
  stats.bins_used = static_cast<int>(xs.size());
  if (xs.size() < 3) return stats;

  double mx = 0, my = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  double slope = sxy / sxx;
  stats.exponent = -slope;
  stats.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return stats;
}

double same_income_edge_fraction(const SocialNetwork& net, std::span<const int> levels) {
  long long same = 0, total = 0;
  for (int i = 0; i < net.size(); ++i) {
    for (int j : net.neighbors(i)) {
      if (j <= i) continue;
      ++total;
      if (levels[i] == levels[j]) ++same;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(same) / static_cast<double>(total);
}

double demographic_baseline(std::span<const int> levels) {
  std::array<long long, kNumIncomeLevels> counts{};
  for (int lv : levels) counts[lv - 1] += 1;
  double baseline = 0.0;
  const double n = static_cast<double>(levels.size());
  for (long long c : counts) {
    double share = c / n;
    baseline += share * share;
  }
  return baseline;
}

void write_edge_list_csv(const std::filesystem::path& path, const SocialNetwork& net) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("network: cannot write " + path.string());
  out << "src,dst\n";
  for (int i = 0; i < net.size(); ++i)
    for (int j : net.neighbors(i))
      if (i < j) out << i << ',' << j << '\n';
}

}  // namespace commute
