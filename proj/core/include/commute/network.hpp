#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "commute/config.hpp"
#include "commute/population.hpp"
#include "commute/rng.hpp"

namespace commute {

// Undirected simple graph over agents. Adjacency lists are sorted ascending.
class SocialNetwork {
 public:
  SocialNetwork() = default;
  explicit SocialNetwork(int n) : adj_(n) {}

  static SocialNetwork from_edges(int n, std::span<const std::pair<int, int>> edges);

  int size() const { return static_cast<int>(adj_.size()); }
  const std::vector<int>& neighbors(int i) const { return adj_[i]; }
  int degree(int i) const { return static_cast<int>(adj_[i].size()); }
  long long edge_count() const;

  bool is_simple_symmetric() const;
  bool is_connected() const;

  // For hand-built graphs in tests and builders. Does not deduplicate.
  void add_edge(int a, int b);
  void finalize();  // sort adjacency lists

 private:
  std::vector<std::vector<int>> adj_;
};

// Homophily-biased preferential attachment: the first m0 nodes form a clique;
// each later node attaches to m distinct existing nodes drawn without
// replacement with probability proportional to
//   degree(j) * (homophily_multiplier if income(j) == income(i) else 1).
SocialNetwork build_network(std::span<const Agent> agents, const NetworkParams& params,
                            RngStream& rng);

// Same generator when only income levels (1..3) are at hand.
SocialNetwork build_network_from_levels(std::span<const int> income_levels,
                                        const NetworkParams& params, RngStream& rng);

// Fraction of the agent's neighbors currently using `mode`.
double peers_using_mode(const SocialNetwork& net, const Agent& agent, Mode mode,
                        std::span<const Agent> agents);

// Modal mode among neighbors; ties break toward the lower mode index.
Mode most_common_peer_mode(const SocialNetwork& net, const Agent& agent,
                           std::span<const Agent> agents);

// Diagnostic for scale checks: log-binned degree histogram fitted by
// least-squares in log-log space. exponent is the implied power-law exponent
// (about 3 for plain preferential attachment).
struct DegreeFitStats {
  double exponent = 0.0;
  double r_squared = 0.0;
  int bins_used = 0;
  int min_degree = 0;
  int max_degree = 0;
};
DegreeFitStats degree_distribution_fit(const SocialNetwork& net);

// Fraction of edges whose endpoints share an income level, and the value
// expected if edges ignored income entirely.
double same_income_edge_fraction(const SocialNetwork& net, std::span<const int> income_levels);
double demographic_baseline(std::span<const int> income_levels);

// CSV "src,dst", one row per undirected edge with src < dst.
void write_edge_list_csv(const std::filesystem::path& path, const SocialNetwork& net);

}  // namespace commute
