#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>

#include "commute/network.hpp"
#include "doctest.h"

using namespace commute;

namespace {

std::vector<int> level_mix(int n, RngStream& rng) {
  std::vector<int> levels(n);
  for (int& lv : levels) lv = 1 + static_cast<int>(rng.uniform_int(3));
  return levels;
}

// Independent structural validator (does not rely on SocialNetwork's own
// checks): symmetric, no self-loops, no duplicate edges.
void check_simple_symmetric(const SocialNetwork& net) {
  std::set<std::pair<int, int>> edges;
  for (int i = 0; i < net.size(); ++i) {
    std::set<int> seen;
    for (int j : net.neighbors(i)) {
      CHECK(j != i);
      CHECK(seen.insert(j).second);
      edges.insert({std::min(i, j), std::max(i, j)});
    }
  }
  long long directed = 0;
  for (int i = 0; i < net.size(); ++i) directed += net.degree(i);
  CHECK(directed == 2 * static_cast<long long>(edges.size()));
  for (auto [a, b] : edges) {
    const auto& na = net.neighbors(a);
    const auto& nb = net.neighbors(b);
    CHECK(std::find(na.begin(), na.end(), b) != na.end());
    CHECK(std::find(nb.begin(), nb.end(), a) != nb.end());
  }
}

Agent agent_with_mode(int id, Mode m) {
  Agent a;
  a.id = id;
  a.current_mode = m;
  return a;
}

}  // namespace

TEST_CASE("n == m0 yields the bare clique") {
  RngStream rng(1);
  std::vector<int> levels{1, 2, 3};
  NetworkParams params{3, 2, 1.0};
  SocialNetwork net = build_network_from_levels(levels, params, rng);
  CHECK(net.edge_count() == 3);
  for (int i = 0; i < 3; ++i) CHECK(net.degree(i) == 2);
  CHECK(net.is_connected());
  CHECK(net.is_simple_symmetric());
}

TEST_CASE("builds are simple, symmetric, connected") {
  NetworkParams params{5, 3, 3.0};
  for (int n : {50, 1000, 1250}) {
    for (uint64_t seed = 0; seed < 5; ++seed) {
      RngStream rng = make_stream(seed, static_cast<uint64_t>(n), StreamConcern::Network);
      std::vector<int> levels = level_mix(n, rng);
      SocialNetwork net = build_network_from_levels(levels, params, rng);
      check_simple_symmetric(net);
      CHECK(net.is_simple_symmetric());
      CHECK(net.is_connected());
      // Every attachment adds exactly m new edges.
      CHECK(net.edge_count() == 10 + 3LL * (n - 5));
    }
  }
}

TEST_CASE("mean degree approaches 2m") {
  RngStream rng(17);
  NetworkParams params{5, 3, 1.0};
  std::vector<int> levels = level_mix(5000, rng);
  SocialNetwork net = build_network_from_levels(levels, params, rng);
  double mean = 2.0 * static_cast<double>(net.edge_count()) / net.size();
  CHECK(mean == doctest::Approx(2.0 * params.m).epsilon(0.05));
}

TEST_CASE("homophily lifts same-income edges above the demographic baseline") {
  NetworkParams biased{5, 3, 3.0};
  int wins = 0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    RngStream level_rng(seed * 7 + 1);
    std::vector<int> levels = level_mix(600, level_rng);
    RngStream rng = make_stream(seed, 1, StreamConcern::Network);
    SocialNetwork net = build_network_from_levels(levels, biased, rng);
    if (same_income_edge_fraction(net, levels) > demographic_baseline(levels)) ++wins;
  }
  CHECK(wins >= 19);
}

TEST_CASE("multiplier 1 shows no systematic homophily") {
  NetworkParams neutral{5, 3, 1.0};
  double excess = 0.0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    RngStream level_rng(seed * 13 + 5);
    std::vector<int> levels = level_mix(600, level_rng);
    RngStream rng = make_stream(seed, 2, StreamConcern::Network);
    SocialNetwork net = build_network_from_levels(levels, neutral, rng);
    excess += same_income_edge_fraction(net, levels) - demographic_baseline(levels);
  }
  CHECK(std::abs(excess / 20.0) < 0.02);
}

TEST_CASE("build is deterministic per seed") {
  NetworkParams params{5, 3, 3.0};
  RngStream level_rng(3);
  std::vector<int> levels = level_mix(400, level_rng);
  RngStream r1 = make_stream(42, 0, StreamConcern::Network);
  RngStream r2 = make_stream(42, 0, StreamConcern::Network);
  SocialNetwork a = build_network_from_levels(levels, params, r1);
  SocialNetwork b = build_network_from_levels(levels, params, r2);
  REQUIRE(a.size() == b.size());
  for (int i = 0; i < a.size(); ++i) CHECK(a.neighbors(i) == b.neighbors(i));
}

TEST_CASE("degree fit diagnostic lands near the preferential-attachment exponent") {
  RngStream rng(5);
  NetworkParams params{5, 3, 1.0};
  std::vector<int> levels = level_mix(5000, rng);
  SocialNetwork net = build_network_from_levels(levels, params, rng);
  DegreeFitStats stats = degree_distribution_fit(net);
  CHECK(stats.bins_used >= 4);
  CHECK(stats.exponent > 2.0);
  CHECK(stats.exponent < 4.0);
  CHECK(stats.r_squared > 0.9);
}

TEST_CASE("peer mode queries") {
  std::vector<Agent> agents;
  // Agent 0 with neighbors 1..8.
  for (int i = 0; i < 9; ++i) agents.push_back(agent_with_mode(i, Mode::Car));

  SUBCASE("unanimous neighbors give fraction 1") {
    std::vector<std::pair<int, int>> edges{{0, 1}, {0, 2}, {0, 3}, {0, 4}};
    SocialNetwork net = SocialNetwork::from_edges(9, edges);
    for (int i = 1; i <= 4; ++i) agents[i].current_mode = Mode::Transit;
    CHECK(peers_using_mode(net, agents[0], Mode::Transit, agents) == 1.0);
    CHECK(peers_using_mode(net, agents[0], Mode::Car, agents) == 0.0);
  }
  SUBCASE("no neighbor uses the mode") {
    std::vector<std::pair<int, int>> edges{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}};
    SocialNetwork net = SocialNetwork::from_edges(9, edges);
    for (int i = 1; i <= 5; ++i) agents[i].current_mode = Mode::Transit;
    CHECK(peers_using_mode(net, agents[0], Mode::Car, agents) == 0.0);
  }
  SUBCASE("2 of 8 on motorcycle is 0.25") {
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i <= 8; ++i) edges.push_back({0, i});
    SocialNetwork net = SocialNetwork::from_edges(9, edges);
    agents[3].current_mode = Mode::Motorcycle;
    agents[7].current_mode = Mode::Motorcycle;
    CHECK(peers_using_mode(net, agents[0], Mode::Motorcycle, agents) == 0.25);
  }
}

TEST_CASE("modal peer mode with fixed-order tie break") {
  std::vector<Agent> agents{agent_with_mode(0, Mode::Transit), agent_with_mode(1, Mode::Car),
                            agent_with_mode(2, Mode::Car),
                            agent_with_mode(3, Mode::Motorcycle)};
  SUBCASE("strict majority") {
    SocialNetwork net = SocialNetwork::from_edges(
        4, std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {0, 3}});
    CHECK(most_common_peer_mode(net, agents[0], agents) == Mode::Car);
  }
  SUBCASE("tie goes to the lower mode index") {
    SocialNetwork net =
        SocialNetwork::from_edges(4, std::vector<std::pair<int, int>>{{0, 1}, {0, 3}});
    CHECK(most_common_peer_mode(net, agents[0], agents) == Mode::Motorcycle);
  }
  SUBCASE("unanimous") {
    agents[1].current_mode = Mode::Transit;
    agents[2].current_mode = Mode::Transit;
    SocialNetwork net =
        SocialNetwork::from_edges(4, std::vector<std::pair<int, int>>{{0, 1}, {0, 2}});
    CHECK(most_common_peer_mode(net, agents[0], agents) == Mode::Transit);
  }
}

TEST_CASE("edge list export writes each edge once with src < dst") {
  RngStream rng(8);
  std::vector<int> levels = level_mix(50, rng);
  SocialNetwork net = build_network_from_levels(levels, NetworkParams{4, 2, 2.0}, rng);
  const auto path = std::filesystem::temp_directory_path() / "commute_edges_test.csv";
  write_edge_list_csv(path, net);

  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "src,dst");
  long long rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    const auto comma = line.find(',');
    CHECK(std::stoi(line.substr(0, comma)) < std::stoi(line.substr(comma + 1)));
  }
  CHECK(rows == net.edge_count());
  std::filesystem::remove(path);
}
