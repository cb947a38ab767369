#include <random>

#include "doctest.h"
#include "spanner/heuristics.hpp"

using namespace spanner;

namespace {

Graph c4() { return Graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}}); }

Graph random_graph(std::mt19937_64& rng, int n, bool integer_weights) {
  std::vector<Edge> edges;
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (v == u + 1 || rng() % 3 == 0)
        edges.push_back({u, v, integer_weights ? static_cast<double>(1 + rng() % n) : unit(rng)});
  return Graph(n, edges);
}

}  // namespace

TEST_CASE("basic greedy examples") {
  const auto p3 = basic_greedy(build_graph({{0, 1, 1}, {1, 2, 1}}), 2.0);
  CHECK(p3.edge_ids == std::vector<EdgeId>{0, 1});
  CHECK(p3.total_weight == 2.0);
  CHECK(p3.feasible_for_alpha == 2.0);

  const auto tri = basic_greedy(Graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 2}}), 1.0);
  CHECK(tri.edge_ids == std::vector<EdgeId>{0, 1});
  CHECK(tri.total_weight == 2.0);

  const auto cycle = basic_greedy(c4(), 2.0);
  CHECK(cycle.edge_ids.size() == 4);
  CHECK(cycle.total_weight == 4.0);
}

TEST_CASE("verify spanner examples") {
  const Graph g = c4();
  const std::vector<EdgeId> all{0, 1, 2, 3};
  const auto full = verify_spanner(g, 2.0, all, PairMode::kAllPairs);
  CHECK(full.feasible);
  CHECK(full.worst_ratio == doctest::Approx(1.0));

  const std::vector<EdgeId> three{0, 1, 2};
  const auto missing = verify_spanner(g, 2.0, three, PairMode::kAdjacent);
  CHECK_FALSE(missing.feasible);
  CHECK(missing.worst_ratio == doctest::Approx(3.0));
  CHECK(missing.worst_u == 0);
  CHECK(missing.worst_v == 3);

  const auto empty = verify_spanner(g, 2.0, std::vector<EdgeId>{}, PairMode::kAdjacent);
  CHECK_FALSE(empty.feasible);
  CHECK(empty.worst_ratio == kInfinity);
}

TEST_CASE("gap percent") {
  CHECK(gap_percent(10, 10) == 0.0);
  CHECK(gap_percent(11, 10) == doctest::Approx(10.0));
  CHECK_THROWS(gap_percent(1, 0));
  CHECK_THROWS(gap_percent(1, -1));
}

TEST_CASE("greedy output is feasible and monotone in alpha") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 60; ++round) {
    const Graph g = random_graph(rng, 5 + static_cast<int>(rng() % 15), round % 2 == 0);
    double previous = kInfinity;
    for (double alpha : {1.0, 1.2, 1.5, 2.0, 3.0, 5.0}) {
      const auto h = basic_greedy(g, alpha);
      CHECK(verify_spanner(g, alpha, h.edge_ids, PairMode::kAllPairs).feasible);
      CHECK(h.total_weight <= previous + 1e-9);
      previous = h.total_weight;
    }
  }
}

TEST_CASE("adjacent feasibility implies all-pairs feasibility") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int round = 0; round < 300; ++round) {
    const Graph g = random_graph(rng, 4 + static_cast<int>(rng() % 9), round % 2 == 0);
    std::vector<EdgeId> subset;
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      if (rng() % 4 != 0) subset.push_back(e);
    const double alpha = 1.0 + (rng() % 5) * 0.5;
    if (verify_spanner(g, alpha, subset, PairMode::kAdjacent).feasible) {
      ++checked;
      CHECK(verify_spanner(g, alpha, subset, PairMode::kAllPairs).feasible);
    }
  }
  CHECK(checked > 20);
}
