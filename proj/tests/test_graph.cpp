#include <random>

#include "doctest.h"
#include "spanner/graph.hpp"

using namespace spanner;

namespace {

Graph triangle(double w01, double w12, double w02) { return Graph(3, {{0, 1, w01}, {1, 2, w12}, {0, 2, w02}}); }
Graph c4() { return Graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}}); }

}  // namespace

TEST_CASE("build_graph fills the forward star") {
  const Graph p3 = build_graph({{0, 1, 1}, {1, 2, 1}});
  CHECK(p3.node_count() == 3);
  CHECK(p3.degree(0) == 1);
  CHECK(p3.degree(1) == 2);
  CHECK(p3.degree(2) == 1);

  const Graph cycle = c4();
  int degree_sum = 0;
  for (NodeId v = 0; v < 4; ++v) {
    CHECK(cycle.degree(v) == 2);
    degree_sum += cycle.degree(v);
  }
  CHECK(degree_sum == 2 * cycle.edge_count());
  // each edge appears once per direction
  std::vector<int> seen(cycle.edge_count(), 0);
  for (NodeId v = 0; v < 4; ++v)
    for (const Arc& a : cycle.arcs(v)) ++seen[a.edge];
  for (int s : seen) CHECK(s == 2);
  CHECK(cycle.find_edge(3, 0) == 3);
  CHECK_FALSE(cycle.find_edge(0, 2).has_value());
}

TEST_CASE("build_graph rejects malformed edges") {
  CHECK_THROWS_AS(build_graph({{0, 1, 1}, {0, 1, 2}}), GraphError);
  CHECK_THROWS_AS(build_graph({{0, 1, 1}, {1, 0, 2}}), GraphError);
  CHECK_THROWS_AS(build_graph({{1, 1, 1}}), GraphError);
  CHECK_THROWS_AS(build_graph({{0, 1, 0}}), GraphError);
  CHECK_THROWS_AS(build_graph({{0, 1, -2}}), GraphError);
  CHECK_THROWS_WITH_AS(Graph(2, {{0, 5, 1}}), doctest::Contains("out of range"), GraphError);
}

TEST_CASE("dijkstra distances") {
  CHECK(dijkstra(build_graph({{0, 1, 1}, {1, 2, 1}}), 0) == std::vector<double>{0, 1, 2});
  CHECK(dijkstra(c4(), 0) == std::vector<double>{0, 1, 2, 1});
  CHECK(dijkstra(triangle(1, 1, 2), 0) == std::vector<double>{0, 1, 2});

  const Graph disconnected(3, {{0, 1, 1}});
  CHECK(dijkstra(disconnected, 0)[2] == kInfinity);

  std::vector<double> zero(4, 0.0);
  CHECK(dijkstra(c4(), 2, zero) == std::vector<double>{0, 0, 0, 0});
}

TEST_CASE("all pairs distances") {
  const DistanceMatrix d = all_pairs_distances(c4());
  CHECK(d(0, 2) == 2);
  CHECK(d(2, 0) == 2);
  CHECK(d(1, 1) == 0);
  CHECK(all_pairs_distances(triangle(1, 1, 2))(0, 2) == 2);
  const DistanceMatrix k3 = all_pairs_distances(triangle(1, 1, 1));
  for (NodeId a = 0; a < 3; ++a)
    for (NodeId b = 0; b < 3; ++b) CHECK(k3(a, b) == (a == b ? 0 : 1));
  CHECK_THROWS_AS(all_pairs_distances(Graph(3, {{0, 1, 1}})), GraphError);
}

TEST_CASE("metrication removes only strictly longer edges") {
  auto strict = metricate(triangle(1, 1, 3));
  CHECK(strict.removed == std::vector<EdgeId>{2});
  CHECK(strict.graph.edge_count() == 2);
  CHECK(strict.original_id == std::vector<EdgeId>{0, 1});

  CHECK(metricate(triangle(1, 1, 2)).removed.empty());
  CHECK(metricate(c4()).removed.empty());

  const Graph frac = triangle(0.5, 0.25, 0.75);
  CHECK(metricate(frac).removed.empty());
  CHECK(metricate(triangle(0.5, 0.25, 0.75 + 1e-6)).removed.size() == 1);
}

TEST_CASE("metrication preserves distances and is idempotent on random graphs") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 40; ++round) {
    const int n = 4 + static_cast<int>(rng() % 12);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (rng() % 2 == 0 || v == u + 1) edges.push_back({u, v, static_cast<double>(1 + rng() % n)});
    const Graph g(n, edges);
    const auto once = metricate(g);
    const auto before = all_pairs_distances(g);
    const auto after = all_pairs_distances(once.graph);
    for (NodeId a = 0; a < n; ++a)
      for (NodeId b = 0; b < n; ++b) REQUIRE(before(a, b) == after(a, b));
    CHECK(metricate(once.graph).removed.empty());
    for (EdgeId e = 0; e < once.graph.edge_count(); ++e) {
      const Edge& orig = g.edge(once.original_id[e]);
      CHECK(orig.weight == once.graph.weight(e));
    }
  }
}

TEST_CASE("terminal pairs") {
  const Graph cycle = c4();
  const auto d = all_pairs_distances(cycle);
  const auto adjacent = build_terminal_pairs(cycle, d, 2.0, PairMode::kAdjacent);
  REQUIRE(adjacent.size() == 4);
  for (const auto& p : adjacent) {
    CHECK(p.u < p.v);
    CHECK(p.budget == 2.0);
  }
  const auto all = build_terminal_pairs(cycle, d, 2.0, PairMode::kAllPairs);
  REQUIRE(all.size() == 6);
  int diagonals = 0;
  for (const auto& p : all)
    if (p.distance == 2) {
      ++diagonals;
      CHECK(p.budget == 4.0);
    }
  CHECK(diagonals == 2);

  const Graph p3 = build_graph({{0, 1, 1}, {1, 2, 1}});
  const auto pairs = build_terminal_pairs(p3, all_pairs_distances(p3), 1.5, PairMode::kAdjacent);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].budget == 1.5);
  CHECK(pairs[1].budget == 1.5);
  CHECK_THROWS_AS(build_terminal_pairs(p3, all_pairs_distances(p3), 0.9, PairMode::kAdjacent), std::invalid_argument);
}
