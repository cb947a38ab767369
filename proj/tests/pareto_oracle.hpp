#pragma once

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "spanner/pricing.hpp"

namespace spanner::testing {

struct FrontPoint {
  double cost, weight;
};

/// Pareto front of all simple u-v paths within budget and below the cap, by
/// depth-first enumeration.
inline std::vector<FrontPoint> brute_front(const Graph& g, const PricingProblem& p) {
  std::vector<FrontPoint> all;
  std::vector<char> seen(g.node_count(), 0);
  std::function<void(NodeId, double, double)> dfs = [&](NodeId at, double cost, double weight) {
    if (at == p.pair.v) {
      if (within_budget(weight, p.pair.budget) && cost < p.cost_cap) all.push_back({cost, weight});
      return;
    }
    seen[at] = 1;
    for (const Arc& a : g.arcs(at))
      if (!seen[a.head]) dfs(a.head, cost + p.edge_cost[a.edge], weight + g.weight(a.edge));
    seen[at] = 0;
  };
  dfs(p.pair.u, 0.0, 0.0);
  std::sort(all.begin(), all.end(), [](const FrontPoint& a, const FrontPoint& b) {
    return a.cost != b.cost ? a.cost < b.cost : a.weight < b.weight;
  });
  std::vector<FrontPoint> front;
  for (const FrontPoint& q : all)
    if (front.empty() || q.weight < front.back().weight) front.push_back(q);
  return front;
}

struct RandomPricing {
  Graph graph;
  DistanceMatrix dist;
  PricingProblem problem;
};

/// Connected graph on 3..12 nodes (a path plus random chords), random pair,
/// alpha in [1, 4], sparse random costs and cap. Even rounds use small
/// integers, odd rounds continuous values.
inline RandomPricing random_pricing(std::mt19937_64& rng, int round) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = 3 + static_cast<int>(rng() % 10);
  const bool discrete = round % 2 == 0;
  std::vector<Edge> edges;
  const double density = 0.25 + 0.5 * unit(rng);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (v == u + 1 || unit(rng) < density)
        edges.push_back({u, v, discrete ? double(1 + rng() % 5) : 0.05 + unit(rng)});
  RandomPricing r{Graph(n, edges), {}, {}};
  r.dist = all_pairs_distances(r.graph);
  PricingProblem& p = r.problem;
  const NodeId u = static_cast<NodeId>(rng() % n);
  NodeId v = static_cast<NodeId>(rng() % (n - 1));
  if (v >= u) ++v;
  const double alpha = 1.0 + 3.0 * unit(rng);
  p.pair = {std::min(u, v), std::max(u, v), r.dist(u, v), alpha * r.dist(u, v)};
  p.edge_cost.resize(r.graph.edge_count());
  for (double& c : p.edge_cost) c = rng() % 4 == 0 ? 0.0 : (discrete ? double(rng() % 4) : 3.0 * unit(rng));
  p.cost_cap = discrete ? double(rng() % 10) : 10.0 * unit(rng);
  return r;
}

}  // namespace spanner::testing
