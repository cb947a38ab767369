#include "spanner/heuristics.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace spanner {

namespace {

// d_H(source, target) on a growing adjacency structure, giving up once every
// open label exceeds `limit`.
double bounded_distance(const std::vector<std::vector<Arc>>& adj, const Graph& g, NodeId source, NodeId target,
                        double limit, std::vector<double>& dist, std::vector<NodeId>& touched) {
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[source] = 0.0;
  touched.push_back(source);
  heap.emplace(0.0, source);
  double result = kInfinity;
  while (!heap.empty()) {
    auto [d, node] = heap.top();
    heap.pop();
    if (d > dist[node]) continue;
    if (node == target) {
      result = d;
      break;
    }
    if (d > limit) break;
    for (const Arc& arc : adj[node]) {
      const double nd = d + g.weight(arc.edge);
      if (nd < dist[arc.head]) {
        if (dist[arc.head] == kInfinity) touched.push_back(arc.head);
        dist[arc.head] = nd;
        heap.emplace(nd, arc.head);
      }
    }
  }
  for (NodeId node : touched) dist[node] = kInfinity;
  touched.clear();
  return result;
}

}  // namespace

SpannerSolution make_solution(const Graph& g, std::vector<EdgeId> edge_ids) {
  std::sort(edge_ids.begin(), edge_ids.end());
  SpannerSolution s;
  for (EdgeId e : edge_ids) s.total_weight += g.weight(e);
  s.edge_ids = std::move(edge_ids);
  return s;
}

SpannerSolution basic_greedy(const Graph& g, double alpha) {
  if (!(alpha >= 1.0)) throw std::invalid_argument("stretch factor must be >= 1");
  std::vector<EdgeId> order(g.edge_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) { return g.weight(a) < g.weight(b); });

  std::vector<std::vector<Arc>> adj(g.node_count());
  std::vector<double> dist(g.node_count(), kInfinity);
  std::vector<NodeId> touched;
  std::vector<EdgeId> chosen;
  for (EdgeId id : order) {
    const Edge& e = g.edge(id);
    const double limit = alpha * e.weight;
    const double d = bounded_distance(adj, g, e.u, e.v, limit, dist, touched);
    if (!within_budget(d, limit)) {
      adj[e.u].push_back({e.v, id});
      adj[e.v].push_back({e.u, id});
      chosen.push_back(id);
    }
  }
  SpannerSolution s = make_solution(g, std::move(chosen));
  s.feasible_for_alpha = alpha;
  return s;
}

VerifyResult verify_spanner(const Graph& g, double alpha, std::span<const EdgeId> edge_ids, PairMode mode) {
  if (!is_connected(g)) {
    // d_G itself is infinite for some pairs; compare per component.
    throw GraphError("verify_spanner requires a connected graph");
  }
  return verify_spanner(g, all_pairs_distances(g), alpha, edge_ids, mode);
}

VerifyResult verify_spanner(const Graph& g, const DistanceMatrix& dist, double alpha,
                            std::span<const EdgeId> edge_ids, PairMode mode) {
  std::vector<char> removed(g.edge_count(), 1);
  for (EdgeId e : edge_ids) {
    if (e < 0 || e >= g.edge_count()) throw std::out_of_range("edge id not in graph");
    removed[e] = 0;
  }
  DijkstraOptions opts;
  opts.edge_removed = removed;

  VerifyResult result;
  result.feasible = true;
  auto consider = [&](NodeId u, NodeId v, double dh) {
    const double dg = dist(u, v);
    const double ratio = dh == kInfinity ? kInfinity : dh / dg;
    if (result.worst_u < 0 || ratio > result.worst_ratio) {
      result.worst_u = u;
      result.worst_v = v;
      result.worst_ratio = ratio;
    }
    if (!within_budget(dh, alpha * dg)) result.feasible = false;
  };

  if (mode == PairMode::kAllPairs) {
    for (NodeId u = 0; u < g.node_count(); ++u) {
      const auto dh = shortest_path_tree(g, u, opts).dist;
      for (NodeId v = u + 1; v < g.node_count(); ++v) consider(u, v, dh[v]);
    }
  } else {
    std::vector<std::vector<NodeId>> partners(g.node_count());
    for (const Edge& e : g.edges()) partners[std::min(e.u, e.v)].push_back(std::max(e.u, e.v));
    for (NodeId u = 0; u < g.node_count(); ++u) {
      if (partners[u].empty()) continue;
      const auto dh = shortest_path_tree(g, u, opts).dist;
      for (NodeId v : partners[u]) consider(u, v, dh[v]);
    }
  }
  if (result.worst_u < 0) result.worst_ratio = 1.0;
  return result;
}

double gap_percent(double heuristic_weight, double reference_bound) {
  if (!(reference_bound > 0.0)) throw std::invalid_argument("gap reference bound must be positive");
  return 100.0 * (heuristic_weight - reference_bound) / reference_bound;
}

}  // namespace spanner
