#include "spanner/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <utility>

namespace spanner {

namespace {

std::string describe(const Edge& e) {
  return "(" + std::to_string(e.u) + ", " + std::to_string(e.v) + ", " + std::to_string(e.weight) + ")";
}

}  // namespace

Graph::Graph(int node_count, std::vector<Edge> edges) : node_count_(node_count), edges_(std::move(edges)) {
  if (node_count < 0) throw GraphError("negative node count");
  std::set<std::pair<NodeId, NodeId>> seen;
  std::vector<int> degree(node_count, 0);
  for (const Edge& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= node_count || e.v >= node_count)
      throw GraphError("node id out of range in edge " + describe(e));
    if (e.u == e.v) throw GraphError("self-loop " + describe(e));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) throw GraphError("nonpositive weight in edge " + describe(e));
    if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second)
      throw GraphError("parallel edge " + describe(e));
    ++degree[e.u];
    ++degree[e.v];
    if (e.weight != std::floor(e.weight)) integral_ = false;
  }

  first_arc_.assign(node_count + 1, 0);
  for (int i = 0; i < node_count; ++i) first_arc_[i + 1] = first_arc_[i] + degree[i];
  arcs_.resize(2 * edges_.size());
  std::vector<int> fill(first_arc_.begin(), first_arc_.end() - 1);
  for (EdgeId id = 0; id < edge_count(); ++id) {
    const Edge& e = edges_[id];
    arcs_[fill[e.u]++] = {e.v, id};
    arcs_[fill[e.v]++] = {e.u, id};
  }
}

std::optional<EdgeId> Graph::find_edge(NodeId a, NodeId b) const {
  for (const Arc& arc : arcs(a))
    if (arc.head == b) return arc.edge;
  return std::nullopt;
}

double Graph::total_weight() const {
  double sum = 0.0;
  for (const Edge& e : edges_) sum += e.weight;
  return sum;
}

Graph build_graph(std::vector<Edge> edges) {
  int n = 0;
  for (const Edge& e : edges) n = std::max({n, e.u + 1, e.v + 1});
  return Graph(n, std::move(edges));
}

std::vector<EdgeId> ShortestPathTree::path_to(const Graph& g, NodeId target) const {
  std::vector<EdgeId> path;
  if (dist[target] == kInfinity) return path;
  NodeId node = target;
  while (parent_edge[node] >= 0) {
    path.push_back(parent_edge[node]);
    node = g.other_end(parent_edge[node], node);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

ShortestPathTree shortest_path_tree(const Graph& g, NodeId source, const DijkstraOptions& opts) {
  const int n = g.node_count();
  ShortestPathTree tree{std::vector<double>(n, kInfinity), std::vector<EdgeId>(n, -1)};
  std::vector<char> settled(n, 0);
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  tree.dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, node] = heap.top();
    heap.pop();
    if (settled[node]) continue;
    settled[node] = 1;
    if (node == opts.target) break;
    for (const Arc& arc : g.arcs(node)) {
      if (!opts.edge_removed.empty() && opts.edge_removed[arc.edge]) continue;
      const double len = opts.edge_cost.empty() ? g.weight(arc.edge) : opts.edge_cost[arc.edge];
      const double nd = d + len;
      if (nd < tree.dist[arc.head] && nd <= opts.bound) {
        tree.dist[arc.head] = nd;
        tree.parent_edge[arc.head] = arc.edge;
        heap.emplace(nd, arc.head);
      }
    }
  }
  return tree;
}

std::vector<double> dijkstra(const Graph& g, NodeId source, std::span<const double> edge_cost) {
  DijkstraOptions opts;
  opts.edge_cost = edge_cost;
  return shortest_path_tree(g, source, opts).dist;
}

DistanceMatrix all_pairs_distances(const Graph& g) {
  const int n = g.node_count();
  DistanceMatrix m(n);
  for (NodeId s = 0; s < n; ++s) {
    const auto dist = dijkstra(g, s);
    for (NodeId t = 0; t < n; ++t) {
      if (dist[t] == kInfinity)
        throw GraphError("graph is disconnected: no path between " + std::to_string(s) + " and " + std::to_string(t));
      m.at(s, t) = dist[t];
    }
  }
  return m;
}

bool is_connected(const Graph& g) {
  if (g.node_count() == 0) return true;
  std::vector<char> seen(g.node_count(), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const NodeId node = stack.back();
    stack.pop_back();
    for (const Arc& arc : g.arcs(node)) {
      if (!seen[arc.head]) {
        seen[arc.head] = 1;
        ++count;
        stack.push_back(arc.head);
      }
    }
  }
  return count == g.node_count();
}

MetricationResult metricate(const Graph& g) { return metricate(g, all_pairs_distances(g)); }

MetricationResult metricate(const Graph& g, const DistanceMatrix& dist) {
  MetricationResult result;
  std::vector<Edge> kept;
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    const Edge& e = g.edge(id);
    const double d = dist(e.u, e.v);
    // Strict: an edge as long as the detour may still be optimal.
    const bool longer = g.integral_weights() ? e.weight > d : !within_budget(e.weight, d);
    if (longer) {
      result.removed.push_back(id);
    } else {
      kept.push_back(e);
      result.original_id.push_back(id);
    }
  }
  result.graph = Graph(g.node_count(), std::move(kept));
  return result;
}

std::vector<TerminalPair> build_terminal_pairs(const Graph& g, const DistanceMatrix& dist, double alpha,
                                               PairMode mode) {
  if (!(alpha >= 1.0)) throw std::invalid_argument("stretch factor must be >= 1");
  std::vector<TerminalPair> pairs;
  auto make = [&](NodeId a, NodeId b) {
    const NodeId u = std::min(a, b);
    const NodeId v = std::max(a, b);
    pairs.push_back({u, v, dist(u, v), alpha * dist(u, v)});
  };
  if (mode == PairMode::kAdjacent) {
    for (const Edge& e : g.edges()) make(e.u, e.v);
  } else {
    for (NodeId u = 0; u < g.node_count(); ++u)
      for (NodeId v = u + 1; v < g.node_count(); ++v) make(u, v);
  }
  return pairs;
}

std::string to_string(PairMode mode) { return mode == PairMode::kAdjacent ? "adjacent" : "all"; }

PairMode parse_pair_mode(const std::string& text) {
  if (text == "adjacent") return PairMode::kAdjacent;
  if (text == "all" || text == "all_pairs") return PairMode::kAllPairs;
  throw std::invalid_argument("unknown pair mode: " + text);
}

}  // namespace spanner
