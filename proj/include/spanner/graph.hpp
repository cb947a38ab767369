#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spanner {

using NodeId = int;
using EdgeId = int;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Absolute slack used when comparing path lengths against budgets.
inline constexpr double kLengthTolerance = 1e-9;

/// `value <= bound` up to kLengthTolerance, scaled for large magnitudes.
inline bool within_budget(double value, double bound) {
  const double scale = bound > 1.0 ? bound : 1.0;
  return value <= bound + kLengthTolerance * scale;
}

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double weight = 1.0;
};

/// One direction of an undirected edge in the forward-star arrays.
struct Arc {
  NodeId head = 0;
  EdgeId edge = 0;
};

/// Immutable undirected graph with positive weights, stored as a bidirected
/// forward star. Edge ids are the positions in the input list.
class Graph {
 public:
  Graph() = default;
  Graph(int node_count, std::vector<Edge> edges);

  int node_count() const { return node_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }
  double weight(EdgeId e) const { return edges_[e].weight; }

  std::span<const Arc> arcs(NodeId node) const {
    return {arcs_.data() + first_arc_[node], arcs_.data() + first_arc_[node + 1]};
  }
  int degree(NodeId node) const { return first_arc_[node + 1] - first_arc_[node]; }

  NodeId other_end(EdgeId e, NodeId from) const {
    return edges_[e].u == from ? edges_[e].v : edges_[e].u;
  }
  std::optional<EdgeId> find_edge(NodeId a, NodeId b) const;

  /// True when every weight is an integer; such graphs have exact distances.
  bool integral_weights() const { return integral_; }
  double total_weight() const;

 private:
  int node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> first_arc_{0};
  std::vector<Arc> arcs_;
  bool integral_ = true;
};

/// Builds a graph whose node count is one more than the largest endpoint.
Graph build_graph(std::vector<Edge> edges);

/// Symmetric |V| x |V| matrix of shortest-path lengths.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(int n) : n_(n), dist_(static_cast<std::size_t>(n) * n, kInfinity) {}

  int size() const { return n_; }
  double operator()(NodeId a, NodeId b) const { return dist_[index(a, b)]; }
  double& at(NodeId a, NodeId b) { return dist_[index(a, b)]; }
  std::span<const double> row(NodeId a) const {
    return {dist_.data() + index(a, 0), static_cast<std::size_t>(n_)};
  }

 private:
  std::size_t index(NodeId a, NodeId b) const { return static_cast<std::size_t>(a) * n_ + b; }

  int n_ = 0;
  std::vector<double> dist_;
};

struct ShortestPathTree {
  std::vector<double> dist;
  std::vector<EdgeId> parent_edge;  // -1 at the source and unreached nodes

  /// Edge ids from the tree root to `target`, empty if unreachable.
  std::vector<EdgeId> path_to(const Graph& g, NodeId target) const;
};

struct DijkstraOptions {
  /// Per-edge costs replacing the weights; empty means use weights.
  std::span<const double> edge_cost;
  /// Nonzero entries mark edges that may not be used.
  std::span<const char> edge_removed;
  /// Nodes farther than this are left at infinity.
  double bound = kInfinity;
  /// Stop as soon as this node is settled (-1: settle everything).
  NodeId target = -1;
};

ShortestPathTree shortest_path_tree(const Graph& g, NodeId source, const DijkstraOptions& opts = {});

/// Single-source distances; unreachable nodes get kInfinity.
std::vector<double> dijkstra(const Graph& g, NodeId source, std::span<const double> edge_cost = {});

/// Repeated Dijkstra. Throws GraphError when the graph is disconnected.
DistanceMatrix all_pairs_distances(const Graph& g);

bool is_connected(const Graph& g);

struct MetricationResult {
  Graph graph;
  std::vector<EdgeId> removed;      // ids in the input graph
  std::vector<EdgeId> original_id;  // new edge id -> input edge id
};

/// Drops every edge strictly longer than the distance between its endpoints.
MetricationResult metricate(const Graph& g);
MetricationResult metricate(const Graph& g, const DistanceMatrix& dist);

struct TerminalPair {
  NodeId u = 0;
  NodeId v = 0;
  double distance = 0.0;
  double budget = 0.0;
};

enum class PairMode { kAdjacent, kAllPairs };

/// One pair per edge (kAdjacent) or per unordered node pair, with budget
/// alpha * d_G(u, v). Throws std::invalid_argument for alpha < 1.
std::vector<TerminalPair> build_terminal_pairs(const Graph& g, const DistanceMatrix& dist, double alpha,
                                               PairMode mode);

std::string to_string(PairMode mode);
PairMode parse_pair_mode(const std::string& text);

}  // namespace spanner
