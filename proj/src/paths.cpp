#include "spanner/paths.hpp"

#include <algorithm>
#include <queue>

namespace spanner {

bool path_less(const PathColumn& a, const PathColumn& b) {
  if (a.weight != b.weight) return a.weight < b.weight;
  return a.edges < b.edges;
}

std::vector<NodeId> path_nodes(const Graph& g, const PathColumn& path) {
  std::vector<NodeId> nodes{path.pair.u};
  for (EdgeId e : path.edges) nodes.push_back(g.other_end(e, nodes.back()));
  return nodes;
}

namespace {

struct SearchLabel {
  NodeId node;
  EdgeId via;  // edge used to reach node, -1 at the root
  int parent;
  double weight;
};

bool on_path(const std::vector<SearchLabel>& labels, int index, NodeId node) {
  for (; index >= 0; index = labels[index].parent)
    if (labels[index].node == node) return true;
  return false;
}

PathColumn extract(const std::vector<SearchLabel>& labels, int index, const TerminalPair& pair) {
  PathColumn path{pair, {}, labels[index].weight};
  for (; labels[index].parent >= 0; index = labels[index].parent) path.edges.push_back(labels[index].via);
  std::reverse(path.edges.begin(), path.edges.end());
  return path;
}

}  // namespace

std::vector<PathColumn> k_shortest_bounded(const Graph& g, const DistanceMatrix& dist, const TerminalPair& pair,
                                           std::size_t k) {
  std::vector<PathColumn> found;
  if (k == 0) return found;
  const auto to_target = dist.row(pair.v);

  std::vector<SearchLabel> labels{{pair.u, -1, -1, 0.0}};
  using Entry = std::pair<double, int>;  // (weight + lower bound, label)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  if (within_budget(to_target[pair.u], pair.budget)) open.emplace(to_target[pair.u], 0);

  // Once k paths are known, keep settling labels that can still tie the k-th
  // weight so that equal-weight paths are ordered by edge sequence.
  double cutoff = kInfinity;
  while (!open.empty()) {
    const auto [estimate, index] = open.top();
    if (estimate > cutoff) break;
    open.pop();
    const SearchLabel label = labels[index];
    if (label.node == pair.v) {
      found.push_back(extract(labels, index, pair));
      if (found.size() == k) cutoff = label.weight;
      continue;
    }
    for (const Arc& arc : g.arcs(label.node)) {
      const double weight = label.weight + g.weight(arc.edge);
      const double bound = weight + to_target[arc.head];
      if (!within_budget(bound, pair.budget) || bound > cutoff) continue;
      if (on_path(labels, index, arc.head)) continue;
      labels.push_back({arc.head, arc.edge, index, weight});
      open.emplace(bound, static_cast<int>(labels.size()) - 1);
    }
  }
  std::sort(found.begin(), found.end(), path_less);
  if (found.size() > k) found.resize(k);
  return found;
}

std::vector<PathColumn> enumerate_all_bounded(const Graph& g, const DistanceMatrix& dist, const TerminalPair& pair,
                                              std::size_t cap) {
  std::vector<PathColumn> found;
  const auto to_target = dist.row(pair.v);
  std::vector<char> visited(g.node_count(), 0);
  std::vector<EdgeId> stack;

  auto dfs = [&](auto&& self, NodeId node, double weight) -> void {
    if (node == pair.v) {
      if (found.size() == cap)
        throw PathOverflowError("more than " + std::to_string(cap) + " bounded paths between " +
                                std::to_string(pair.u) + " and " + std::to_string(pair.v));
      found.push_back({pair, stack, weight});
      return;
    }
    visited[node] = 1;
    for (const Arc& arc : g.arcs(node)) {
      if (visited[arc.head]) continue;
      const double w = weight + g.weight(arc.edge);
      if (!within_budget(w + to_target[arc.head], pair.budget)) continue;
      stack.push_back(arc.edge);
      self(self, arc.head, w);
      stack.pop_back();
    }
    visited[node] = 0;
  };
  if (within_budget(to_target[pair.u], pair.budget)) dfs(dfs, pair.u, 0.0);
  std::sort(found.begin(), found.end(), path_less);
  return found;
}

std::optional<PathColumn> unique_path_detect(const Graph& g, const DistanceMatrix& dist, const TerminalPair& pair) {
  auto paths = k_shortest_bounded(g, dist, pair, 2);
  if (paths.size() != 1) return std::nullopt;
  return std::move(paths.front());
}

}  // namespace spanner
