#include "spanner/pricing.hpp"

#include <algorithm>
#include <queue>

namespace spanner {

namespace {

struct Label {
  NodeId node;
  EdgeId via;
  int parent;
  double cost;
  double weight;
};

// Weight distances from `source`, taken from the matrix when available.
std::vector<double> weight_bounds(const Graph& g, NodeId source, const DistanceMatrix* dist) {
  if (dist != nullptr) {
    const auto row = dist->row(source);
    return {row.begin(), row.end()};
  }
  return dijkstra(g, source);
}

std::vector<EdgeId> trace(const std::vector<Label>& labels, int index) {
  std::vector<EdgeId> edges;
  for (; labels[index].parent >= 0; index = labels[index].parent) edges.push_back(labels[index].via);
  return edges;
}

// Recomputes cost and weight by summing along the path from u to v.
FrontEntry make_entry(const Graph& g, const PricingProblem& p, std::vector<EdgeId> edges) {
  FrontEntry entry;
  for (EdgeId e : edges) {
    entry.cost += p.edge_cost[e];
    entry.weight += g.weight(e);
  }
  entry.path = PathColumn{p.pair, std::move(edges), entry.weight};
  return entry;
}

bool is_simple(const Graph& g, const PathColumn& path) {
  auto nodes = path_nodes(g, path);
  std::sort(nodes.begin(), nodes.end());
  return std::adjacent_find(nodes.begin(), nodes.end()) == nodes.end();
}

}  // namespace

std::optional<FrontEntry> basic_csp(const Graph& g, const PricingProblem& p, const DistanceMatrix* dist,
                                    PricingCounters* counters) {
  const NodeId source = p.pair.u;
  const NodeId target = p.pair.v;
  const auto cost_to_target = dijkstra(g, target, p.edge_cost);
  const auto weight_to_target = weight_bounds(g, target, dist);
  if (!(cost_to_target[source] < p.cost_cap) || !within_budget(weight_to_target[source], p.pair.budget))
    return std::nullopt;

  std::vector<Label> labels{{source, -1, -1, 0.0, 0.0}};
  // Labels are processed in (cost, weight) order, so a node's processed
  // labels dominate a newcomer iff their smallest weight is <= its weight.
  std::vector<double> min_weight(g.node_count(), kInfinity);
  struct Entry {
    double cost, weight;
    int index;
    bool operator>(const Entry& o) const {
      if (cost != o.cost) return cost > o.cost;
      if (weight != o.weight) return weight > o.weight;
      return index > o.index;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  open.push({0.0, 0.0, 0});
  PricingCounters local;
  local.labels_created = 1;

  std::optional<FrontEntry> result;
  while (!open.empty()) {
    const Entry top = open.top();
    open.pop();
    const Label label = labels[top.index];
    if (label.weight >= min_weight[label.node]) continue;
    min_weight[label.node] = label.weight;
    ++local.labels_processed;
    if (label.node == target) {
      auto edges = trace(labels, top.index);
      std::reverse(edges.begin(), edges.end());
      result = make_entry(g, p, std::move(edges));
      break;
    }
    for (const Arc& arc : g.arcs(label.node)) {
      const double cost = label.cost + p.edge_cost[arc.edge];
      const double weight = label.weight + g.weight(arc.edge);
      if (!(cost + cost_to_target[arc.head] < p.cost_cap)) continue;
      if (!within_budget(weight + weight_to_target[arc.head], p.pair.budget)) continue;
      if (weight >= min_weight[arc.head]) continue;
      labels.push_back({arc.head, arc.edge, top.index, cost, weight});
      open.push({cost, weight, static_cast<int>(labels.size()) - 1});
      ++local.labels_created;
    }
  }
  if (counters != nullptr) {
    counters->labels_created += local.labels_created;
    counters->labels_processed += local.labels_processed;
  }
  return result;
}

ParetoFront bi_a_star_mu(const Graph& g, const PricingProblem& p, const DistanceMatrix* dist,
                         PricingCounters* counters) {
  ParetoFront front;
  if (p.mu == 0) return front;
  const NodeId source = p.pair.u;
  const NodeId target = p.pair.v;
  const int n = g.node_count();

  // Lower bounds: index 0 = forward search (towards target), 1 = backward.
  const std::vector<double> cost_lb[2] = {dijkstra(g, target, p.edge_cost), dijkstra(g, source, p.edge_cost)};
  const std::vector<double> weight_lb[2] = {weight_bounds(g, target, dist), weight_bounds(g, source, dist)};
  if (!(cost_lb[0][source] < p.cost_cap) || !within_budget(weight_lb[0][source], p.pair.budget)) return front;

  // Each direction only extends labels up to half the budget; every feasible
  // path then has a node where a forward and a backward label meet.
  const double half = 0.5 * p.pair.budget * (1.0 + kLengthTolerance) + kLengthTolerance;

  std::vector<Label> labels[2];
  std::vector<std::vector<int>> processed[2] = {std::vector<std::vector<int>>(n), std::vector<std::vector<int>>(n)};
  std::vector<double> min_weight[2] = {std::vector<double>(n, kInfinity), std::vector<double>(n, kInfinity)};

  struct Join {
    int forward, backward;
  };
  std::vector<Join> joins;

  struct Entry {
    double cost, weight;  // estimated totals; exact for joined entries
    int kind;             // 0 forward, 1 backward, 2 joined
    int index;
    long seq;
    bool operator>(const Entry& o) const {
      if (cost != o.cost) return cost > o.cost;
      if (weight != o.weight) return weight > o.weight;
      // Labels before joins of equal key: a join is only final once every
      // label that could produce an equal-or-better path is settled.
      if ((kind == 2) != (o.kind == 2)) return kind == 2;
      return seq > o.seq;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  long seq = 0;
  PricingCounters local;

  double best_weight = kInfinity;  // weight of the last accepted front point

  auto push_label = [&](int dir, Label label) {
    const double est_cost = label.cost + cost_lb[dir][label.node];
    const double est_weight = label.weight + weight_lb[dir][label.node];
    if (!(est_cost < p.cost_cap) || !within_budget(est_weight, p.pair.budget)) return;
    if (!(est_weight < best_weight) || label.weight >= min_weight[dir][label.node]) return;
    labels[dir].push_back(label);
    open.push({est_cost, est_weight, dir, static_cast<int>(labels[dir].size()) - 1, seq++});
    ++local.labels_created;
  };

  push_label(0, {source, -1, -1, 0.0, 0.0});
  push_label(1, {target, -1, -1, 0.0, 0.0});

  while (!open.empty()) {
    const Entry top = open.top();
    open.pop();
    if (!(top.cost < p.cost_cap)) break;
    // Anything settled from here on costs at least as much as the last front
    // point, so it must weigh strictly less to be non-dominated.
    if (!(top.weight < best_weight)) continue;

    if (top.kind == 2) {
      const Join& join = joins[top.index];
      auto edges = trace(labels[0], join.forward);
      std::reverse(edges.begin(), edges.end());
      const auto tail = trace(labels[1], join.backward);
      edges.insert(edges.end(), tail.begin(), tail.end());
      FrontEntry entry = make_entry(g, p, std::move(edges));
      if (!is_simple(g, entry.path)) continue;  // a cheaper simple path was already accepted
      // Join keys sum the two halves separately; the entry's own sums decide
      // dominance so the same path met at two nodes is reported once.
      if (!front.empty() && !(entry.weight < front.back().weight)) continue;
      while (!front.empty() && !(front.back().cost < entry.cost)) front.pop_back();
      best_weight = std::min(top.weight, entry.weight);
      front.push_back(std::move(entry));
      if (front.size() >= p.mu) break;
      continue;
    }

    const int dir = top.kind;
    const Label label = labels[dir][top.index];
    if (label.weight >= min_weight[dir][label.node]) continue;
    min_weight[dir][label.node] = label.weight;
    processed[dir][label.node].push_back(top.index);
    ++local.labels_processed;

    for (int other : processed[1 - dir][label.node]) {
      const Label& o = labels[1 - dir][other];
      const double cost = label.cost + o.cost;
      const double weight = label.weight + o.weight;
      if (!(cost < p.cost_cap) || !within_budget(weight, p.pair.budget) || !(weight < best_weight)) continue;
      joins.push_back(dir == 0 ? Join{top.index, other} : Join{other, top.index});
      open.push({cost, weight, 2, static_cast<int>(joins.size()) - 1, seq++});
      ++local.joins;
    }

    // A forward label at the target (backward at the source) only closes paths.
    if (label.node == (dir == 0 ? target : source) || label.weight > half) continue;
    const NodeId came_from = label.parent >= 0 ? labels[dir][label.parent].node : -1;
    for (const Arc& arc : g.arcs(label.node)) {
      if (arc.head == came_from) continue;
      push_label(dir, {arc.head, arc.edge, top.index, label.cost + p.edge_cost[arc.edge],
                       label.weight + g.weight(arc.edge)});
    }
  }
  if (counters != nullptr) {
    counters->labels_created += local.labels_created;
    counters->labels_processed += local.labels_processed;
    counters->joins += local.joins;
  }
  return front;
}

CacheDecision PricingCache::check(std::size_t pair_index, const PricingProblem& problem) const {
  if (pair_index >= entries_.size() || !entries_[pair_index].valid) return CacheDecision::kRun;
  const Entry& entry = entries_[pair_index];
  if (problem.cost_cap > entry.cost_cap) return CacheDecision::kRun;
  // Edges absent from the snapshot had cost 0, which nothing can undercut.
  for (const auto& [edge, cost] : entry.costs)
    if (problem.edge_cost[edge] < cost) return CacheDecision::kRun;
  return CacheDecision::kPrune;
}

void PricingCache::store(std::size_t pair_index, const PricingProblem& problem) {
  if (pair_index >= entries_.size()) entries_.resize(pair_index + 1);
  Entry& entry = entries_[pair_index];
  entry.valid = true;
  entry.cost_cap = problem.cost_cap;
  entry.costs.clear();
  for (EdgeId e = 0; e < static_cast<EdgeId>(problem.edge_cost.size()); ++e)
    if (problem.edge_cost[e] != 0.0) entry.costs.emplace_back(e, problem.edge_cost[e]);
}

void PricingCache::clear() {
  for (Entry& entry : entries_) {
    entry.valid = false;
    entry.costs.clear();
  }
}

std::size_t PricingCache::stored_entries() const {
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [](const Entry& e) { return e.valid; }));
}

}  // namespace spanner
