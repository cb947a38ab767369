#include "spanner/oracle.hpp"

#include <algorithm>
#include <numeric>

namespace spanner {

namespace {

class Search {
 public:
  Search(const Graph& g, double alpha) : g_(g), n_(g.node_count()), alpha_(alpha) {
    order_.resize(g.edge_count());
    std::iota(order_.begin(), order_.end(), 0);
    // heavy edges first: dropping them early finds light spanners quickly
    std::stable_sort(order_.begin(), order_.end(), [&](EdgeId a, EdgeId b) { return g.weight(a) > g.weight(b); });
    removed_.assign(g.edge_count(), 0);
    target_ = floyd_warshall();
    for (double& d : target_) d *= alpha_;
  }

  SpannerSolution run() {
    best_weight_ = g_.total_weight();
    best_removed_ = removed_;
    dfs(0, 0.0);
    std::vector<EdgeId> ids;
    for (EdgeId e = 0; e < g_.edge_count(); ++e)
      if (!best_removed_[e]) ids.push_back(e);
    SpannerSolution s = make_solution(g_, std::move(ids));
    s.feasible_for_alpha = alpha_;
    return s;
  }

 private:
  std::vector<double> floyd_warshall() const {
    std::vector<double> d(static_cast<std::size_t>(n_) * n_, kInfinity);
    for (int i = 0; i < n_; ++i) d[i * n_ + i] = 0.0;
    for (EdgeId e = 0; e < g_.edge_count(); ++e) {
      if (removed_[e]) continue;
      const Edge& ed = g_.edge(e);
      d[ed.u * n_ + ed.v] = std::min(d[ed.u * n_ + ed.v], ed.weight);
      d[ed.v * n_ + ed.u] = std::min(d[ed.v * n_ + ed.u], ed.weight);
    }
    for (int k = 0; k < n_; ++k)
      for (int i = 0; i < n_; ++i) {
        const double dik = d[i * n_ + k];
        if (dik == kInfinity) continue;
        for (int j = 0; j < n_; ++j) d[i * n_ + j] = std::min(d[i * n_ + j], dik + d[k * n_ + j]);
      }
    return d;
  }

  bool feasible() const {
    const std::vector<double> d = floyd_warshall();
    for (std::size_t i = 0; i < d.size(); ++i)
      if (!within_budget(d[i], target_[i])) return false;
    return true;
  }

  // kept: weight of edges decided to stay. Undecided edges are still present.
  void dfs(std::size_t depth, double kept) {
    if (kept >= best_weight_) return;
    if (depth == order_.size()) {
      best_weight_ = kept;
      best_removed_ = removed_;
      return;
    }
    const EdgeId e = order_[depth];
    removed_[e] = 1;
    if (feasible()) dfs(depth + 1, kept);
    removed_[e] = 0;
    dfs(depth + 1, kept + g_.weight(e));
  }

  const Graph& g_;
  int n_;
  double alpha_;
  std::vector<EdgeId> order_;
  std::vector<char> removed_;
  std::vector<double> target_;
  double best_weight_ = kInfinity;
  std::vector<char> best_removed_;
};

}  // namespace

SpannerSolution oracle_optimum(const Graph& g, double alpha) {
  if (g.node_count() > kOracleMaxNodes || g.edge_count() > kOracleMaxEdges)
    throw OracleSizeError("oracle limited to " + std::to_string(kOracleMaxNodes) + " nodes and " +
                          std::to_string(kOracleMaxEdges) + " edges");
  if (alpha < 1.0) throw std::invalid_argument("alpha must be at least 1");
  if (!is_connected(g)) throw GraphError("graph is disconnected");
  return Search(g, alpha).run();
}

}  // namespace spanner
