#pragma once

#include <optional>
#include <span>
#include <vector>

#include "spanner/graph.hpp"

namespace spanner {

struct SpannerSolution {
  std::vector<EdgeId> edge_ids;  // sorted ascending
  double total_weight = 0.0;
  std::optional<double> feasible_for_alpha;
};

SpannerSolution make_solution(const Graph& g, std::vector<EdgeId> edge_ids);

/// Basic Greedy: scan edges by (weight, id); keep {u,v} iff the partial
/// spanner has d_H(u,v) > alpha * w_uv.
SpannerSolution basic_greedy(const Graph& g, double alpha);

struct VerifyResult {
  bool feasible = false;
  NodeId worst_u = -1;
  NodeId worst_v = -1;
  double worst_ratio = 0.0;  // d_H / d_G, infinity when disconnected
};

/// Checks d_H(u,v) <= alpha * d_G(u,v) over the pairs selected by `mode`.
VerifyResult verify_spanner(const Graph& g, double alpha, std::span<const EdgeId> edge_ids, PairMode mode);
VerifyResult verify_spanner(const Graph& g, const DistanceMatrix& dist, double alpha,
                            std::span<const EdgeId> edge_ids, PairMode mode);

/// 100 * (heuristic - reference) / reference. Throws for reference <= 0.
double gap_percent(double heuristic_weight, double reference_bound);

}  // namespace spanner
