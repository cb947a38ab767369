#pragma once

#include <chrono>
#include <cstddef>
#include <limits>
#include <string>

#include "spanner/heuristics.hpp"

namespace spanner {

enum class SolveStatus { kOptimal, kBoundOnly, kInfeasible };

std::string to_string(SolveStatus status);

struct SolveStats {
  // column generation (PB)
  std::size_t initial_columns = 0;
  std::size_t columns_generated = 0;
  std::size_t free_columns = 0;  // generated columns with dual cost 0
  std::size_t pricing_calls = 0;  // executed pricing runs
  std::size_t pruned_calls = 0;   // runs skipped by the pricing cache
  std::size_t pruned_violations = 0;  // test mode: pruned runs that found a column
  std::size_t duplicate_columns = 0;
  std::size_t cg_rounds = 0;
  std::size_t repair_columns = 0;
  std::size_t fixed_pairs = 0;
  std::size_t fixed_edges = 0;
  // model size (AB)
  std::size_t flow_variables_total = 0;  // before fixing
  std::size_t flow_variables = 0;        // created in the model
  std::size_t flow_fixed_zero = 0;
  std::size_t flow_fixed_one = 0;
  std::size_t rows = 0;
  // shared
  std::size_t bb_nodes = 0;
  long lp_iterations = 0;
  double root_lp = std::numeric_limits<double>::quiet_NaN();
  double setup_seconds = 0.0;
  double fixing_seconds = 0.0;
  double wall_seconds = 0.0;
};

struct SolveResult {
  SpannerSolution best;  // edge ids refer to the input graph
  double primal_bound = std::numeric_limits<double>::infinity();
  double dual_bound = 0.0;
  SolveStatus status = SolveStatus::kBoundOnly;
  SolveStats stats;
};

/// Cooperative wall-clock deadline.
class Deadline {
 public:
  explicit Deadline(double seconds);
  bool expired() const;
  double elapsed() const;

 private:
  std::chrono::steady_clock::time_point start_;
  double seconds_;
};

/// Pruning test shared by both branch-and-bound drivers. With integral
/// weights every feasible value is an integer, so the bound is rounded up.
bool bound_prunes(double node_bound, double incumbent, bool integral_weights);

}  // namespace spanner
