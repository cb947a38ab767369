#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "spanner/graph.hpp"
#include "spanner/paths.hpp"

namespace spanner {

inline constexpr std::size_t kUnlimitedColumns = std::numeric_limits<std::size_t>::max();

/// Constrained shortest path instance for one terminal pair: find u-v paths
/// with sum(edge_cost) < cost_cap and sum(weight) <= pair.budget.
struct PricingProblem {
  TerminalPair pair;
  std::vector<double> edge_cost;  // one entry per edge, all >= 0
  double cost_cap = 0.0;
  std::size_t mu = 1;  // kUnlimitedColumns asks for the whole Pareto front
};

struct FrontEntry {
  double cost = 0.0;
  double weight = 0.0;
  PathColumn path;
};

/// Strictly increasing in cost, strictly decreasing in weight.
using ParetoFront = std::vector<FrontEntry>;

struct PricingCounters {
  std::size_t labels_created = 0;
  std::size_t labels_processed = 0;
  std::size_t joins = 0;
};

/// Unidirectional label setting: the minimum-cost feasible path (ties by
/// weight), or nothing if no path beats the cap. Ignores problem.mu.
/// `dist` supplies weight lower bounds; it is computed when null.
std::optional<FrontEntry> basic_csp(const Graph& g, const PricingProblem& problem,
                                    const DistanceMatrix* dist = nullptr, PricingCounters* counters = nullptr);

/// Bidirectional A* label setting continued past the first hit: returns the
/// problem.mu cheapest points of the Pareto front, each with one path.
ParetoFront bi_a_star_mu(const Graph& g, const PricingProblem& problem, const DistanceMatrix* dist = nullptr,
                         PricingCounters* counters = nullptr);

enum class CacheDecision { kPrune, kRun };

/// Remembers, per terminal pair, the last pricing problem that produced no
/// column. A later problem with no larger cap and no smaller edge cost has
/// no improving path either.
class PricingCache {
 public:
  explicit PricingCache(std::size_t pair_count = 0) : entries_(pair_count) {}

  CacheDecision check(std::size_t pair_index, const PricingProblem& problem) const;
  void store(std::size_t pair_index, const PricingProblem& problem);
  void clear();
  void resize(std::size_t pair_count) { entries_.resize(pair_count); }
  std::size_t stored_entries() const;

 private:
  struct Entry {
    bool valid = false;
    double cost_cap = 0.0;
    std::vector<std::pair<EdgeId, double>> costs;  // nonzero entries only
  };
  std::vector<Entry> entries_;
};

}  // namespace spanner
