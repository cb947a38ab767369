#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "spanner/graph.hpp"
#include "spanner/heuristics.hpp"
#include "spanner/lp.hpp"
#include "spanner/paths.hpp"
#include "spanner/pricing.hpp"
#include "spanner/solve.hpp"

namespace spanner {

enum class InitStrategy { kKsp1, kKspBg, kBruteForce };
enum class PricerKind { kBasic, kBidirectional };

std::string to_string(InitStrategy s);
std::string to_string(PricerKind p);
InitStrategy parse_init_strategy(const std::string& text);
PricerKind parse_pricer(const std::string& text);

struct PbConfig {
  InitStrategy init = InitStrategy::kKspBg;
  std::size_t k = 10;
  std::size_t mu = 3;  // kUnlimitedColumns for the whole front
  PricerKind pricer = PricerKind::kBidirectional;
  bool prune = true;
  PairMode pairs = PairMode::kAdjacent;
  bool metricate = true;
  bool fix_mandatory = true;
  double time_limit = std::numeric_limits<double>::infinity();
  std::size_t node_limit = std::numeric_limits<std::size_t>::max();
  std::size_t cg_round_limit = 100000;
  /// Test mode: run every pricing call the cache would prune and count the
  /// runs that still return a column.
  bool force_pruned = false;
  lp::PricingRule lp_pricing = lp::PricingRule::kDevex;
};

struct RmpColumn {
  PathColumn path;
  int pair = 0;
  int var = 0;
};

/// Restricted master problem. Edge ids refer to `graph`, which is the input
/// graph after optional metrication; `original_id` maps them back.
struct RmpState {
  Graph graph;
  std::vector<EdgeId> original_id;
  DistanceMatrix dist;
  double alpha = 1.0;
  std::vector<TerminalPair> pairs;

  lp::LinearProgram lp;
  std::vector<int> edge_var;
  std::vector<int> pair_row;
  std::vector<std::unordered_map<EdgeId, int>> edge_rows;  // per pair: edge -> row
  std::vector<RmpColumn> columns;
  std::vector<std::vector<int>> pair_columns;  // indices into columns
  std::vector<std::set<std::vector<EdgeId>>> known_paths;

  /// Pairs whose feasible path set is a single path, already fixed in.
  std::vector<char> pair_fixed;
  /// Bounds of the edge variables outside any branching decision.
  std::vector<double> base_lo, base_hi;
  /// Pairs with exactly one feasible path, when known from initialization.
  std::vector<std::optional<bool>> unique_known;

  std::optional<SpannerSolution> incumbent;  // ids in `graph`
  std::size_t initial_columns = 0;

  /// Adds a column for `pair` unless the same edge sequence is present.
  /// Creates the missing (edge, pair) rows. Returns the column index.
  std::optional<int> add_column(int pair, const PathColumn& path);
};

struct DualSolution {
  std::vector<double> sigma;                                  // per pair, >= 0
  std::vector<std::vector<std::pair<EdgeId, double>>> pi;     // per pair, sparse, > 0
};

/// Builds the RMP: metrication and pair set per `config`, seed columns per
/// the init strategy, objective sum w_e x_e with x_e in [0, 1].
RmpState initialize_rmp(const Graph& g, double alpha, const PbConfig& config);

/// Fixes y_P and every x_e on P to 1 for pairs whose feasible path set is a
/// single path P. Returns the number of pairs fixed.
std::size_t fix_mandatory(RmpState& state);

/// sigma from the pair rows and pi = -dual of the edge rows, both clamped at 0.
DualSolution extract_duals(const RmpState& state, const lp::LpSolution& solution);

/// One pricing round over all pairs. Edges in `local_zero` get cost sigma so
/// no returned path uses them. Returns the number of columns added.
std::size_t price_all(RmpState& state, const DualSolution& duals, PricingCache& cache, const PbConfig& config,
                      std::span<const EdgeId> local_zero, SolveStats& stats);

struct RootResult {
  bool converged = false;
  double value = 0.0;
  DualSolution duals;
  lp::LpSolution lp;
};

/// Column generation at the root until no pair prices out.
RootResult solve_root(RmpState& state, const PbConfig& config, SolveStats& stats);

/// Every feasible path, over all pairs, with sum(pi) < sigma - 1e-6. Paths
/// of pairs fixed by fix_mandatory are skipped: their only path is in the
/// RMP at value 1.
std::vector<PathColumn> check_dual_feasibility_exhaustive(const RmpState& state, const DualSolution& duals);

/// Best-first branch and price on the edge variables.
SolveResult branch_and_price(const Graph& g, double alpha, const PbConfig& config = {});

}  // namespace spanner
