#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "spanner/graph.hpp"
#include "spanner/heuristics.hpp"
#include "spanner/lp.hpp"
#include "spanner/solve.hpp"

namespace spanner {

struct AbOptions {
  bool fix_unreachable = true;
  bool fix_mandatory = true;
  bool bg_bound = true;
  bool metricate = true;
  PairMode pairs = PairMode::kAdjacent;
  /// Outflow right-hand side [i != v]; false uses the weaker constant 1.
  bool strong_outflow = true;
};

/// One fixed variable. Flow entries name the arc from -> to of `edge` for
/// terminal pair `pair`; edge-variable entries have pair == -1.
struct FixRecord {
  int pair = -1;
  EdgeId edge = -1;
  NodeId from = -1;
  NodeId to = -1;
  int value = 0;
  std::string reason;  // "unreachable" or "mandatory"
};

struct FlowVar {
  int pair = 0;
  EdgeId edge = 0;
  NodeId from = 0;
  NodeId to = 0;
  int var = 0;
};

/// Arc-based multicommodity-flow model. Edge ids refer to `graph` (the input
/// after optional metrication); `original_id` maps them back.
struct AbModel {
  Graph graph;
  std::vector<EdgeId> original_id;
  DistanceMatrix dist;
  double alpha = 1.0;
  std::vector<TerminalPair> pairs;

  lp::LinearProgram lp;
  std::vector<int> edge_var;
  std::vector<FlowVar> flows;
  std::vector<FixRecord> fixings;  // flow variables fixed to 0 are not created
  std::optional<SpannerSolution> bg;  // cutoff, ids in `graph`

  std::size_t flow_variables_total = 0;  // 2 |E| |K| before fixing
  std::size_t flow_fixed_zero = 0;
  std::size_t flow_fixed_one = 0;
  std::size_t edges_fixed_one = 0;
  double build_seconds = 0.0;
  double fixing_seconds = 0.0;
};

/// Throws std::invalid_argument for alpha < 1.
AbModel build_ab_model(const Graph& g, double alpha, const AbOptions& options = {});

struct AbLimits {
  double time_limit = std::numeric_limits<double>::infinity();
  std::size_t node_limit = std::numeric_limits<std::size_t>::max();
  lp::PricingRule lp_pricing = lp::PricingRule::kDevex;
};

/// LP relaxation of the model as built.
lp::LpSolution solve_ab_root(AbModel& model);

/// Best-first branch and bound: fractional edge variables first, then
/// fractional flows. `g` is the graph passed to build_ab_model.
SolveResult solve_ab(AbModel& model, const Graph& g, const AbLimits& limits = {});

void export_lp(const AbModel& model, const std::filesystem::path& path);

/// JSON text listing every fixed variable with its reason, plus timings.
std::string fixing_ledger_json(const AbModel& model);

}  // namespace spanner
