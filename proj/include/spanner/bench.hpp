#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spanner/ab_solver.hpp"
#include "spanner/instances.hpp"
#include "spanner/pb_solver.hpp"

namespace spanner {

enum class SolverKind { kPb, kAb, kBg, kOracle };

std::string to_string(SolverKind s);
SolverKind parse_solver(const std::string& text);

/// Ablation label for a PB configuration, e.g. "PB_noPrune_noM".
std::string pb_variant_name(const PbConfig& config);

struct RunConfig {
  SolverKind solver = SolverKind::kPb;
  double alpha = 2.0;
  PbConfig pb;          // pairs, metricate, fixing and limits also drive AB
  bool prune_by_bg = true;  // AB objective cutoff
};

struct RunRecord {
  nlohmann::ordered_json instance;  // provenance: metadata of the instance
  std::string solver;
  std::string variant;
  RunConfig config;
  double alpha = 0.0;
  SolveStatus status = SolveStatus::kOptimal;
  double primal_bound = 0.0;
  std::optional<double> dual_bound;
  std::optional<double> gap_percent;
  double wall_seconds = 0.0;
  SolveStats stats;
  std::vector<EdgeId> edges;  // input graph ids
};

/// Runs one solver on one instance. Throws std::invalid_argument for alpha < 1
/// and OracleSizeError beyond the oracle's caps.
RunRecord run_solver(const Instance& instance, const RunConfig& config);

/// Gap of `record` against `best_dual` when that bound is positive.
void set_gap(RunRecord& record, double best_dual);

nlohmann::ordered_json to_json(const RunRecord& record);

/// Instance metadata as JSON, falling back to the graph size.
nlohmann::ordered_json instance_provenance(const Instance& instance);

struct SuiteCase {
  Instance instance;
  double alpha = 2.0;
};

/// Small exact-comparison suite: ER with p = 0.5, n in [5, 10], weights
/// w1/euc/wn, alpha in {1.5, 2, 3} with w1 restricted to integral alpha.
std::vector<SuiteCase> small_oracle_suite(int count = 120, std::uint64_t seed = 1);

/// ER, average degree 4, wn weights, alpha = 2.
std::vector<SuiteCase> degree_suite(int n, int count, std::uint64_t seed);

/// Linear-interpolation quantile of unsorted values; NaN when empty.
double quantile(std::vector<double> values, double q);

/// CSV with count, optimal count, and median and IQR of wall time, gap, B&B
/// nodes, pruned share and free-path share per (family, n, weight, alpha,
/// variant). Records are JSON objects as produced by to_json.
void write_summary_csv(const std::vector<nlohmann::json>& records, std::ostream& out);

}  // namespace spanner
