#pragma once

#include <stdexcept>

#include "spanner/graph.hpp"
#include "spanner/heuristics.hpp"

namespace spanner {

class OracleSizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kOracleMaxNodes = 16;
inline constexpr int kOracleMaxEdges = 40;

/// Minimum-weight alpha-spanner over all pairs by exhaustive search over edge
/// subsets. Distances come from Floyd-Warshall, independent of the library's
/// Dijkstra. Throws OracleSizeError beyond the size caps.
SpannerSolution oracle_optimum(const Graph& g, double alpha);

}  // namespace spanner
