#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "spanner/graph.hpp"

namespace spanner {

/// A simple u-v path, edges listed from pair.u to pair.v.
struct PathColumn {
  TerminalPair pair;
  std::vector<EdgeId> edges;
  double weight = 0.0;
};

/// Orders by weight, then by the edge-id sequence.
bool path_less(const PathColumn& a, const PathColumn& b);

/// Nodes visited by `path`, starting at path.pair.u.
std::vector<NodeId> path_nodes(const Graph& g, const PathColumn& path);

class PathOverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The k shortest simple u-v paths no longer than pair.budget, in path_less
/// order. A* search guided by the exact distance to pair.v from `dist`.
std::vector<PathColumn> k_shortest_bounded(const Graph& g, const DistanceMatrix& dist, const TerminalPair& pair,
                                           std::size_t k);

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

/// Every simple u-v path within budget, in path_less order. Throws
/// PathOverflowError once more than `cap` paths exist.
std::vector<PathColumn> enumerate_all_bounded(const Graph& g, const DistanceMatrix& dist, const TerminalPair& pair,
                                              std::size_t cap = kDefaultEnumerationCap);

/// The only budget-feasible u-v path, if there is exactly one.
std::optional<PathColumn> unique_path_detect(const Graph& g, const DistanceMatrix& dist, const TerminalPair& pair);

}  // namespace spanner
