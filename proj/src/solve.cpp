#include "spanner/solve.hpp"

#include <cmath>

namespace spanner {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kBoundOnly: return "bound_only";
    case SolveStatus::kInfeasible: return "infeasible";
  }
  return "?";
}

Deadline::Deadline(double seconds) : start_(std::chrono::steady_clock::now()), seconds_(seconds) {}

double Deadline::elapsed() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

bool Deadline::expired() const { return std::isfinite(seconds_) && elapsed() >= seconds_; }

bool bound_prunes(double node_bound, double incumbent, bool integral_weights) {
  if (!std::isfinite(incumbent)) return false;
  if (integral_weights) return std::ceil(node_bound - 1e-6) >= incumbent - 0.5;
  return node_bound >= incumbent - 1e-6 * (1.0 + std::abs(incumbent));
}

}  // namespace spanner
