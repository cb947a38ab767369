#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "spanner/lp.hpp"

namespace spanner::testing {

/// Empty string when `sol` is a valid optimality certificate for `lp`.
inline std::string certificate_error(const lp::LinearProgram& lp, const lp::LpSolution& sol) {
  using lp::Sense;
  const int n = lp.num_variables(), m = lp.num_rows();
  if (static_cast<int>(sol.primal.size()) != n || static_cast<int>(sol.dual.size()) != m) return "size mismatch";
  const auto rows = lp.row_terms();
  double primal_obj = 0.0, dual_obj = 0.0;
  for (int i = 0; i < m; ++i) {
    double act = 0.0;
    for (const auto& t : rows[i]) act += t.value * sol.primal[t.index];
    const double tol = 1e-7 * (1.0 + std::abs(lp.rhs(i)));
    const double y = sol.dual[i];
    if (lp.sense(i) != Sense::kGreaterEqual && act > lp.rhs(i) + tol) return "row " + std::to_string(i) + " above rhs";
    if (lp.sense(i) != Sense::kLessEqual && act < lp.rhs(i) - tol) return "row " + std::to_string(i) + " below rhs";
    if (lp.sense(i) == Sense::kGreaterEqual && y < -1e-7) return "negative dual on >= row";
    if (lp.sense(i) == Sense::kLessEqual && y > 1e-7) return "positive dual on <= row";
    if (std::abs(y) * std::abs(act - lp.rhs(i)) > 1e-6 * (1.0 + std::abs(y))) return "row slackness";
    dual_obj += y * lp.rhs(i);
  }
  for (int j = 0; j < n; ++j) {
    const double x = sol.primal[j], lo = lp.lower(j), hi = lp.upper(j);
    if (x < lo - 1e-7 || x > hi + 1e-7) return "variable " + std::to_string(j) + " out of bounds";
    double d = lp.cost(j);
    for (const auto& t : lp.column(j)) d -= sol.dual[t.index] * t.value;
    if (d > 1e-7) {
      if (!std::isfinite(lo)) return "unbounded direction";
      if (std::abs(x - lo) * d > 1e-6) return "column slackness at lower";
      dual_obj += d * lo;
    } else if (d < -1e-7) {
      if (!std::isfinite(hi)) return "unbounded direction";
      if (std::abs(x - hi) * -d > 1e-6) return "column slackness at upper";
      dual_obj += d * hi;
    }
    primal_obj += lp.cost(j) * x;
  }
  if (std::abs(primal_obj - sol.objective) > 1e-6 * (1.0 + std::abs(primal_obj))) return "objective mismatch";
  if (std::abs(primal_obj - dual_obj) > 1e-6 * (1.0 + std::abs(primal_obj))) return "duality gap";
  return {};
}

}  // namespace spanner::testing
