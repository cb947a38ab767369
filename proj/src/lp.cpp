#include "spanner/lp.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace spanner::lp {

std::string to_string(Status status) {
  switch (status) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
    case Status::kIterationLimit: return "iteration_limit";
    case Status::kNumericalFailure: return "numerical_failure";
  }
  return "?";
}

int LinearProgram::add_variable(double cost, double lo, double hi, std::string name) {
  return add_column(cost, {}, lo, hi, std::move(name));
}

int LinearProgram::add_column(double cost, std::span<const Term> rows, double lo, double hi, std::string name) {
  if (lo > hi || std::isnan(lo) || std::isnan(hi)) throw LpError("variable bounds must satisfy lo <= hi");
  const int id = num_variables();
  std::vector<Term> entries;
  entries.reserve(rows.size());
  for (const Term& t : rows) {
    if (t.index < 0 || t.index >= num_rows()) throw LpError("column references missing row " + std::to_string(t.index));
    if (t.value != 0.0) entries.push_back(t);
  }
  std::sort(entries.begin(), entries.end(), [](const Term& a, const Term& b) { return a.index < b.index; });
  cost_.push_back(cost);
  lo_.push_back(lo);
  hi_.push_back(hi);
  orig_lo_.push_back(lo);
  orig_hi_.push_back(hi);
  integer_.push_back(0);
  var_name_.push_back(name.empty() ? "x" + std::to_string(id) : std::move(name));
  cols_.push_back(std::move(entries));
  col_state_.push_back(std::isfinite(lo) ? VarState::kAtLower
                       : std::isfinite(hi) ? VarState::kAtUpper
                                           : VarState::kAtZero);
  return id;
}

int LinearProgram::add_row(std::span<const Term> vars, Sense sense, double rhs, std::string name) {
  const int id = num_rows();
  for (const Term& t : vars)
    if (t.index < 0 || t.index >= num_variables())
      throw LpError("row references missing variable " + std::to_string(t.index));
  for (const Term& t : vars)
    if (t.value != 0.0) cols_[t.index].push_back({id, t.value});
  sense_.push_back(sense);
  rhs_.push_back(rhs);
  row_name_.push_back(name.empty() ? "r" + std::to_string(id) : std::move(name));
  row_state_.push_back(VarState::kBasic);
  return id;
}

void LinearProgram::set_bounds(int var, double lo, double hi) {
  if (var < 0 || var >= num_variables()) throw LpError("no such variable");
  if (lo > hi) throw LpError("variable bounds must satisfy lo <= hi");
  lo_[var] = lo;
  hi_[var] = hi;
}

void LinearProgram::fix_variable(int var, double value) {
  if (var < 0 || var >= num_variables()) throw LpError("no such variable");
  if (value < orig_lo_[var] || value > orig_hi_[var])
    throw LpError("fix value outside the bounds of " + var_name_[var]);
  lo_[var] = hi_[var] = value;
}

void LinearProgram::unfix_variable(int var) {
  if (var < 0 || var >= num_variables()) throw LpError("no such variable");
  lo_[var] = orig_lo_[var];
  hi_[var] = orig_hi_[var];
}

void LinearProgram::set_cost(int var, double cost) { cost_.at(var) = cost; }

void LinearProgram::set_integer(int var, bool integer) { integer_.at(var) = integer ? 1 : 0; }

std::size_t LinearProgram::num_nonzeros() const {
  std::size_t total = 0;
  for (const auto& c : cols_) total += c.size();
  return total;
}

std::vector<std::vector<Term>> LinearProgram::row_terms() const {
  std::vector<std::vector<Term>> rows(num_rows());
  for (int j = 0; j < num_variables(); ++j)
    for (const Term& t : cols_[j]) rows[t.index].push_back({j, t.value});
  return rows;
}

void LinearProgram::set_basis(const Basis& basis) {
  if (basis.columns.size() > col_state_.size() || basis.rows.size() > row_state_.size())
    throw LpError("basis does not match the model size");
  std::copy(basis.columns.begin(), basis.columns.end(), col_state_.begin());
  for (std::size_t j = basis.columns.size(); j < col_state_.size(); ++j)
    col_state_[j] = std::isfinite(lo_[j]) ? VarState::kAtLower
                    : std::isfinite(hi_[j]) ? VarState::kAtUpper
                                            : VarState::kAtZero;
  std::copy(basis.rows.begin(), basis.rows.end(), row_state_.begin());
  std::fill(row_state_.begin() + static_cast<std::ptrdiff_t>(basis.rows.size()), row_state_.end(), VarState::kBasic);
  has_basis_ = true;
}

void LinearProgram::reset_basis() {
  for (int j = 0; j < num_variables(); ++j)
    col_state_[j] = std::isfinite(lo_[j]) ? VarState::kAtLower
                    : std::isfinite(hi_[j]) ? VarState::kAtUpper
                                            : VarState::kAtZero;
  std::fill(row_state_.begin(), row_state_.end(), VarState::kBasic);
  has_basis_ = false;
}

// Bounded revised simplex on [A | -I] (x, s) = 0 where s holds the row
// activities with bounds derived from sense and rhs. Phase 1 minimizes the
// sum of bound violations of the basic variables.
class Simplex {
 public:
  Simplex(LinearProgram& lp, const SolveOptions& options) : lp_(lp), opt_(options) {}

  LpSolution run();

 private:
  static constexpr double kPrimalTol = 1e-9;
  static constexpr double kDualTol = 1e-9;
  static constexpr double kPivotTol = 1e-9;
  static constexpr std::size_t kRefactorInterval = 100;
  static constexpr int kDegenerateLimit = 300;

  struct Eta {
    int row;
    double pivot;
    std::vector<std::pair<int, double>> entries;  // off-pivot
  };

  template <class F>
  void for_column(int j, F&& f) const {
    if (j < n_) {
      for (const Term& t : lp_.cols_[j]) f(t.index, t.value);
    } else {
      f(j - n_, -1.0);
    }
  }

  double dot(const Eigen::VectorXd& y, int j) const {
    if (j >= n_) return -y[j - n_];
    double s = 0.0;
    for (const Term& t : lp_.cols_[j]) s += y[t.index] * t.value;
    return s;
  }

  void setup();
  void cold_basis();
  bool refactor();
  void compute_basic_values();
  Eigen::VectorXd ftran(int j) const;
  Eigen::VectorXd btran(Eigen::VectorXd c) const;
  double nonbasic_value(int j) const;
  LpSolution trivial_solve();
  LpSolution finish(Status status, long iterations);

  enum class DualOutcome { kPrimalFeasible, kInfeasible, kLimit, kFallback };
  /// Dual simplex from a dual feasible basis; leaves the basis primal
  /// feasible, proves infeasibility, or hands over to the primal loop.
  DualOutcome dual_phase(long& iterations, const std::chrono::steady_clock::time_point& start);
  bool out_of_time(long iterations, const std::chrono::steady_clock::time_point& start) const;

  LinearProgram& lp_;
  SolveOptions opt_;
  int n_ = 0, m_ = 0, total_ = 0;
  std::vector<double> lo_, hi_, cost_;
  std::vector<VarState> state_;
  std::vector<int> head_, pos_;
  std::vector<double> x_;
  std::vector<double> devex_;
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
};

void Simplex::setup() {
  n_ = lp_.num_variables();
  m_ = lp_.num_rows();
  total_ = n_ + m_;
  lo_.assign(total_, 0.0);
  hi_.assign(total_, 0.0);
  cost_.assign(total_, 0.0);
  for (int j = 0; j < n_; ++j) {
    lo_[j] = lp_.lo_[j];
    hi_[j] = lp_.hi_[j];
    cost_[j] = lp_.cost_[j];
  }
  for (int i = 0; i < m_; ++i) {
    const double b = lp_.rhs_[i];
    switch (lp_.sense_[i]) {
      case Sense::kLessEqual: lo_[n_ + i] = -kInf; hi_[n_ + i] = b; break;
      case Sense::kGreaterEqual: lo_[n_ + i] = b; hi_[n_ + i] = kInf; break;
      case Sense::kEqual: lo_[n_ + i] = hi_[n_ + i] = b; break;
    }
  }
  state_.resize(total_);
  std::copy(lp_.col_state_.begin(), lp_.col_state_.end(), state_.begin());
  std::copy(lp_.row_state_.begin(), lp_.row_state_.end(), state_.begin() + n_);

  int basic = 0;
  for (VarState s : state_) basic += s == VarState::kBasic;
  if (!opt_.warm_start || basic != m_) cold_basis();

  head_.clear();
  pos_.assign(total_, -1);
  for (int j = 0; j < total_; ++j) {
    if (state_[j] == VarState::kBasic) {
      pos_[j] = static_cast<int>(head_.size());
      head_.push_back(j);
    } else {
      // Keep nonbasic columns on a finite bound when one exists.
      if (state_[j] == VarState::kAtLower && !std::isfinite(lo_[j]))
        state_[j] = std::isfinite(hi_[j]) ? VarState::kAtUpper : VarState::kAtZero;
      else if (state_[j] == VarState::kAtUpper && !std::isfinite(hi_[j]))
        state_[j] = std::isfinite(lo_[j]) ? VarState::kAtLower : VarState::kAtZero;
      else if (state_[j] == VarState::kAtZero && (std::isfinite(lo_[j]) || std::isfinite(hi_[j])))
        state_[j] = std::isfinite(lo_[j]) ? VarState::kAtLower : VarState::kAtUpper;
    }
  }
  x_.assign(total_, 0.0);
  for (int j = 0; j < total_; ++j)
    if (state_[j] != VarState::kBasic) x_[j] = nonbasic_value(j);
  devex_.assign(total_, 1.0);
}

void Simplex::cold_basis() {
  for (int j = 0; j < n_; ++j)
    state_[j] = std::isfinite(lo_[j]) ? VarState::kAtLower
                : std::isfinite(hi_[j]) ? VarState::kAtUpper
                                        : VarState::kAtZero;
  for (int i = 0; i < m_; ++i) state_[n_ + i] = VarState::kBasic;
}

double Simplex::nonbasic_value(int j) const {
  switch (state_[j]) {
    case VarState::kAtLower: return lo_[j];
    case VarState::kAtUpper: return hi_[j];
    default: return 0.0;
  }
}

bool Simplex::refactor() {
  etas_.clear();
  std::vector<Eigen::Triplet<double>> triplets;
  for (int r = 0; r < m_; ++r) for_column(head_[r], [&](int i, double v) { triplets.emplace_back(i, r, v); });
  Eigen::SparseMatrix<double> basis(m_, m_);
  basis.setFromTriplets(triplets.begin(), triplets.end());
  basis.makeCompressed();
  lu_.analyzePattern(basis);
  lu_.factorize(basis);
  return lu_.info() == Eigen::Success;
}

void Simplex::compute_basic_values() {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
  for (int j = 0; j < total_; ++j) {
    if (state_[j] == VarState::kBasic || x_[j] == 0.0) continue;
    const double xj = x_[j];
    for_column(j, [&](int i, double v) { rhs[i] -= v * xj; });
  }
  const Eigen::VectorXd xb = lu_.solve(rhs);
  for (int r = 0; r < m_; ++r) x_[head_[r]] = xb[r];
}

Eigen::VectorXd Simplex::ftran(int j) const {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(m_);
  for_column(j, [&](int i, double v) { a[i] = v; });
  Eigen::VectorXd x = lu_.solve(a);
  for (const Eta& eta : etas_) {
    const double xr = x[eta.row] / eta.pivot;
    x[eta.row] = xr;
    if (xr != 0.0)
      for (const auto& [i, d] : eta.entries) x[i] -= d * xr;
  }
  return x;
}

Eigen::VectorXd Simplex::btran(Eigen::VectorXd c) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = c[it->row];
    for (const auto& [i, d] : it->entries) s -= d * c[i];
    c[it->row] = s / it->pivot;
  }
  return lu_.transpose().solve(c);
}

LpSolution Simplex::trivial_solve() {
  for (int j = 0; j < n_; ++j) {
    if (cost_[j] > 0.0) {
      if (!std::isfinite(lo_[j])) return finish(Status::kUnbounded, 0);
      state_[j] = VarState::kAtLower;
    } else if (cost_[j] < 0.0) {
      if (!std::isfinite(hi_[j])) return finish(Status::kUnbounded, 0);
      state_[j] = VarState::kAtUpper;
    }
    x_[j] = nonbasic_value(j);
  }
  return finish(Status::kOptimal, 0);
}

LpSolution Simplex::finish(Status status, long iterations) {
  LpSolution sol;
  sol.status = status;
  sol.iterations = iterations;
  sol.primal.assign(x_.begin(), x_.begin() + n_);
  sol.row_activity.assign(m_, 0.0);
  for (int j = 0; j < n_; ++j)
    for (const Term& t : lp_.cols_[j]) sol.row_activity[t.index] += t.value * x_[j];
  for (int j = 0; j < n_; ++j) sol.objective += cost_[j] * x_[j];
  sol.dual.assign(m_, 0.0);
  sol.reduced_cost.assign(cost_.begin(), cost_.begin() + n_);
  if (status == Status::kOptimal && m_ > 0) {
    Eigen::VectorXd cb(m_);
    for (int r = 0; r < m_; ++r) cb[r] = cost_[head_[r]];
    const Eigen::VectorXd y = btran(cb);
    for (int i = 0; i < m_; ++i) sol.dual[i] = y[i];
    for (int j = 0; j < n_; ++j) sol.reduced_cost[j] = cost_[j] - dot(y, j);
  }
  std::copy(state_.begin(), state_.begin() + n_, lp_.col_state_.begin());
  std::copy(state_.begin() + n_, state_.end(), lp_.row_state_.begin());
  lp_.has_basis_ = true;
  return sol;
}

LpSolution Simplex::run() {
  setup();
  if (m_ == 0) return trivial_solve();
  if (!refactor()) {
    cold_basis();
    head_.clear();
    pos_.assign(total_, -1);
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == VarState::kBasic) {
        pos_[j] = static_cast<int>(head_.size());
        head_.push_back(j);
      }
      x_[j] = state_[j] == VarState::kBasic ? 0.0 : nonbasic_value(j);
    }
    if (!refactor()) return finish(Status::kNumericalFailure, 0);
  }
  compute_basic_values();

  const auto start = std::chrono::steady_clock::now();
  long iterations = 0;
  if (opt_.warm_start && lp_.has_basis_) {
    switch (dual_phase(iterations, start)) {
      case DualOutcome::kInfeasible: return finish(Status::kInfeasible, iterations);
      case DualOutcome::kLimit: return finish(Status::kIterationLimit, iterations);
      default: break;
    }
  }
  int degenerate_run = 0;
  bool bland = opt_.pricing == PricingRule::kBland;
  bool phase_one = false;
  bool need_duals = true;
  bool verified = false;
  std::vector<double> phase_cost(total_, 0.0);
  std::vector<double> d(total_, 0.0);

  auto basic_cost = [&](int j) {
    if (x_[j] < lo_[j] - kPrimalTol) return -1.0;
    if (x_[j] > hi_[j] + kPrimalTol) return 1.0;
    return 0.0;
  };

  while (true) {
    if (out_of_time(iterations, start)) return finish(Status::kIterationLimit, iterations);
    if (etas_.size() >= kRefactorInterval) {
      if (!refactor()) return finish(Status::kNumericalFailure, iterations);
      compute_basic_values();
      need_duals = true;
    }

    bool infeasible = false;
    for (int r = 0; r < m_ && !infeasible; ++r) infeasible = basic_cost(head_[r]) != 0.0;
    if (infeasible != phase_one) need_duals = true;
    phase_one = infeasible;
    if (phase_one && !need_duals)
      for (int r = 0; r < m_; ++r)
        if (basic_cost(head_[r]) != phase_cost[head_[r]]) {
          need_duals = true;
          break;
        }

    if (need_duals) {
      // Full pricing from scratch; afterwards duals are updated per pivot.
      for (int j = 0; j < total_; ++j)
        phase_cost[j] = phase_one ? (state_[j] == VarState::kBasic ? basic_cost(j) : 0.0) : cost_[j];
      Eigen::VectorXd cb(m_);
      for (int r = 0; r < m_; ++r) cb[r] = phase_cost[head_[r]];
      const Eigen::VectorXd y = btran(cb);
      for (int j = 0; j < total_; ++j) d[j] = state_[j] == VarState::kBasic ? 0.0 : phase_cost[j] - dot(y, j);
      need_duals = false;
      verified = etas_.empty();
    }

    int entering = -1;
    double best_score = 0.0;
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == VarState::kBasic || lo_[j] == hi_[j]) continue;
      const double dj = d[j];
      bool improving = false;
      switch (state_[j]) {
        case VarState::kAtLower: improving = dj < -kDualTol; break;
        case VarState::kAtUpper: improving = dj > kDualTol; break;
        case VarState::kAtZero: improving = std::abs(dj) > kDualTol; break;
        default: break;
      }
      if (!improving) continue;
      if (bland) {
        entering = j;
        break;
      }
      const double score = opt_.pricing == PricingRule::kDantzig ? std::abs(dj) : dj * dj / devex_[j];
      if (score > best_score) {
        best_score = score;
        entering = j;
      }
    }

    if (entering < 0) {
      if (!verified) {
        // Confirm on a fresh factorization before declaring the outcome.
        if (!refactor()) return finish(Status::kNumericalFailure, iterations);
        compute_basic_values();
        need_duals = true;
        continue;
      }
      return finish(phase_one ? Status::kInfeasible : Status::kOptimal, iterations);
    }

    const int q = entering;
    const double dir = (state_[q] == VarState::kAtUpper || (state_[q] == VarState::kAtZero && d[q] > 0)) ? -1.0 : 1.0;
    const Eigen::VectorXd alpha = ftran(q);

    auto effective_bounds = [&](int j) -> std::pair<double, double> {
      if (!phase_one) return {lo_[j], hi_[j]};
      if (x_[j] < lo_[j] - kPrimalTol) return {-kInf, lo_[j]};
      if (x_[j] > hi_[j] + kPrimalTol) return {hi_[j], kInf};
      return {lo_[j], hi_[j]};
    };

    // Harris two-pass ratio test.
    double relaxed_step = kInf;
    for (int r = 0; r < m_; ++r) {
      if (std::abs(alpha[r]) <= kPivotTol) continue;
      const double delta = -dir * alpha[r];
      const int j = head_[r];
      const auto [lo, hi] = effective_bounds(j);
      if (delta < 0 && std::isfinite(lo)) relaxed_step = std::min(relaxed_step, (x_[j] - lo + kPrimalTol) / -delta);
      if (delta > 0 && std::isfinite(hi)) relaxed_step = std::min(relaxed_step, (hi - x_[j] + kPrimalTol) / delta);
    }
    const double flip = std::isfinite(lo_[q]) && std::isfinite(hi_[q]) ? hi_[q] - lo_[q] : kInf;
    if (!std::isfinite(relaxed_step) && !std::isfinite(flip)) {
      if (phase_one || !verified) {
        if (!refactor()) return finish(Status::kNumericalFailure, iterations);
        compute_basic_values();
        need_duals = true;
        if (!verified) continue;
        return finish(Status::kNumericalFailure, iterations);
      }
      return finish(Status::kUnbounded, iterations);
    }

    int leave = -1;
    double step = 0.0;
    if (flip <= relaxed_step) {
      step = flip;
    } else {
      double best_pivot = 0.0;
      double best_ratio = kInf;
      for (int r = 0; r < m_; ++r) {
        if (std::abs(alpha[r]) <= kPivotTol) continue;
        const double delta = -dir * alpha[r];
        const int j = head_[r];
        const auto [lo, hi] = effective_bounds(j);
        double ratio;
        if (delta < 0 && std::isfinite(lo)) ratio = (x_[j] - lo) / -delta;
        else if (delta > 0 && std::isfinite(hi)) ratio = (hi - x_[j]) / delta;
        else continue;
        if (bland) {
          if (ratio < best_ratio - 1e-12 || (ratio <= best_ratio + 1e-12 && (leave < 0 || j < head_[leave]))) {
            best_ratio = std::min(ratio, best_ratio);
            leave = r;
          }
        } else if (ratio <= relaxed_step && std::abs(alpha[r]) > best_pivot) {
          best_pivot = std::abs(alpha[r]);
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return finish(Status::kNumericalFailure, iterations);
      step = std::max(0.0, best_ratio);
    }

    ++iterations;
    verified = false;
    if (step <= 1e-12) {
      if (++degenerate_run > kDegenerateLimit) bland = true;
    } else {
      degenerate_run = 0;
      if (opt_.pricing != PricingRule::kBland) bland = false;
    }

    double leave_bound = 0.0;
    if (leave >= 0) {
      const auto [lo, hi] = effective_bounds(head_[leave]);
      leave_bound = -dir * alpha[leave] < 0 ? lo : hi;
    }

    // Apply the step.
    x_[q] += dir * step;
    if (step != 0.0)
      for (int r = 0; r < m_; ++r)
        if (alpha[r] != 0.0) x_[head_[r]] -= dir * step * alpha[r];

    if (leave < 0) {
      state_[q] = state_[q] == VarState::kAtLower ? VarState::kAtUpper : VarState::kAtLower;
      x_[q] = nonbasic_value(q);
      continue;
    }

    const int out = head_[leave];
    x_[out] = leave_bound;
    state_[out] = leave_bound == lo_[out] ? VarState::kAtLower : VarState::kAtUpper;

    // Row `leave` of B^-1 A updates reduced costs and Devex weights.
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(m_);
    unit[leave] = 1.0;
    const Eigen::VectorXd rho = btran(unit);
    const double ap = alpha[leave];
    const double theta = d[q] / ap;
    const double wq = devex_[q];
    bool reset = false;
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == VarState::kBasic || j == q) continue;
      const double arj = j == out ? 1.0 : dot(rho, j);
      if (arj == 0.0) continue;
      d[j] -= theta * arj;
      const double ratio = arj / ap;
      devex_[j] = std::max(devex_[j], ratio * ratio * wq);
      if (devex_[j] > 1e8) reset = true;
    }
    d[q] = 0.0;
    d[out] = -theta;
    devex_[out] = std::max(wq / (ap * ap), 1.0);
    if (reset) std::fill(devex_.begin(), devex_.end(), 1.0);
    if (phase_one) phase_cost[out] = 0.0;

    Eta eta{leave, alpha[leave], {}};
    for (int r = 0; r < m_; ++r)
      if (r != leave && std::abs(alpha[r]) > 1e-14) eta.entries.emplace_back(r, alpha[r]);
    etas_.push_back(std::move(eta));

    pos_[out] = -1;
    head_[leave] = q;
    pos_[q] = leave;
    state_[q] = VarState::kBasic;
    if (phase_one) {
      // q enters with the phase cost it had as a nonbasic (zero); a change
      // is picked up by the pattern check at the top of the loop.
      phase_cost[q] = 0.0;
    }
  }
}

bool Simplex::out_of_time(long iterations, const std::chrono::steady_clock::time_point& start) const {
  if (iterations >= opt_.iteration_limit) return true;
  return std::isfinite(opt_.time_limit) && iterations % 64 == 0 &&
         std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > opt_.time_limit;
}

Simplex::DualOutcome Simplex::dual_phase(long& iterations, const std::chrono::steady_clock::time_point& start) {
  constexpr double kDualFeasTol = 1e-7;
  // Deterministic cost perturbation against dual degeneracy. The primal
  // loop prices with the true costs afterwards.
  std::vector<double> pc(cost_);
  std::vector<double> d(total_, 0.0);
  auto compute_duals = [&] {
    Eigen::VectorXd cb(m_);
    for (int r = 0; r < m_; ++r) cb[r] = pc[head_[r]];
    const Eigen::VectorXd y = btran(cb);
    for (int j = 0; j < total_; ++j) d[j] = state_[j] == VarState::kBasic ? 0.0 : pc[j] - dot(y, j);
  };
  auto dual_feasible = [&] {
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == VarState::kBasic || lo_[j] == hi_[j]) continue;
      if (state_[j] == VarState::kAtLower && d[j] < -kDualFeasTol) return false;
      if (state_[j] == VarState::kAtUpper && d[j] > kDualFeasTol) return false;
      if (state_[j] == VarState::kAtZero && std::abs(d[j]) > kDualFeasTol) return false;
    }
    return true;
  };
  compute_duals();
  if (!dual_feasible()) return DualOutcome::kFallback;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
  for (int j = 0; j < total_; ++j) {
    seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    const double u = static_cast<double>(seed >> 11) * 0x1.0p-53;
    const double xi = 5e-7 * (1.0 + std::abs(cost_[j])) * (1.0 + u);
    if (state_[j] == VarState::kAtLower) pc[j] += xi;
    else if (state_[j] == VarState::kAtUpper) pc[j] -= xi;
  }
  compute_duals();

  std::vector<double> weight(m_, 1.0);  // dual Devex reference weights
  bool retried = false;
  int degenerate_run = 0;
  while (true) {
    if (out_of_time(iterations, start)) return DualOutcome::kLimit;
    if (degenerate_run > 10 * kDegenerateLimit) return DualOutcome::kFallback;
    if (etas_.size() >= kRefactorInterval) {
      if (!refactor()) return DualOutcome::kFallback;
      compute_basic_values();
      compute_duals();
    }

    int leave = -1;
    double best = 0.0;
    for (int r = 0; r < m_; ++r) {
      const int j = head_[r];
      const double v = std::max(lo_[j] - x_[j], x_[j] - hi_[j]);
      if (v <= kPrimalTol) continue;
      const double score = v * v / weight[r];
      if (score > best) {
        best = score;
        leave = r;
      }
    }
    if (leave < 0) return DualOutcome::kPrimalFeasible;
    const int out = head_[leave];
    const bool to_lower = x_[out] < lo_[out];
    const double s = to_lower ? 1.0 : -1.0;

    Eigen::VectorXd unit = Eigen::VectorXd::Zero(m_);
    unit[leave] = 1.0;
    const Eigen::VectorXd rho = btran(unit);
    std::vector<std::pair<int, double>> pivot_row, row;
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == VarState::kBasic || lo_[j] == hi_[j]) continue;
      const double arj = dot(rho, j);
      if (arj == 0.0) continue;
      pivot_row.emplace_back(j, arj);
      if (std::abs(arj) <= kPivotTol) continue;
      const bool eligible = state_[j] == VarState::kAtZero || (state_[j] == VarState::kAtLower && s * arj < 0) ||
                            (state_[j] == VarState::kAtUpper && s * arj > 0);
      if (eligible) row.emplace_back(j, arj);
    }
    if (row.empty()) {
      if (!etas_.empty() && !retried) {
        if (!refactor()) return DualOutcome::kFallback;
        compute_basic_values();
        compute_duals();
        retried = true;
        continue;
      }
      return DualOutcome::kInfeasible;
    }

    // Harris two-pass dual ratio test.
    double relaxed = kInf;
    for (const auto& [j, arj] : row) relaxed = std::min(relaxed, (std::abs(d[j]) + kDualFeasTol) / std::abs(arj));
    int q = -1;
    double best_pivot = 0.0;
    for (const auto& [j, arj] : row) {
      if (std::abs(d[j]) / std::abs(arj) > relaxed) continue;
      if (std::abs(arj) > best_pivot) {
        best_pivot = std::abs(arj);
        q = j;
      }
    }
    retried = false;

    const Eigen::VectorXd alpha = ftran(q);
    const double ap = alpha[leave];
    if (std::abs(ap) <= kPivotTol || std::abs(ap - dot(rho, q)) > 1e-6 * (1.0 + std::abs(ap))) {
      if (etas_.empty()) return DualOutcome::kFallback;
      if (!refactor()) return DualOutcome::kFallback;
      compute_basic_values();
      compute_duals();
      continue;
    }
    ++iterations;

    // Primal step: x_out reaches its violated bound.
    const double bound = to_lower ? lo_[out] : hi_[out];
    const double t = (x_[out] - bound) / ap;
    x_[q] += t;
    for (int r = 0; r < m_; ++r)
      if (alpha[r] != 0.0) x_[head_[r]] -= t * alpha[r];
    x_[out] = bound;

    // Dual step.
    const double theta = d[q] / ap;
    degenerate_run = std::abs(theta) <= 1e-12 ? degenerate_run + 1 : 0;
    for (const auto& [j, arj] : pivot_row) d[j] -= theta * arj;
    d[q] = 0.0;
    d[out] = -theta;
    state_[out] = to_lower ? VarState::kAtLower : VarState::kAtUpper;

    const double wr = weight[leave];
    bool reset = false;
    for (int r = 0; r < m_; ++r) {
      if (r == leave || alpha[r] == 0.0) continue;
      const double ratio = alpha[r] / ap;
      weight[r] = std::max(weight[r], ratio * ratio * wr);
      if (weight[r] > 1e8) reset = true;
    }
    weight[leave] = std::max(wr / (ap * ap), 1.0);
    if (reset) std::fill(weight.begin(), weight.end(), 1.0);

    Eta eta{leave, ap, {}};
    for (int r = 0; r < m_; ++r)
      if (r != leave && std::abs(alpha[r]) > 1e-14) eta.entries.emplace_back(r, alpha[r]);
    etas_.push_back(std::move(eta));
    pos_[out] = -1;
    head_[leave] = q;
    pos_[q] = leave;
    state_[q] = VarState::kBasic;
  }
}

LpSolution LinearProgram::solve(const SolveOptions& options) {
  Simplex simplex(*this, options);
  return simplex.run();
}

namespace {

std::string number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string term_text(double coef, const std::string& name, bool first) {
  std::string s;
  if (coef < 0) s = first ? "- " : " - ";
  else if (!first) s = " + ";
  const double a = std::abs(coef);
  if (a != 1.0) s += number(a) + " ";
  return s + name;
}

}  // namespace

void write_lp(const LinearProgram& lp, std::ostream& out) {
  out << "Minimize\n obj:";
  bool first = true;
  for (int j = 0; j < lp.num_variables(); ++j) {
    if (lp.cost(j) == 0.0) continue;
    out << ' ' << term_text(lp.cost(j), lp.variable_name(j), first);
    first = false;
  }
  if (first) out << " 0 " << (lp.num_variables() > 0 ? lp.variable_name(0) : std::string("x0"));
  out << "\nSubject To\n";
  const auto rows = lp.row_terms();
  for (int i = 0; i < lp.num_rows(); ++i) {
    out << ' ' << lp.row_name(i) << ':';
    bool f = true;
    for (const Term& t : rows[i]) {
      out << ' ' << term_text(t.value, lp.variable_name(t.index), f);
      f = false;
    }
    if (f) out << " 0 " << (lp.num_variables() > 0 ? lp.variable_name(0) : std::string("x0"));
    const char* op = lp.sense(i) == Sense::kLessEqual ? "<=" : lp.sense(i) == Sense::kGreaterEqual ? ">=" : "=";
    out << ' ' << op << ' ' << number(lp.rhs(i)) << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < lp.num_variables(); ++j) {
    const double lo = lp.lower(j), hi = lp.upper(j);
    const std::string& name = lp.variable_name(j);
    if (lo == 0.0 && hi == kInf) continue;
    if (lo == hi) {
      out << ' ' << name << " = " << number(lo) << '\n';
    } else if (lo == -kInf && hi == kInf) {
      out << ' ' << name << " free\n";
    } else {
      out << ' ' << (lo == -kInf ? std::string("-inf") : number(lo)) << " <= " << name << " <= "
          << (hi == kInf ? std::string("+inf") : number(hi)) << '\n';
    }
  }
  bool any_binary = false;
  for (int j = 0; j < lp.num_variables(); ++j) {
    if (!lp.is_integer(j)) continue;
    if (!any_binary) out << "Binaries\n";
    any_binary = true;
    out << ' ' << lp.variable_name(j) << '\n';
  }
  out << "End\n";
}

void write_lp_file(const LinearProgram& lp, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw LpError("cannot write " + path);
  write_lp(lp, out);
}

namespace {

double parse_number(const std::string& tok) {
  if (tok == "+inf" || tok == "inf" || tok == "+infinity" || tok == "infinity") return kInf;
  if (tok == "-inf" || tok == "-infinity") return -kInf;
  std::size_t used = 0;
  const double v = std::stod(tok, &used);
  if (used != tok.size()) throw LpError("bad number: " + tok);
  return v;
}

bool is_number(const std::string& tok) {
  if (tok.empty()) return false;
  try {
    parse_number(tok);
    return true;
  } catch (...) {
    return false;
  }
}

// Parses "[+|-] [coef] name ..." into (coefficient, name) pairs.
std::vector<std::pair<double, std::string>> parse_expression(const std::vector<std::string>& toks) {
  std::vector<std::pair<double, std::string>> terms;
  double sign = 1.0, coef = 1.0;
  for (const std::string& t : toks) {
    if (t == "+") continue;
    if (t == "-") {
      sign = -sign;
      continue;
    }
    if (is_number(t)) {
      coef = parse_number(t);
      continue;
    }
    terms.emplace_back(sign * coef, t);
    sign = 1.0;
    coef = 1.0;
  }
  return terms;
}

}  // namespace

LinearProgram read_lp(std::istream& in) {
  enum class Section { kNone, kObjective, kConstraints, kBounds, kBinaries };
  struct RawRow {
    std::string name;
    std::vector<std::pair<double, std::string>> terms;
    Sense sense;
    double rhs;
  };
  std::vector<std::pair<double, std::string>> objective;
  std::vector<RawRow> rows;
  std::vector<std::string> order;
  std::unordered_map<std::string, int> index;
  std::unordered_map<std::string, std::pair<double, double>> bounds;
  std::vector<std::string> binaries;
  auto touch = [&](const std::string& name) {
    if (index.emplace(name, static_cast<int>(order.size())).second) order.push_back(name);
  };

  Section section = Section::kNone;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto c = line.find('\\'); c != std::string::npos) line.erase(c);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (toks.empty()) continue;
    std::string head = toks[0];
    std::transform(head.begin(), head.end(), head.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (head == "minimize" || head == "minimise" || head == "min") { section = Section::kObjective; continue; }
    if (head == "subject" || head == "st" || head == "s.t.") { section = Section::kConstraints; continue; }
    if (head == "bounds") { section = Section::kBounds; continue; }
    if (head == "binaries" || head == "binary") { section = Section::kBinaries; continue; }
    if (head == "end") break;

    switch (section) {
      case Section::kObjective: {
        std::vector<std::string> rest(toks.begin() + (toks[0].back() == ':' ? 1 : 0), toks.end());
        for (auto& term : parse_expression(rest)) {
          touch(term.second);
          objective.push_back(term);
        }
        break;
      }
      case Section::kConstraints: {
        if (toks.size() < 3 || toks[0].back() != ':') throw LpError("line " + std::to_string(line_no) + ": expected 'name: expr op rhs'");
        RawRow row;
        row.name = toks[0].substr(0, toks[0].size() - 1);
        const std::string& op = toks[toks.size() - 2];
        if (op == "<=" || op == "=<") row.sense = Sense::kLessEqual;
        else if (op == ">=" || op == "=>") row.sense = Sense::kGreaterEqual;
        else if (op == "=") row.sense = Sense::kEqual;
        else throw LpError("line " + std::to_string(line_no) + ": missing comparison operator");
        row.rhs = parse_number(toks.back());
        row.terms = parse_expression({toks.begin() + 1, toks.end() - 2});
        for (auto& term : row.terms) touch(term.second);
        rows.push_back(std::move(row));
        break;
      }
      case Section::kBounds: {
        if (toks.size() == 2 && toks[1] == "free") {
          touch(toks[0]);
          bounds[toks[0]] = {-kInf, kInf};
        } else if (toks.size() == 3 && toks[1] == "=") {
          touch(toks[0]);
          const double v = parse_number(toks[2]);
          bounds[toks[0]] = {v, v};
        } else if (toks.size() == 5 && toks[1] == "<=" && toks[3] == "<=") {
          touch(toks[2]);
          bounds[toks[2]] = {parse_number(toks[0]), parse_number(toks[4])};
        } else {
          throw LpError("line " + std::to_string(line_no) + ": unsupported bound");
        }
        break;
      }
      case Section::kBinaries:
        for (const auto& t : toks) {
          touch(t);
          binaries.push_back(t);
        }
        break;
      case Section::kNone:
        throw LpError("line " + std::to_string(line_no) + ": text before the objective section");
    }
  }

  LinearProgram lp;
  std::vector<double> cost(order.size(), 0.0);
  for (const auto& [c, name] : objective) cost[index[name]] += c;
  for (std::size_t j = 0; j < order.size(); ++j) {
    auto it = bounds.find(order[j]);
    const double lo = it != bounds.end() ? it->second.first : 0.0;
    const double hi = it != bounds.end() ? it->second.second : kInf;
    lp.add_variable(cost[j], lo, hi, order[j]);
  }
  for (const auto& name : binaries) {
    const int j = index[name];
    lp.set_integer(j);
    if (bounds.find(name) == bounds.end()) lp.set_bounds(j, 0.0, 1.0);
  }
  for (const RawRow& row : rows) {
    std::vector<Term> terms;
    for (const auto& [c, name] : row.terms) terms.push_back({index[name], c});
    lp.add_row(terms, row.sense, row.rhs, row.name);
  }
  return lp;
}

}  // namespace spanner::lp
