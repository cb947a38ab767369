#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spanner::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kLessEqual, kGreaterEqual, kEqual };
enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kNumericalFailure };
enum class PricingRule { kDevex, kDantzig, kBland };

std::string to_string(Status status);

struct Term {
  int index = 0;
  double value = 0.0;
};

class LpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Basis status of one variable or row slack.
enum class VarState : std::uint8_t { kBasic, kAtLower, kAtUpper, kAtZero };

/// Warm-start token: the status of every column and every row slack.
struct Basis {
  std::vector<VarState> columns;
  std::vector<VarState> rows;
};

struct LpSolution {
  Status status = Status::kNumericalFailure;
  double objective = 0.0;
  std::vector<double> primal;         // per variable
  std::vector<double> dual;           // per row; >= 0 on >= rows, <= 0 on <= rows
  std::vector<double> reduced_cost;   // per variable, c_j - dual^T A_j
  std::vector<double> row_activity;   // per row, A_i x
  long iterations = 0;
};

struct SolveOptions {
  bool warm_start = true;
  long iteration_limit = 5'000'000;
  PricingRule pricing = PricingRule::kDevex;
  double time_limit = kInf;  // seconds; reported as kIterationLimit
};

/// min c^T x subject to sparse rows with sense and rhs, and lo <= x <= hi.
/// Variables and rows can be appended between solves; the last basis is
/// kept and reused by the next solve.
class LinearProgram {
 public:
  int add_variable(double cost, double lo, double hi, std::string name = {});
  int add_column(double cost, std::span<const Term> rows, double lo, double hi, std::string name = {});
  int add_row(std::span<const Term> vars, Sense sense, double rhs, std::string name = {});

  void set_bounds(int var, double lo, double hi);
  /// Pins the variable; throws LpError when value lies outside the bounds
  /// the variable was created with.
  void fix_variable(int var, double value);
  /// Restores the bounds the variable was created with.
  void unfix_variable(int var);
  void set_cost(int var, double cost);
  void set_integer(int var, bool integer = true);

  int num_variables() const { return static_cast<int>(cost_.size()); }
  int num_rows() const { return static_cast<int>(sense_.size()); }
  std::size_t num_nonzeros() const;

  double cost(int var) const { return cost_[var]; }
  double lower(int var) const { return lo_[var]; }
  double upper(int var) const { return hi_[var]; }
  bool is_integer(int var) const { return integer_[var] != 0; }
  const std::string& variable_name(int var) const { return var_name_[var]; }
  std::span<const Term> column(int var) const { return cols_[var]; }

  Sense sense(int row) const { return sense_[row]; }
  double rhs(int row) const { return rhs_[row]; }
  const std::string& row_name(int row) const { return row_name_[row]; }
  /// Row-wise copy of the coefficient matrix, terms sorted by variable.
  std::vector<std::vector<Term>> row_terms() const;

  LpSolution solve(const SolveOptions& options = {});

  Basis basis() const { return {col_state_, row_state_}; }
  /// Installs a basis for the next warm solve. A basis taken before columns
  /// or rows were appended is padded: new columns nonbasic at a finite
  /// bound, new row slacks basic. Throws when the basis is larger.
  void set_basis(const Basis& basis);
  void reset_basis();

 private:
  friend class Simplex;

  std::vector<double> cost_, lo_, hi_, orig_lo_, orig_hi_;
  std::vector<char> integer_;
  std::vector<std::string> var_name_;
  std::vector<std::vector<Term>> cols_;

  std::vector<Sense> sense_;
  std::vector<double> rhs_;
  std::vector<std::string> row_name_;

  std::vector<VarState> col_state_;
  std::vector<VarState> row_state_;
  bool has_basis_ = false;
};

/// Writes the model in CPLEX LP text format. Layout: objective terms in
/// variable order; one constraint per line in row order; a Bounds line for
/// every variable whose bounds differ from [0, +inf); Binaries for integer
/// variables with bounds [0, 1].
void write_lp(const LinearProgram& lp, std::ostream& out);
void write_lp_file(const LinearProgram& lp, const std::string& path);

/// Reads the subset of the LP format produced by write_lp.
LinearProgram read_lp(std::istream& in);

}  // namespace spanner::lp
