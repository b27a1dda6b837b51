#pragma once

#include <chrono>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sagr {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, GreaterEqual, Equal };

struct LpRow {
  std::vector<std::pair<int, double>> coefs;
  Relation rel = Relation::LessEqual;
  double rhs = 0.0;
};

// min c^T x  s.t. rows, lower <= x <= upper. Lower bounds must be finite.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LpRow> rows;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }
  int add_variable(double cost, double lb = 0.0, double ub = kInf);
  int add_row(std::vector<std::pair<int, double>> coefs, Relation rel, double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> primal;
  // Signed row duals: y_i >= 0 on >= rows, <= 0 on <= rows, free on = rows;
  // reduced cost d_j = c_j - y^T A_j.
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  double objective = 0.0;
  // Present iff Infeasible; sign-feasible for the row relations, inf-norm 1.
  std::vector<double> farkas_ray;
  int iterations = 0;
};

struct SimplexOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  int degenerate_limit = 1000;
  int max_iterations = 200000;
};

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts = {});

// True when `ray` proves `lp` infeasible: ray is sign-feasible and
// max over the variable box of (ray^T A) x is below ray^T b by more than tol.
bool verify_farkas(const LinearProgram& lp, std::span<const double> ray, double tol = 1e-7);

enum class MipStatus { Optimal, Infeasible, TimeLimit, Unbounded };

struct MipSolution {
  MipStatus status = MipStatus::Infeasible;
  std::vector<double> values;
  double objective = kInf;
  double bound = -kInf;
  bool has_incumbent = false;
  int nodes = 0;
};

using Clock = std::chrono::steady_clock;

struct MipOptions {
  double int_tol = 1e-6;
  Clock::time_point deadline = Clock::time_point::max();
  // Prune nodes whose bound is within this of the incumbent.
  double abs_gap = 1e-9;
  // When all objective coefficients on integer columns are integral and no
  // continuous column has cost, bounds may be rounded up.
  bool integral_objective = false;
  SimplexOptions lp;
};

MipSolution solve_mip(const LinearProgram& lp, std::span<const int> integer_vars, const MipOptions& opts = {});

// CPLEX LP text format, for cross-checking with external solvers.
std::string to_lp_format(const LinearProgram& lp);

}  // namespace sagr
