#pragma once

#include <atomic>
#include <optional>
#include <span>
#include <vector>

#include "sagr/columns.hpp"
#include "sagr/lp.hpp"
#include "sagr/network.hpp"
#include "sagr/options.hpp"
#include "sagr/patterns.hpp"

namespace sagr {

// One airport x gate type part of the gate subproblem at a fixed route choice.
struct Subproblem {
  int key = -1;
  std::vector<int> demand;  // activity ids served exactly once, in time order
  std::vector<int> forced;  // E^{a,t} cap E_1: turnarounds served back to back
  int capacity = 0;
  double cost = 0.0;        // per pattern
};

using PatternPools = std::vector<std::vector<GatePattern>>;  // by gate key

// Subproblems with nonempty demand, in gate-key order.
std::vector<Subproblem> separate_bsp(const Network& net, const std::vector<AircraftRoute>& selected);

// Minimum number of patterns covering the demand (ignores capacity). Exact:
// a minimum path cover of the activity DAG that keeps forced pairs adjacent.
// nullopt when a forced pair cannot be served back to back.
std::optional<std::vector<GatePattern>> exact_cover(const Network& net, const Subproblem& sub);

bool infeasibility_certificate(std::span<const double> lambda, std::span<const double> b, double delta_bar,
                               double pricing_max, int capacity, double tol = 1e-7);

enum class SubStatus { Feasible, InfeasibleCertified, InfeasibleExhausted, Rejected, Cancelled, TimeLimit };

const char* to_string(SubStatus s);

// Outcome of one block (a single subproblem, or all of them when separation
// is off).
struct BlockOutcome {
  SubStatus status = SubStatus::Feasible;
  double value = 0.0;     // integer restricted optimum
  double lr_value = 0.0;  // LP relaxation optimum (optimality phase)
  std::vector<GatePattern> selected;
  // Duals per subproblem of the block: LP duals after the optimality phase,
  // or the Farkas ray after an infeasibility verdict.
  std::vector<PatternDuals> duals;
  std::vector<int> infeasible;  // subproblem positions within the block behind the verdict
  int lp_solves = 0;
  int patterns_added = 0;
  bool certificate_fired = false;
};

struct BspResult {
  enum class Status { Feasible, Infeasible, Rejected, TimeLimit } status = Status::Feasible;
  double value = 0.0;
  double lr_value = 0.0;
  std::vector<GatePattern> selected;
  std::vector<BendersCut> cuts;  // feasibility cuts or one optimality cut
  bool certified = false;
  int lp_solves = 0;
  int patterns_added = 0;
  std::vector<Subproblem> subproblems;
  std::vector<BlockOutcome> blocks;
};

// Feasibility phase (phase one) per block; stops at the first certified
// infeasibility.
std::vector<BlockOutcome> check_feasibility(const Network& net, const std::vector<Subproblem>& subs, PatternPools& pools,
                                            const SolverOptions& opts, Clock::time_point deadline);

// Optimality phase (column generation plus integer restricted problem) per
// block; every block must already be feasible.
std::vector<BlockOutcome> solve_optimality(const Network& net, const std::vector<Subproblem>& subs, PatternPools& pools,
                                           const SolverOptions& opts, Clock::time_point deadline);

// Both phases and the Benders cut they yield for `selected`.
BspResult solve_bsp(const Network& net, const std::vector<AircraftRoute>& selected, PatternPools& pools,
                    const SolverOptions& opts, Clock::time_point deadline, bool want_optimality_cut = true);

// Subproblem duals turned into cut duals valid for every route: negative
// forced-pair duals are folded into the arrival, and activities outside the
// demand get the largest dual that keeps every pattern through them priced
// nonnegative. With `ray` the pattern cost is taken as zero.
GateDuals lift_duals(const Network& net, const std::vector<Subproblem>& subs, const std::vector<PatternDuals>& duals,
                     bool ray);

// Per-pattern gate schedule: patterns sorted by first activity, gate numbers
// 1..n assigned in that order.
struct GateAssignment {
  int key = -1;
  int gate = 0;  // 1-based
  GatePattern pattern;
};
std::vector<GateAssignment> assemble_gate_assignment(const Network& net, std::vector<GatePattern> selected);

}  // namespace sagr
