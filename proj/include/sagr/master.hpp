#pragma once

#include <optional>
#include <vector>

#include "sagr/columns.hpp"
#include "sagr/lp.hpp"
#include "sagr/network.hpp"
#include "sagr/options.hpp"
#include "sagr/routes.hpp"

namespace sagr {

struct MasterState {
  std::vector<std::vector<AircraftRoute>> routes;  // column pool per aircraft
  std::vector<BendersCut> cuts;
  double lb = -kInf;
  double ub = kInf;
};

// Column and row positions of a built master.
struct MasterLayout {
  std::vector<int> z;                   // by flight
  std::vector<std::vector<int>> y;      // by aircraft, pool index
  int q = -1;
  std::vector<int> cover_row;           // by flight
  std::vector<int> slot_dep_row;        // by slot, -1 when no usable copy touches it
  std::vector<int> slot_arr_row;
  std::vector<int> aircraft_row;
  std::vector<int> cut_row;             // parallel to the cut pool
  std::vector<int> integer_vars;
};

MasterState initial_master(const Network& net);

LinearProgram build_master(const Network& net, const MasterState& state, MasterLayout* layout = nullptr);

// Master duals turned into the route pricing convention.
RouteDuals route_duals(const Network& net, const MasterLayout& layout, const std::vector<double>& signed_duals);

struct MasterSolution {
  bool ok = false;            // an integer point was found
  bool time_limit = false;
  std::vector<int> route;     // pool index per aircraft, -1 when idle
  std::vector<char> cancel;   // by flight
  double q = 0.0;
  double objective = kInf;    // v_M
  double lp_objective = -kInf;
  int lp_solves = 0;
  int columns_added = 0;
  // The pool held every route that could improve on the bound passed in, so
  // the integer objective is a valid lower bound.
  bool exact = false;

  std::vector<AircraftRoute> selected(const MasterState& s) const;
};

// Column generation on the LP relaxation until no route prices out, then the
// integer master over the pool. Raises state.lb to the LP value. With a finite
// `ub`, the pool is first completed with every route whose reduced cost is
// below ub - LP value (at most `budget` per aircraft); if that succeeds the
// integer objective also bounds the master from below.
MasterSolution solve_master_cg(const Network& net, MasterState& state, const SolverOptions& opts,
                               Clock::time_point deadline, double ub = kInf, int budget = 400);

// Appends unless an equal cut is already pooled. Returns whether it was added.
bool add_cut(MasterState& state, BendersCut cut);

// Support of an integer master point.
std::vector<ColumnRef> support_of(const MasterSolution& sol);

// Left-hand side of `cut` at an integer point with gate cost q.
double cut_activity(const Network& net, const MasterState& state, const BendersCut& cut,
                    const std::vector<int>& route, double q);

}  // namespace sagr
