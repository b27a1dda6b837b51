#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sagr/columns.hpp"
#include "sagr/gate.hpp"
#include "sagr/instance.hpp"
#include "sagr/network.hpp"
#include "sagr/options.hpp"

namespace sagr {

struct RecoveryPlan {
  std::vector<AircraftRoute> routes;  // at most one per aircraft
  std::vector<int> cancelled;         // flight indices
  std::vector<GatePattern> patterns;
  std::vector<GateAssignment> gates;
  double lb = 0.0;
  double ub = 0.0;
};

struct Metrics {
  int canceled_flights = 0;
  int total_delay_minutes = 0;
  int swapped_tail_assignments = 0;
  int used_gates = 0;
  double schedule_aircraft_cost = 0.0;
  double gate_cost = 0.0;
  double total_cost = 0.0;
  double optimality_gap = 0.0;  // fraction, not percent
  double cpu_seconds = 0.0;

  bool operator==(const Metrics&) const = default;
};

enum class RunStatus { Solved, TimeLimit, Stalled, GateInfeasible };
const char* to_string(RunStatus s);

struct IterationRecord {
  int iteration = 0;
  double lb = 0.0;
  double ub = 0.0;
  double gap = 0.0;
  int columns_added = 0;
  int patterns_added = 0;
  int cuts_added = 0;
  std::string event;  // feasible / infeasible / certified / rejected / ...
  double seconds = 0.0;

  bool operator==(const IterationRecord&) const = default;
};

struct RunResult {
  std::string method;
  RunStatus status = RunStatus::Solved;
  RecoveryPlan plan;
  Metrics metrics;
  std::vector<IterationRecord> log;
  int gate_shortfall = 0;  // SEQ only
  int certificates = 0;
  std::map<std::string, int> cuts;  // by kind
  // Final master pools (BCG only): route columns per aircraft and the cuts
  // over them.
  std::vector<std::vector<AircraftRoute>> route_pool;
  std::vector<BendersCut> cut_pool;
};

// (UB - LB) / LB; 0 when both are 0, infinite when only LB is.
double optimality_gap(double ub, double lb);

Metrics metrics_from_counts(const RecoveryConfig& cfg, int canceled, int delay_minutes, int swaps, int gates,
                            double ub, double lb);

// Recomputes every figure from the plan itself.
Metrics compute_metrics(const Network& net, const RecoveryPlan& plan, double cpu_seconds = 0.0);

// Every broken plan invariant, empty when the plan is a valid recovery.
std::vector<std::string> plan_violations(const Network& net, const RecoveryPlan& plan);

RunResult run_bcg(const Instance& inst, const SolverOptions& opts);

enum class SeqMode { OE, UE };
double default_alpha(SeqMode m);
RunResult run_seq(const Instance& inst, const SolverOptions& opts, SeqMode mode, std::optional<double> alpha = {});

// n_{a,t} = ceil(1.1 * n~) where n~ is the gate need of the undisrupted plan.
std::map<std::string, int> estimate_gate_capacity(const Instance& inst);
// Fewest gates per "airport/type" that serve the undisrupted plan, by exact
// path cover.
std::map<std::string, int> planned_gate_need(const Instance& inst);
int inflate_gate_count(int need);

struct OracleLimits {
  int max_routes = 20000;
  int max_arcs = 60000;
};
// Full enumeration of routes, gate side as an arc-flow model; one MILP.
RunResult solve_exact_oracle(const Instance& inst, const OracleLimits& limits = {},
                             Clock::time_point deadline = Clock::time_point::max());

// All feasible routes of `aircraft`. Throws SizeError past `limit`.
std::vector<AircraftRoute> enumerate_routes(const Network& net, int aircraft, int limit);

}  // namespace sagr
