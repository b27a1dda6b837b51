#pragma once

#include <compare>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace sagr {

class Network;

struct AircraftRoute {
  int aircraft = -1;
  std::vector<int> copies;       // in flying order
  std::vector<int> connections;  // b^r: connection ids between consecutive copies
  double cost = 0.0;
  int delay_minutes = 0;
  int swaps = 0;
  bool contains_maintenance = false;

  bool same_column(const AircraftRoute& o) const { return aircraft == o.aircraft && copies == o.copies; }
};

struct GatePattern {
  int gate_key = -1;
  std::vector<int> activities;   // activity ids in service order
  std::vector<int> connections;  // b^{a,t}: arrival->departure pairs of E^{a,t} served back to back
  double cost = 0.0;

  bool operator==(const GatePattern& o) const { return gate_key == o.gate_key && activities == o.activities; }
};

struct ColumnRef {
  int aircraft = -1;
  int index = -1;
  auto operator<=>(const ColumnRef&) const = default;
};

// Duals of the full gate-side relaxation, signed as in the cut formulas:
// H(pi) of a route is the sum of activity duals of its copies plus pair duals
// of its connections; gate_term is sum of pi_{a,t} n_{a,t}.
struct GateDuals {
  std::vector<double> activity;            // by activity id
  std::unordered_map<int, double> pair;    // by connection id
  double gate_term = 0.0;

  double route_value(const Network& net, const AircraftRoute& r) const;
  bool is_zero(double tol = 1e-12) const;
};

enum class CutKind { Feasibility, Optimality, NoGood, Llc, Global };

std::string to_string(CutKind k);

// Stored as  sum_p coef(p) y_p + q_coef * q <= rhs.
struct BendersCut {
  CutKind kind = CutKind::Feasibility;
  GateDuals duals;                 // Feasibility / Optimality
  std::vector<ColumnRef> support;  // NoGood / Llc / Global, sorted
  double value = 0.0;              // v_S at the generating point
  double lower = 0.0;              // L
  double q_coef = 0.0;
  double rhs = 0.0;

  // `ref` identifies pool columns; a column not yet in a pool passes nullopt.
  double column_coef(const Network& net, const AircraftRoute& r, std::optional<ColumnRef> ref) const;
  // Coefficient every column outside `support` gets (only Global is nonzero).
  double outside_coef() const;
  bool in_support(const ColumnRef& ref) const;
};

// Cut builders; the Benders ones return nullopt for a trivial cut.
std::optional<BendersCut> feasibility_cut(GateDuals duals);
std::optional<BendersCut> optimality_cut(GateDuals duals);
BendersCut nogood_cut(std::vector<ColumnRef> support);
BendersCut llc_cut(std::vector<ColumnRef> support, double value, double lower = 0.0);
BendersCut global_cut(std::vector<ColumnRef> support, double value, double lower = 0.0);

}  // namespace sagr
