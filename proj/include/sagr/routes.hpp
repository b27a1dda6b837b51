#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sagr/columns.hpp"
#include "sagr/network.hpp"

namespace sagr {

// Master duals in the sign convention of the route reduced cost:
//   rc = c - sum lambda_j + sum (lambda_sdep + lambda_sarr) + lambda_r + sum lambda_cut * coef
// so slot, aircraft and cut duals are nonnegative.
struct RouteDuals {
  std::vector<double> flight;
  std::vector<double> slot_dep;
  std::vector<double> slot_arr;
  std::vector<double> aircraft;
  std::vector<double> cut;  // parallel to the cut pool

  static RouteDuals zero(const Network& net, std::size_t num_cuts = 0);
};

inline constexpr double kReducedCostTol = 1e-6;

// Builds a route for `aircraft` flying `copies` in order, or nullopt if the
// sequence breaks a route invariant.
std::optional<AircraftRoute> make_route(const Network& net, int aircraft, const std::vector<int>& copies);

// Empty string when `route` satisfies every route invariant.
std::string route_violation(const Network& net, const AircraftRoute& route);

double route_reduced_cost(const Network& net, const AircraftRoute& route, const RouteDuals& duals,
                          std::span<const BendersCut> cuts, std::optional<ColumnRef> ref = std::nullopt);

// Planned route when still flyable, its earliest-feasible delayed variant and
// uniform shifts of it.
std::vector<std::vector<AircraftRoute>> seed_routes(const Network& net);

// Up to k routes of `aircraft` outside `pool` with reduced cost below
// `threshold`, most negative first. Exact: returns nothing only if no such
// route exists.
std::vector<AircraftRoute> price_routes(const Network& net, int aircraft, const RouteDuals& duals,
                                        std::span<const BendersCut> cuts, const std::vector<AircraftRoute>& pool,
                                        int k, double threshold = -kReducedCostTol);

struct RouteSweep {
  std::vector<AircraftRoute> routes;
  bool complete = true;  // false once a budget was hit
};

// Every route of `aircraft` outside `pool` with reduced cost below
// `threshold`, by depth-first search under route and node budgets.
RouteSweep routes_below(const Network& net, int aircraft, const RouteDuals& duals, std::span<const BendersCut> cuts,
                        const std::vector<AircraftRoute>& pool, double threshold, int max_routes, long max_nodes);

// Copies aircraft `aircraft` may fly, in departure order.
std::vector<int> route_candidates(const Network& net, int aircraft);

}  // namespace sagr
