#include "sagr/master.hpp"

#include <algorithm>
#include <cmath>

#include "sagr/errors.hpp"

namespace sagr {

MasterState initial_master(const Network& net) {
  MasterState s;
  s.routes = seed_routes(net);
  s.routes.resize(net.num_aircraft());
  return s;
}

LinearProgram build_master(const Network& net, const MasterState& state, MasterLayout* out) {
  const Instance& inst = net.instance();
  MasterLayout L;
  LinearProgram lp;
  const int nf = net.num_flights();
  const int ns = net.num_slots();

  for (int j = 0; j < nf; ++j) {
    L.z.push_back(lp.add_variable(inst.cancel_cost(inst.flights[j]), 0.0, 1.0));
    L.integer_vars.push_back(L.z.back());
  }
  L.y.resize(net.num_aircraft());
  for (int r = 0; r < net.num_aircraft(); ++r)
    for (const auto& route : state.routes[r]) {
      L.y[r].push_back(lp.add_variable(route.cost, 0.0, 1.0));
      L.integer_vars.push_back(L.y[r].back());
    }
  L.q = lp.add_variable(1.0, 0.0, kInf);

  std::vector<std::vector<std::pair<int, double>>> cover(nf), dep(ns), arr(ns), air(net.num_aircraft());
  for (int j = 0; j < nf; ++j) cover[j].push_back({L.z[j], 1.0});
  for (int r = 0; r < net.num_aircraft(); ++r)
    for (std::size_t p = 0; p < state.routes[r].size(); ++p) {
      int v = L.y[r][p];
      air[r].push_back({v, 1.0});
      for (int c : state.routes[r][p].copies) {
        const FlightCopy& fc = net.copy(c);
        cover[fc.flight].push_back({v, 1.0});
        if (net.is_maintenance_copy(c)) continue;
        dep[fc.dep_slot].push_back({v, 1.0});
        arr[fc.arr_slot].push_back({v, 1.0});
      }
    }
  // Slot rows exist for every slot some usable copy can touch, so their duals
  // are defined even before a column uses them.
  std::vector<char> dep_used(ns, 0), arr_used(ns, 0);
  for (const auto& c : net.copies())
    if (net.usable(c.id) && !net.is_maintenance_copy(c.id)) {
      dep_used[c.dep_slot] = 1;
      arr_used[c.arr_slot] = 1;
    }
  for (int j = 0; j < nf; ++j) L.cover_row.push_back(lp.add_row(std::move(cover[j]), Relation::Equal, 1.0));
  L.slot_dep_row.assign(ns, -1);
  L.slot_arr_row.assign(ns, -1);
  for (int s = 0; s < ns; ++s) {
    if (dep_used[s]) L.slot_dep_row[s] = lp.add_row(std::move(dep[s]), Relation::LessEqual, inst.slots[s].dep_cap);
    if (arr_used[s]) L.slot_arr_row[s] = lp.add_row(std::move(arr[s]), Relation::LessEqual, inst.slots[s].arr_cap);
  }
  for (int r = 0; r < net.num_aircraft(); ++r)
    L.aircraft_row.push_back(lp.add_row(std::move(air[r]), Relation::LessEqual, 1.0));
  for (const auto& cut : state.cuts) {
    std::vector<std::pair<int, double>> coefs;
    for (int r = 0; r < net.num_aircraft(); ++r)
      for (std::size_t p = 0; p < state.routes[r].size(); ++p) {
        double a = cut.column_coef(net, state.routes[r][p], ColumnRef{r, static_cast<int>(p)});
        if (a != 0.0) coefs.push_back({L.y[r][p], a});
      }
    if (cut.q_coef != 0.0) coefs.push_back({L.q, cut.q_coef});
    L.cut_row.push_back(lp.add_row(std::move(coefs), Relation::LessEqual, cut.rhs));
  }
  if (out) *out = std::move(L);
  return lp;
}

RouteDuals route_duals(const Network& net, const MasterLayout& L, const std::vector<double>& y) {
  RouteDuals d = RouteDuals::zero(net, L.cut_row.size());
  for (int j = 0; j < net.num_flights(); ++j) d.flight[j] = y[L.cover_row[j]];
  for (int s = 0; s < net.num_slots(); ++s) {
    if (L.slot_dep_row[s] >= 0) d.slot_dep[s] = -y[L.slot_dep_row[s]];
    if (L.slot_arr_row[s] >= 0) d.slot_arr[s] = -y[L.slot_arr_row[s]];
  }
  for (int r = 0; r < net.num_aircraft(); ++r) d.aircraft[r] = -y[L.aircraft_row[r]];
  for (std::size_t k = 0; k < L.cut_row.size(); ++k) d.cut[k] = -y[L.cut_row[k]];
  return d;
}

std::vector<AircraftRoute> MasterSolution::selected(const MasterState& s) const {
  std::vector<AircraftRoute> out;
  for (std::size_t r = 0; r < route.size(); ++r)
    if (route[r] >= 0) out.push_back(s.routes[r][route[r]]);
  return out;
}

// Search budget of one aircraft's completion sweep.
constexpr long kCompletionNodes = 200000;

MasterSolution solve_master_cg(const Network& net, MasterState& state, const SolverOptions& opts,
                               Clock::time_point deadline, double ub, int budget) {
  MasterSolution sol;
  const int na = net.num_aircraft();
  bool converged = false;
  LinearProgram lp;
  MasterLayout L;
  for (int round = 0; round < 10000; ++round) {
    lp = build_master(net, state, &L);
    LpSolution rel = solve_lp(lp);
    ++sol.lp_solves;
    if (rel.status != LpStatus::Optimal) throw NumericalError("master relaxation not solved to optimality");
    sol.lp_objective = rel.objective;
    if (Clock::now() >= deadline) {
      sol.time_limit = true;
      break;
    }
    RouteDuals d = route_duals(net, L, rel.duals);
    std::vector<std::vector<AircraftRoute>> fresh(na);
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, opts.workers)) if (opts.workers > 1)
    for (int r = 0; r < na; ++r) fresh[r] = price_routes(net, r, d, state.cuts, state.routes[r], opts.route_columns);
    int added = 0;
    for (int r = 0; r < na; ++r)
      for (auto& route : fresh[r]) {
        state.routes[r].push_back(std::move(route));
        ++added;
      }
    sol.columns_added += added;
    if (added == 0) {
      converged = true;
      break;
    }
  }
  if (converged) state.lb = std::max(state.lb, sol.lp_objective);

  // Reduced-cost completion: a master solution cheaper than ub only uses
  // columns whose reduced cost is below ub - LP value.
  bool complete = false;
  if (converged && ub < kInf && Clock::now() < deadline) {
    LpSolution rel = solve_lp(lp);
    ++sol.lp_solves;
    RouteDuals d = route_duals(net, L, rel.duals);
    const double threshold = ub - rel.objective + 1e-6;
    std::vector<RouteSweep> sweep(na);
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, opts.workers)) if (opts.workers > 1)
    for (int r = 0; r < na; ++r)
      sweep[r] = routes_below(net, r, d, state.cuts, state.routes[r], threshold, budget, kCompletionNodes);
    complete = true;
    for (int r = 0; r < na; ++r) {
      complete = complete && sweep[r].complete;
      for (auto& route : sweep[r].routes) state.routes[r].push_back(std::move(route));
    }
    lp = build_master(net, state, &L);
  }

  MipOptions mo;
  mo.deadline = deadline;
  MipSolution mip = solve_mip(lp, L.integer_vars, mo);
  if (mip.status == MipStatus::TimeLimit) sol.time_limit = true;
  if (!mip.has_incumbent) return sol;
  sol.ok = true;
  sol.objective = mip.objective;
  sol.exact = complete && mip.status == MipStatus::Optimal;
  if (sol.exact) state.lb = std::max(state.lb, std::min(mip.objective, ub));
  sol.q = mip.values[L.q];
  sol.route.assign(na, -1);
  for (int r = 0; r < na; ++r)
    for (std::size_t p = 0; p < L.y[r].size(); ++p)
      if (mip.values[L.y[r][p]] > 0.5) sol.route[r] = static_cast<int>(p);
  sol.cancel.assign(net.num_flights(), 0);
  for (int j = 0; j < net.num_flights(); ++j) sol.cancel[j] = mip.values[L.z[j]] > 0.5;
  return sol;
}

namespace {

double snap(double v) { return std::round(v * 1e9) / 1e9; }

bool same_cut(const BendersCut& a, const BendersCut& b) {
  if (a.kind != b.kind || a.support != b.support) return false;
  if (snap(a.value) != snap(b.value) || snap(a.lower) != snap(b.lower) || snap(a.rhs) != snap(b.rhs)) return false;
  if (a.kind != CutKind::Feasibility && a.kind != CutKind::Optimality) return true;
  const auto& x = a.duals;
  const auto& y = b.duals;
  if (x.activity.size() != y.activity.size()) return false;
  for (std::size_t i = 0; i < x.activity.size(); ++i)
    if (snap(x.activity[i]) != snap(y.activity[i])) return false;
  auto pair_equal = [](const auto& m1, const auto& m2) {
    for (const auto& [e, v] : m1) {
      auto it = m2.find(e);
      double w = it == m2.end() ? 0.0 : it->second;
      if (snap(v) != snap(w)) return false;
    }
    return true;
  };
  return pair_equal(x.pair, y.pair) && pair_equal(y.pair, x.pair);
}

}  // namespace

bool add_cut(MasterState& state, BendersCut cut) {
  for (const auto& c : state.cuts)
    if (same_cut(c, cut)) return false;
  state.cuts.push_back(std::move(cut));
  return true;
}

std::vector<ColumnRef> support_of(const MasterSolution& sol) {
  std::vector<ColumnRef> s;
  for (std::size_t r = 0; r < sol.route.size(); ++r)
    if (sol.route[r] >= 0) s.push_back({static_cast<int>(r), sol.route[r]});
  return s;
}

double cut_activity(const Network& net, const MasterState& state, const BendersCut& cut,
                    const std::vector<int>& route, double q) {
  double lhs = cut.q_coef * q;
  for (std::size_t r = 0; r < route.size(); ++r)
    if (route[r] >= 0)
      lhs += cut.column_coef(net, state.routes[r][route[r]], ColumnRef{static_cast<int>(r), route[r]});
  return lhs;
}

}  // namespace sagr
