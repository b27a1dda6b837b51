#include "sagr/bcg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include "sagr/errors.hpp"
#include "sagr/instance_io.hpp"
#include "sagr/master.hpp"
#include "sagr/routes.hpp"

namespace sagr {

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Solved: return "solved";
    case RunStatus::TimeLimit: return "time_limit";
    case RunStatus::Stalled: return "stalled";
    case RunStatus::GateInfeasible: return "gate_infeasible";
  }
  return "?";
}

double optimality_gap(double ub, double lb) {
  // Bounds that meet up to rounding report a zero gap, not a negative one.
  if (std::abs(ub - lb) <= 1e-9 * std::max(1.0, std::abs(lb))) return 0.0;
  if (lb <= 0.0) return std::numeric_limits<double>::infinity();
  return (ub - lb) / lb;
}

Metrics metrics_from_counts(const RecoveryConfig& cfg, int canceled, int delay_minutes, int swaps, int gates,
                            double ub, double lb) {
  Metrics m;
  m.canceled_flights = canceled;
  m.total_delay_minutes = delay_minutes;
  m.swapped_tail_assignments = swaps;
  m.used_gates = gates;
  m.schedule_aircraft_cost =
      canceled * cfg.cancel_cost_default + delay_minutes * cfg.delay_cost_per_min + swaps * cfg.swap_cost;
  m.gate_cost = gates * cfg.gate_pattern_cost;
  m.total_cost = m.schedule_aircraft_cost + m.gate_cost;
  m.optimality_gap = optimality_gap(ub, lb);
  return m;
}

Metrics compute_metrics(const Network& net, const RecoveryPlan& plan, double cpu_seconds) {
  const Instance& inst = net.instance();
  Metrics m;
  m.canceled_flights = static_cast<int>(plan.cancelled.size());
  for (int j : plan.cancelled) m.schedule_aircraft_cost += inst.cancel_cost(inst.flights[j]);
  for (const auto& r : plan.routes) {
    const auto& planned = inst.aircraft[r.aircraft].planned_flight_ids;
    for (int c : r.copies) {
      const FlightCopy& fc = net.copy(c);
      m.total_delay_minutes += fc.delay;
      m.schedule_aircraft_cost += fc.delay * net.config().delay_cost_per_min;
      if (net.is_maintenance_copy(c)) continue;
      if (std::find(planned.begin(), planned.end(), inst.flights[fc.flight].id) == planned.end()) {
        ++m.swapped_tail_assignments;
        m.schedule_aircraft_cost += net.config().swap_cost;
      }
    }
  }
  m.used_gates = static_cast<int>(plan.patterns.size());
  for (const auto& p : plan.patterns) m.gate_cost += net.pattern_cost(p.gate_key);
  m.total_cost = m.schedule_aircraft_cost + m.gate_cost;
  m.optimality_gap = optimality_gap(plan.ub, plan.lb);
  m.cpu_seconds = cpu_seconds;
  return m;
}

std::vector<std::string> plan_violations(const Network& net, const RecoveryPlan& plan) {
  const Instance& inst = net.instance();
  std::vector<std::string> out;
  std::vector<int> covered(net.num_flights(), 0);
  for (int j : plan.cancelled) ++covered[j];
  std::set<int> aircraft;
  std::vector<int> dep_use(net.num_slots(), 0), arr_use(net.num_slots(), 0);
  for (const auto& r : plan.routes) {
    if (auto why = route_violation(net, r); !why.empty()) out.push_back("route: " + why);
    if (!aircraft.insert(r.aircraft).second) out.push_back("aircraft flies two routes");
    for (int c : r.copies) {
      ++covered[net.copy(c).flight];
      if (net.is_maintenance_copy(c)) continue;
      ++dep_use[net.copy(c).dep_slot];
      ++arr_use[net.copy(c).arr_slot];
    }
  }
  for (int j = 0; j < net.num_flights(); ++j)
    if (covered[j] != 1) out.push_back("flight " + inst.flights[j].id + " covered " + std::to_string(covered[j]) + " times");
  for (int s = 0; s < net.num_slots(); ++s) {
    if (dep_use[s] > inst.slots[s].dep_cap) out.push_back("departure slot over capacity");
    if (arr_use[s] > inst.slots[s].arr_cap) out.push_back("arrival slot over capacity");
  }
  std::vector<int> served(net.num_activity_ids(), 0), per_key(net.gate_keys().size(), 0);
  std::set<int> pairs;
  for (const auto& p : plan.patterns) {
    if (auto why = pattern_violation(net, p); !why.empty()) out.push_back("pattern: " + why);
    for (int u : p.activities) ++served[u];
    pairs.insert(p.connections.begin(), p.connections.end());
    ++per_key[p.gate_key];
  }
  std::vector<int> demand(net.num_activity_ids(), 0);
  for (const auto& s : separate_bsp(net, plan.routes)) {
    for (int u : s.demand) demand[u] = 1;
    for (int e : s.forced)
      if (!pairs.count(e)) out.push_back("turnaround not served back to back at " + net.key_label(s.key));
  }
  for (int u = 0; u < net.num_activity_ids(); ++u)
    if (served[u] != demand[u]) out.push_back("activity served " + std::to_string(served[u]) + " times");
  for (std::size_t k = 0; k < per_key.size(); ++k)
    if (per_key[k] > net.capacity(static_cast<int>(k))) out.push_back("gate count exceeded at " + net.key_label(k));
  return out;
}

namespace {

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Clock::time_point deadline_after(Clock::time_point t0, double seconds) {
  if (!(seconds > 0.0) || seconds > 1e8) return Clock::time_point::max();
  return t0 + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
}

RecoveryPlan all_cancelled(const Network& net) {
  RecoveryPlan p;
  for (int j = 0; j < net.num_flights(); ++j) {
    p.cancelled.push_back(j);
    p.ub += net.instance().cancel_cost(net.instance().flights[j]);
  }
  return p;
}

void finish(const Network& net, RunResult& res, Clock::time_point t0) {
  res.plan.gates = assemble_gate_assignment(net, res.plan.patterns);
  res.metrics = compute_metrics(net, res.plan, seconds_since(t0));
}

}  // namespace

RunResult run_bcg(const Instance& inst, const SolverOptions& opts) {
  const auto t0 = Clock::now();
  const auto deadline = deadline_after(t0, opts.time_limit);
  Network net(apply_disruption(inst));
  MasterState state = initial_master(net);
  PatternPools pools(net.gate_keys().size());
  RunResult res;
  res.method = "bcg";
  res.plan = all_cancelled(net);
  state.ub = res.plan.ub;
  const bool benders_opt = opts.cuts.count(CutFamily::BendersOpt) > 0;
  bool done = false;
  int idle = 0;

  for (int it = 1; it <= opts.max_iterations && !done; ++it) {
    IterationRecord rec;
    rec.iteration = it;
    auto log = [&](const std::string& event) {
      rec.event = event;
      rec.lb = state.lb;
      rec.ub = state.ub;
      rec.gap = optimality_gap(state.ub, state.lb);
      rec.seconds = seconds_since(t0);
      res.log.push_back(rec);
    };
    auto push = [&](BendersCut cut) {
      std::string kind = to_string(cut.kind);
      if (add_cut(state, std::move(cut))) {
        ++rec.cuts_added;
        ++res.cuts[kind];
      }
    };
    if (Clock::now() >= deadline) {
      res.status = RunStatus::TimeLimit;
      break;
    }
    MasterSolution ms = solve_master_cg(net, state, opts, deadline, state.ub);
    rec.columns_added = ms.columns_added;
    if (!ms.ok || ms.time_limit) {
      res.status = RunStatus::TimeLimit;
      log("time_limit");
      break;
    }
    if (optimality_gap(state.ub, state.lb) <= opts.epsilon) {
      log("converged");
      break;
    }
    const auto selected = ms.selected(state);
    const auto support = support_of(ms);
    BspResult bsp = solve_bsp(net, selected, pools, opts, deadline, benders_opt);
    rec.patterns_added = bsp.patterns_added;
    switch (bsp.status) {
      case BspResult::Status::TimeLimit:
        res.status = RunStatus::TimeLimit;
        log("time_limit");
        done = true;
        break;
      case BspResult::Status::Infeasible:
      case BspResult::Status::Rejected: {
        for (auto& c : bsp.cuts) push(std::move(c));
        if (bsp.certified) ++res.certificates;
        if (!support.empty() && (bsp.status == BspResult::Status::Rejected || bsp.certified || rec.cuts_added == 0))
          push(nogood_cut(support));
        log(bsp.status == BspResult::Status::Rejected ? "rejected" : bsp.certified ? "certified" : "infeasible");
        break;
      }
      case BspResult::Status::Feasible: {
        const double candidate = ms.objective - ms.q + bsp.value;
        if (candidate < state.ub - 1e-9) {
          state.ub = candidate;
          res.plan.routes = selected;
          res.plan.cancelled.clear();
          for (int j = 0; j < net.num_flights(); ++j)
            if (ms.cancel[j]) res.plan.cancelled.push_back(j);
          res.plan.patterns = bsp.selected;
        }
        if (optimality_gap(state.ub, state.lb) <= opts.epsilon) {
          log("converged");
          done = true;
          break;
        }
        if (benders_opt)
          for (auto& c : bsp.cuts) push(std::move(c));
        if (!support.empty() && opts.cuts.count(CutFamily::Llc)) push(llc_cut(support, bsp.value));
        if (!support.empty() && opts.cuts.count(CutFamily::Global)) push(global_cut(support, bsp.value));
        log("feasible");
        break;
      }
    }
    if (done) break;
    idle = rec.cuts_added == 0 && rec.columns_added == 0 ? idle + 1 : 0;
    if (idle >= 2) {
      res.status = RunStatus::Stalled;
      break;
    }
    if (it == opts.max_iterations) res.status = RunStatus::Stalled;
  }
  res.plan.lb = state.lb;
  res.plan.ub = state.ub;
  res.route_pool = std::move(state.routes);
  res.cut_pool = std::move(state.cuts);
  finish(net, res, t0);
  return res;
}

double default_alpha(SeqMode m) { return m == SeqMode::OE ? 0.10 : 0.20; }

RunResult run_seq(const Instance& inst, const SolverOptions& opts, SeqMode mode, std::optional<double> alpha) {
  const auto t0 = Clock::now();
  const auto deadline = deadline_after(t0, opts.time_limit);
  const double a = alpha ? *alpha : inst.config.alpha ? *inst.config.alpha : default_alpha(mode);
  Instance disrupted = apply_disruption(inst);
  Instance scaled = disrupted;
  for (auto& s : scaled.slots) s.arr_cap = static_cast<int>(std::floor((1.0 - a) * s.arr_cap + 1e-9));
  Network stage1(scaled);
  Network net(disrupted);

  RunResult res;
  res.method = mode == SeqMode::OE ? "seq-oe" : "seq-ue";
  MasterState state = initial_master(stage1);
  MasterSolution ms = solve_master_cg(stage1, state, opts, deadline, all_cancelled(stage1).ub);
  if (!ms.ok) {
    res.status = RunStatus::TimeLimit;
    res.plan = all_cancelled(net);
    finish(net, res, t0);
    return res;
  }
  // Copy ids do not depend on capacities, so stage-one routes carry over.
  std::vector<AircraftRoute> routes;
  for (const auto& r : ms.selected(state)) {
    auto again = make_route(net, r.aircraft, r.copies);
    if (!again) throw NumericalError("stage-one route invalid under original capacities");
    routes.push_back(std::move(*again));
  }
  res.plan.routes = routes;
  for (int j = 0; j < net.num_flights(); ++j)
    if (ms.cancel[j]) res.plan.cancelled.push_back(j);

  PatternPools pools(net.gate_keys().size());
  SolverOptions gate_opts = opts;
  gate_opts.separation = true;
  BspResult bsp = solve_bsp(net, routes, pools, gate_opts, deadline, false);
  if (bsp.status == BspResult::Status::Feasible) {
    res.status = ms.time_limit ? RunStatus::TimeLimit : RunStatus::Solved;
    res.plan.patterns = bsp.selected;
    res.plan.ub = res.plan.lb = ms.objective + bsp.value;
    finish(net, res, t0);
    return res;
  }
  if (bsp.status == BspResult::Status::TimeLimit) {
    res.status = RunStatus::TimeLimit;
  } else {
    res.status = RunStatus::GateInfeasible;
    for (const auto& s : bsp.subproblems) {
      auto cover = exact_cover(net, s);
      int need = cover ? static_cast<int>(cover->size()) : static_cast<int>(s.demand.size());
      res.gate_shortfall += std::max(0, need - s.capacity);
    }
  }
  res.plan.ub = res.plan.lb = ms.objective;
  res.metrics = compute_metrics(net, res.plan, seconds_since(t0));
  return res;
}

int inflate_gate_count(int need) { return (11 * need + 9) / 10; }

namespace {

std::vector<AircraftRoute> planned_routes(const Network& net) {
  const Instance& inst = net.instance();
  std::vector<AircraftRoute> planned;
  for (int r = 0; r < net.num_aircraft(); ++r) {
    const auto& ids = inst.aircraft[r].planned_flight_ids;
    if (ids.empty()) continue;
    std::vector<int> copies;
    for (const auto& id : ids)
      for (int c : net.copies_of(net.index().flight.at(id)))
        if (net.copy(c).delay == 0) copies.push_back(c);
    auto route = make_route(net, r, copies);
    if (!route) throw RangeError("planned chain of " + inst.aircraft[r].id + " is not a feasible route");
    planned.push_back(std::move(*route));
  }
  return planned;
}

Instance undisrupted(const Instance& inst) {
  Instance plain = inst;
  plain.disruption.clear();
  return plain;
}

}  // namespace

std::map<std::string, int> estimate_gate_capacity(const Instance& inst) {
  Network net(undisrupted(inst));
  auto subs = separate_bsp(net, planned_routes(net));
  for (auto& s : subs) s.capacity = static_cast<int>(s.demand.size());
  PatternPools pools(net.gate_keys().size());
  SolverOptions opts;
  check_feasibility(net, subs, pools, opts, Clock::time_point::max());
  auto outs = solve_optimality(net, subs, pools, opts, Clock::time_point::max());
  std::map<std::string, int> out;
  for (int k = 0; k < static_cast<int>(net.gate_keys().size()); ++k) out[net.key_label(k)] = 0;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (outs[i].status != SubStatus::Feasible) throw NumericalError("uncapacitated gate problem not solved");
    out[net.key_label(subs[i].key)] = inflate_gate_count(static_cast<int>(outs[i].selected.size()));
  }
  return out;
}

std::map<std::string, int> planned_gate_need(const Instance& inst) {
  Network net(undisrupted(inst));
  std::map<std::string, int> out;
  for (int k = 0; k < static_cast<int>(net.gate_keys().size()); ++k) out[net.key_label(k)] = 0;
  for (auto& s : separate_bsp(net, planned_routes(net))) {
    s.capacity = static_cast<int>(s.demand.size());
    auto cover = exact_cover(net, s);
    if (!cover) throw NumericalError("planned gate demand has no cover");
    out[net.key_label(s.key)] = static_cast<int>(cover->size());
  }
  return out;
}

std::vector<AircraftRoute> enumerate_routes(const Network& net, int aircraft, int limit) {
  const Aircraft& ac = net.instance().aircraft[aircraft];
  const int eta = net.config().max_legs;
  std::vector<AircraftRoute> out;
  std::vector<int> path;
  std::vector<char> used(net.num_flights(), 0);
  std::function<void()> dfs = [&] {
    int last = path.back();
    if (net.flight_of(last).arr_airport == ac.end_airport)
      if (auto r = make_route(net, aircraft, path)) {
        out.push_back(std::move(*r));
        if (static_cast<int>(out.size()) > limit) throw SizeError("route enumeration exceeds the oracle budget");
      }
    if (static_cast<int>(path.size()) >= eta) return;
    for (int e : net.out_connections(last)) {
      int s = net.connection(e).succ;
      const Flight& f = net.flight_of(s);
      if (used[net.copy(s).flight] || !net.usable(s) || f.fleet_type != ac.fleet_type) continue;
      if (net.copy(last).arr_time + ac.turn_time > net.copy(s).dep_time) continue;
      if (f.is_maintenance() && !(ac.maintenance && *ac.maintenance == f.id)) continue;
      used[net.copy(s).flight] = 1;
      path.push_back(s);
      dfs();
      path.pop_back();
      used[net.copy(s).flight] = 0;
    }
  };
  for (const auto& c : net.copies()) {
    const Flight& f = net.flight_of(c.id);
    if (f.dep_airport != ac.start_airport || f.fleet_type != ac.fleet_type || !net.usable(c.id)) continue;
    if (f.is_maintenance() && !(ac.maintenance && *ac.maintenance == f.id)) continue;
    path = {c.id};
    used[c.flight] = 1;
    dfs();
    used[c.flight] = 0;
  }
  return out;
}

RunResult solve_exact_oracle(const Instance& inst, const OracleLimits& limits, Clock::time_point deadline) {
  const auto t0 = Clock::now();
  Network net(apply_disruption(inst));
  const Instance& I = net.instance();
  std::vector<std::vector<AircraftRoute>> routes(net.num_aircraft());
  int total = 0;
  for (int r = 0; r < net.num_aircraft(); ++r) {
    routes[r] = enumerate_routes(net, r, limits.max_routes - total);
    total += static_cast<int>(routes[r].size());
  }

  LinearProgram lp;
  std::vector<int> ints, z(net.num_flights());
  for (int j = 0; j < net.num_flights(); ++j) ints.push_back(z[j] = lp.add_variable(I.cancel_cost(I.flights[j]), 0, 1));
  std::vector<std::vector<int>> y(net.num_aircraft());
  // Demand of each activity and each connection as a linear form in y.
  std::vector<std::vector<std::pair<int, double>>> act_demand(net.num_activity_ids());
  std::vector<std::vector<std::pair<int, double>>> pair_demand(net.connections().size());
  std::vector<std::vector<std::pair<int, double>>> cover(net.num_flights()), dep(net.num_slots()),
      arr(net.num_slots()), air(net.num_aircraft());
  for (int j = 0; j < net.num_flights(); ++j) cover[j].push_back({z[j], 1.0});
  for (int r = 0; r < net.num_aircraft(); ++r)
    for (const auto& route : routes[r]) {
      int v = lp.add_variable(route.cost, 0, 1);
      ints.push_back(v);
      y[r].push_back(v);
      air[r].push_back({v, 1.0});
      for (int c : route.copies) {
        cover[net.copy(c).flight].push_back({v, 1.0});
        act_demand[net.dep_activity(c)].push_back({v, 1.0});
        if (!net.is_maintenance_copy(c)) {
          act_demand[net.arr_activity(c)].push_back({v, 1.0});
          dep[net.copy(c).dep_slot].push_back({v, 1.0});
          arr[net.copy(c).arr_slot].push_back({v, 1.0});
        }
      }
      for (int e : route.connections) pair_demand[e].push_back({v, 1.0});
    }
  for (auto& row : cover) lp.add_row(std::move(row), Relation::Equal, 1.0);
  for (int s = 0; s < net.num_slots(); ++s) {
    if (!dep[s].empty()) lp.add_row(std::move(dep[s]), Relation::LessEqual, I.slots[s].dep_cap);
    if (!arr[s].empty()) lp.add_row(std::move(arr[s]), Relation::LessEqual, I.slots[s].arr_cap);
  }
  for (auto& row : air) lp.add_row(std::move(row), Relation::LessEqual, 1.0);

  // Arc flow per gate key over the activities some route can demand. A unit
  // of flow from source to sink is one gate pattern.
  int arcs = 0;
  for (int k = 0; k < static_cast<int>(net.gate_keys().size()); ++k) {
    std::vector<int> nodes;
    for (int u : net.activities_at(k))
      if (!act_demand[u].empty()) nodes.push_back(u);
    if (nodes.empty()) continue;
    const double cost = net.pattern_cost(k);
    std::vector<std::vector<std::pair<int, double>>> in(nodes.size()), outf(nodes.size());
    std::vector<std::pair<int, double>> cap;
    std::map<std::pair<int, int>, int> arc_var;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      int s = lp.add_variable(cost, 0, 1);
      int t = lp.add_variable(0.0, 0, 1);
      in[i].push_back({s, 1.0});
      outf[i].push_back({t, 1.0});
      cap.push_back({s, 1.0});
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        if (!activities_compatible(net, nodes[i], nodes[j])) continue;
        if (++arcs > limits.max_arcs) throw SizeError("arc-flow model exceeds the oracle budget");
        int x = lp.add_variable(0.0, 0, 1);
        arc_var[{nodes[i], nodes[j]}] = x;
        outf[i].push_back({x, 1.0});
        in[j].push_back({x, 1.0});
      }
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (auto [v, a] : act_demand[nodes[i]]) {
        in[i].push_back({v, -a});
        outf[i].push_back({v, -a});
      }
      lp.add_row(std::move(in[i]), Relation::Equal, 0.0);
      lp.add_row(std::move(outf[i]), Relation::Equal, 0.0);
    }
    lp.add_row(std::move(cap), Relation::LessEqual, net.capacity(k));
    for (int e : net.connections_at(k)) {
      if (pair_demand[e].empty()) continue;
      const Connection& c = net.connection(e);
      auto it = arc_var.find({net.arr_activity(c.pred), net.dep_activity(c.succ)});
      std::vector<std::pair<int, double>> row;
      if (it != arc_var.end()) row.push_back({it->second, 1.0});
      for (auto [v, a] : pair_demand[e]) row.push_back({v, -a});
      lp.add_row(std::move(row), Relation::GreaterEqual, 0.0);
    }
  }

  MipOptions mo;
  mo.deadline = deadline;
  MipSolution mip = solve_mip(lp, ints, mo);
  RunResult res;
  res.method = "oracle";
  if (!mip.has_incumbent) throw NumericalError("oracle model has no solution (status " + std::to_string(static_cast<int>(mip.status)) + ", nodes " + std::to_string(mip.nodes) + ")");
  res.status = mip.status == MipStatus::Optimal ? RunStatus::Solved : RunStatus::TimeLimit;
  for (int j = 0; j < net.num_flights(); ++j)
    if (mip.values[z[j]] > 0.5) res.plan.cancelled.push_back(j);
  for (int r = 0; r < net.num_aircraft(); ++r)
    for (std::size_t p = 0; p < routes[r].size(); ++p)
      if (mip.values[y[r][p]] > 0.5) res.plan.routes.push_back(routes[r][p]);
  for (const auto& s : separate_bsp(net, res.plan.routes)) {
    auto cover = exact_cover(net, s);
    if (!cover || static_cast<int>(cover->size()) > s.capacity)
      throw NumericalError("oracle route choice has no gate assignment");
    res.plan.patterns.insert(res.plan.patterns.end(), cover->begin(), cover->end());
  }
  res.plan.lb = mip.bound;
  res.plan.ub = mip.objective;
  finish(net, res, t0);
  return res;
}

}  // namespace sagr
