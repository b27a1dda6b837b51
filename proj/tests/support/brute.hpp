#pragma once

// Exhaustive enumerators written straight from the route and pattern
// definitions, for checking the pricers.

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>
#include <vector>

#include "sagr/columns.hpp"
#include "sagr/network.hpp"
#include "sagr/routes.hpp"

namespace brute {

inline bool slot_open(const sagr::Network& net, int c) {
  const auto& inst = net.instance();
  const auto& f = net.flight_of(c);
  if (f.is_maintenance()) return true;
  const auto& fc = net.copy(c);
  bool dep_ok = false, arr_ok = false;
  for (const auto& s : inst.slots) {
    if (s.airport == f.dep_airport && s.contains(fc.dep_time)) dep_ok = s.dep_cap > 0;
    if (s.airport == f.arr_airport && s.contains(fc.arr_time)) arr_ok = s.arr_cap > 0;
  }
  return dep_ok && arr_ok;
}

// Every feasible copy sequence of `aircraft`.
inline std::vector<std::vector<int>> all_routes(const sagr::Network& net, int aircraft) {
  const auto& inst = net.instance();
  const auto& ac = inst.aircraft[aircraft];
  const int nc = static_cast<int>(net.copies().size());
  auto allowed = [&](int c) {
    const auto& f = net.flight_of(c);
    if (f.fleet_type != ac.fleet_type || !slot_open(net, c)) return false;
    if (f.is_maintenance()) return ac.maintenance && *ac.maintenance == f.id;
    return true;
  };
  std::vector<std::vector<int>> out;
  std::vector<int> path;
  std::function<void()> dfs = [&] {
    int last = path.back();
    const auto& fl = net.flight_of(last);
    if (fl.arr_airport == ac.end_airport) {
      bool has_mt = false;
      for (int c : path) has_mt = has_mt || net.flight_of(c).is_maintenance();
      if (!ac.maintenance || has_mt) out.push_back(path);
    }
    if (static_cast<int>(path.size()) >= inst.config.max_legs) return;
    for (int s = 0; s < nc; ++s) {
      if (!allowed(s)) continue;
      const auto& fs = net.flight_of(s);
      if (fs.dep_airport != fl.arr_airport) continue;
      if (net.copy(last).arr_time + ac.turn_time > net.copy(s).dep_time) continue;
      bool used = false;
      for (int c : path) used = used || net.copy(c).flight == net.copy(s).flight;
      if (used) continue;
      path.push_back(s);
      dfs();
      path.pop_back();
    }
  };
  for (int c = 0; c < nc; ++c) {
    if (!allowed(c) || net.flight_of(c).dep_airport != ac.start_airport) continue;
    path = {c};
    dfs();
  }
  return out;
}

// Reduced cost of a new column, expanded term by term.
inline double route_rc(const sagr::Network& net, int aircraft, const std::vector<int>& seq,
                       const sagr::RouteDuals& d, const std::vector<sagr::BendersCut>& cuts) {
  const auto& inst = net.instance();
  const auto& ac = inst.aircraft[aircraft];
  double rc = d.aircraft[aircraft];
  for (std::size_t k = 0; k < seq.size(); ++k) {
    int c = seq[k];
    const auto& fc = net.copy(c);
    const auto& f = net.flight_of(c);
    rc += fc.delay * inst.config.delay_cost_per_min;
    bool planned = std::find(ac.planned_flight_ids.begin(), ac.planned_flight_ids.end(), f.id) !=
                   ac.planned_flight_ids.end();
    if (!f.is_maintenance() && !planned) rc += inst.config.swap_cost;
    rc -= d.flight[fc.flight];
    if (!f.is_maintenance()) rc += d.slot_dep[fc.dep_slot] + d.slot_arr[fc.arr_slot];
    for (std::size_t q = 0; q < cuts.size(); ++q) {
      const auto& cut = cuts[q];
      if (cut.kind != sagr::CutKind::Feasibility && cut.kind != sagr::CutKind::Optimality) continue;
      double h = cut.duals.activity[2 * c] + (f.is_maintenance() ? 0.0 : cut.duals.activity[2 * c + 1]);
      if (k + 1 < seq.size()) {
        int e = net.find_connection(c, seq[k + 1]);
        auto it = cut.duals.pair.find(e);
        if (it != cut.duals.pair.end()) h += it->second;
      }
      rc += d.cut[q] * h;
    }
  }
  for (std::size_t q = 0; q < cuts.size(); ++q)
    if (cuts[q].kind == sagr::CutKind::Global) rc -= d.cut[q] * (cuts[q].value - cuts[q].lower);
  return rc;
}


// Pattern adjacency from the definitions, without the network's connection table.
inline bool can_follow(const sagr::Network& net, int u, int v, int* pair = nullptr) {
  const auto& inst = net.instance();
  const auto& a = net.activity(u);
  const auto& b = net.activity(v);
  if (pair) *pair = -1;
  if (a.gate_key != b.gate_key || a.copy == b.copy) return false;
  bool zero = false;
  if (a.kind != sagr::ActivityKind::Departure && b.kind != sagr::ActivityKind::Arrival) {
    const auto& fi = net.flight_of(a.copy);
    const auto& fj = net.flight_of(b.copy);
    int turn = 1 << 30;
    for (const auto& r : inst.aircraft)
      if (r.fleet_type == fi.fleet_type) turn = std::min(turn, r.turn_time);
    if (net.copy(a.copy).flight != net.copy(b.copy).flight && fi.fleet_type == fj.fleet_type && fi.arr_airport == fj.dep_airport &&
        net.copy(a.copy).arr_time + turn <= net.copy(b.copy).dep_time) {
      zero = true;
      if (pair) *pair = net.find_connection(a.copy, b.copy);
    }
  }
  return a.end + (zero ? 0 : inst.config.buffer_time) <= b.start;
}

// Every feasible pattern over `acts` at `key`.
inline std::vector<std::vector<int>> all_patterns(const sagr::Network& net, int key, std::vector<int> acts) {
  std::vector<int> order;
  for (int u : net.activities_at(key))
    if (std::find(acts.begin(), acts.end(), u) != acts.end()) order.push_back(u);
  std::vector<std::vector<int>> out;
  std::vector<int> path;
  std::function<void(std::size_t)> dfs = [&](std::size_t from) {
    for (std::size_t i = from; i < order.size(); ++i) {
      if (!path.empty() && !can_follow(net, path.back(), order[i])) continue;
      path.push_back(order[i]);
      out.push_back(path);
      dfs(i + 1);
      path.pop_back();
    }
  };
  dfs(0);
  return out;
}

inline double pattern_rc(const sagr::Network& net, int key, const std::vector<int>& acts,
                         const std::vector<double>& act_dual, const std::unordered_map<int, double>& pair_dual,
                         double cap) {
  double rc = net.pattern_cost(key) + cap;
  for (std::size_t k = 0; k < acts.size(); ++k) {
    rc -= act_dual[acts[k]];
    int e = -1;
    if (k + 1 < acts.size()) can_follow(net, acts[k], acts[k + 1], &e);
    if (e >= 0 && pair_dual.count(e)) rc -= pair_dual.at(e);
  }
  return rc;
}

// Fewest gates serving `demand` with every forced pair back to back, by
// backtracking over gate assignments in time order; -1 above `limit`.
inline int min_gates(const sagr::Network& net, const std::vector<int>& demand, const std::vector<int>& forced,
                     int limit) {
  std::vector<int> order = demand;
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    const auto& u = net.activity(x);
    const auto& v = net.activity(y);
    return u.start != v.start ? u.start < v.start : u.end != v.end ? u.end < v.end : x < y;
  });
  std::map<int, int> must_follow, must_precede;
  for (int e : forced) {
    int u = net.arr_activity(net.connection(e).pred);
    int v = net.dep_activity(net.connection(e).succ);
    must_follow[u] = v;
    must_precede[v] = u;
  }
  std::vector<int> last;
  std::function<bool(std::size_t, int)> place = [&](std::size_t i, int n) -> bool {
    if (i == order.size()) return true;
    const int v = order[i];
    auto pre = must_precede.find(v);
    for (std::size_t g = 0; g < last.size(); ++g) {
      const int u = last[g];
      auto fol = must_follow.find(u);
      if (fol != must_follow.end() && fol->second != v) continue;
      if (pre != must_precede.end() && pre->second != u) continue;
      if (!can_follow(net, u, v)) continue;
      last[g] = v;
      if (place(i + 1, n)) return true;
      last[g] = u;
    }
    if (pre == must_precede.end() && static_cast<int>(last.size()) < n) {
      last.push_back(v);
      if (place(i + 1, n)) return true;
      last.pop_back();
    }
    return false;
  };
  for (int n = 0; n <= limit; ++n) {
    last.clear();
    if (place(0, n)) return n;
  }
  return -1;
}

}  // namespace brute
