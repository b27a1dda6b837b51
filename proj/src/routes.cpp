#include "sagr/routes.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <unordered_map>

#include "sagr/lp.hpp"

namespace sagr {

RouteDuals RouteDuals::zero(const Network& net, std::size_t num_cuts) {
  RouteDuals d;
  d.flight.assign(net.num_flights(), 0.0);
  d.slot_dep.assign(net.num_slots(), 0.0);
  d.slot_arr.assign(net.num_slots(), 0.0);
  d.aircraft.assign(net.num_aircraft(), 0.0);
  d.cut.assign(num_cuts, 0.0);
  return d;
}

namespace {

bool is_own_maintenance(const Network& net, int aircraft, int copy) {
  const Aircraft& r = net.instance().aircraft[aircraft];
  return r.maintenance && *r.maintenance == net.flight_of(copy).id;
}

bool planned_on(const Network& net, int aircraft, int flight) {
  const auto& ids = net.instance().aircraft[aircraft].planned_flight_ids;
  return std::find(ids.begin(), ids.end(), net.instance().flights[flight].id) != ids.end();
}

double copy_cost(const Network& net, int aircraft, int copy) {
  const FlightCopy& c = net.copy(copy);
  double cost = c.delay_cost;
  if (!net.is_maintenance_copy(copy) && !planned_on(net, aircraft, c.flight)) cost += net.config().swap_cost;
  return cost;
}

}  // namespace

std::vector<int> route_candidates(const Network& net, int aircraft) {
  const Aircraft& r = net.instance().aircraft[aircraft];
  std::vector<int> out;
  for (const auto& c : net.copies()) {
    const Flight& f = net.flight_of(c.id);
    if (f.fleet_type != r.fleet_type || !net.usable(c.id)) continue;
    if (f.is_maintenance() && !is_own_maintenance(net, aircraft, c.id)) continue;
    out.push_back(c.id);
  }
  std::stable_sort(out.begin(), out.end(),
                   [&](int a, int b) { return net.copy(a).dep_time < net.copy(b).dep_time; });
  return out;
}

std::string route_violation(const Network& net, const AircraftRoute& route) {
  const Instance& inst = net.instance();
  if (route.aircraft < 0 || route.aircraft >= net.num_aircraft()) return "unknown aircraft";
  const Aircraft& r = inst.aircraft[route.aircraft];
  if (route.copies.empty()) return "empty route";
  if (static_cast<int>(route.copies.size()) > net.config().max_legs) return "more legs than max_legs";
  std::set<int> flights;
  int mt = 0;
  for (int c : route.copies) {
    if (c < 0 || c >= static_cast<int>(net.copies().size())) return "unknown copy";
    const Flight& f = net.flight_of(c);
    if (f.fleet_type != r.fleet_type) return "fleet mismatch on " + f.id;
    if (!net.usable(c)) return "copy of " + f.id + " uses a closed slot";
    if (!flights.insert(net.copy(c).flight).second) return "flight " + f.id + " flown twice";
    if (f.is_maintenance()) {
      if (!is_own_maintenance(net, route.aircraft, c)) return "foreign maintenance " + f.id;
      ++mt;
    }
  }
  if (r.maintenance && mt != 1) return "maintenance missing";
  if (net.flight_of(route.copies.front()).dep_airport != r.start_airport) return "wrong start airport";
  if (net.flight_of(route.copies.back()).arr_airport != r.end_airport) return "wrong end airport";
  std::vector<int> conns;
  for (std::size_t k = 0; k + 1 < route.copies.size(); ++k) {
    int a = route.copies[k], b = route.copies[k + 1];
    if (net.flight_of(a).arr_airport != net.flight_of(b).dep_airport) return "space mismatch";
    if (net.copy(a).arr_time + r.turn_time > net.copy(b).dep_time) return "turn time violated";
    int e = net.find_connection(a, b);
    if (e < 0) return "missing connection";
    conns.push_back(e);
  }
  if (conns != route.connections) return "connection list inconsistent";
  double cost = 0.0;
  int delay = 0, swaps = 0;
  for (int c : route.copies) {
    cost += copy_cost(net, route.aircraft, c);
    delay += net.copy(c).delay;
    if (!net.is_maintenance_copy(c) && !planned_on(net, route.aircraft, net.copy(c).flight)) ++swaps;
  }
  if (std::abs(cost - route.cost) > 1e-9) return "cost inconsistent";
  if (delay != route.delay_minutes || swaps != route.swaps) return "delay or swap count inconsistent";
  if ((mt == 1) != route.contains_maintenance) return "maintenance flag inconsistent";
  return "";
}

std::optional<AircraftRoute> make_route(const Network& net, int aircraft, const std::vector<int>& copies) {
  AircraftRoute route;
  route.aircraft = aircraft;
  route.copies = copies;
  for (std::size_t k = 0; k + 1 < copies.size(); ++k) {
    int e = net.find_connection(copies[k], copies[k + 1]);
    if (e < 0) return std::nullopt;
    route.connections.push_back(e);
  }
  for (int c : copies) {
    if (c < 0 || c >= static_cast<int>(net.copies().size())) return std::nullopt;
    route.cost += copy_cost(net, aircraft, c);
    route.delay_minutes += net.copy(c).delay;
    if (net.is_maintenance_copy(c)) route.contains_maintenance = true;
    else if (!planned_on(net, aircraft, net.copy(c).flight)) ++route.swaps;
  }
  if (!route_violation(net, route).empty()) return std::nullopt;
  return route;
}

double route_reduced_cost(const Network& net, const AircraftRoute& route, const RouteDuals& duals,
                          std::span<const BendersCut> cuts, std::optional<ColumnRef> ref) {
  double rc = route.cost + duals.aircraft[route.aircraft];
  for (int c : route.copies) {
    const FlightCopy& fc = net.copy(c);
    rc -= duals.flight[fc.flight];
    if (!net.is_maintenance_copy(c)) rc += duals.slot_dep[fc.dep_slot] + duals.slot_arr[fc.arr_slot];
  }
  for (std::size_t k = 0; k < cuts.size(); ++k)
    if (duals.cut[k] != 0.0) rc += duals.cut[k] * cuts[k].column_coef(net, route, ref);
  return rc;
}

std::vector<std::vector<AircraftRoute>> seed_routes(const Network& net) {
  const Instance& inst = net.instance();
  std::vector<std::vector<AircraftRoute>> out(net.num_aircraft());
  for (int r = 0; r < net.num_aircraft(); ++r) {
    const Aircraft& a = inst.aircraft[r];
    std::vector<int> flights;
    for (const auto& id : a.planned_flight_ids) flights.push_back(net.index().flight.at(id));
    if (flights.empty()) continue;
    auto add = [&](const std::vector<int>& copies) {
      if (copies.size() != flights.size()) return;
      auto route = make_route(net, r, copies);
      if (!route) return;
      for (const auto& p : out[r])
        if (p.same_column(*route)) return;
      out[r].push_back(std::move(*route));
    };
    auto copy_with_delay = [&](int flight, Minutes d) {
      for (int c : net.copies_of(flight))
        if (net.copy(c).delay == d) return c;
      return -1;
    };
    std::vector<int> planned;
    for (int j : flights) {
      int c = copy_with_delay(j, 0);
      if (c < 0) break;
      planned.push_back(c);
    }
    add(planned);

    std::vector<int> greedy;
    Minutes ready = inst.recovery_window.start;
    for (int j : flights) {
      int pick = -1;
      for (int c : net.copies_of(j))
        if (net.usable(c) && net.copy(c).dep_time >= ready) {
          pick = c;
          break;
        }
      if (pick < 0) break;
      greedy.push_back(pick);
      ready = net.copy(pick).arr_time + a.turn_time;
    }
    add(greedy);

    const auto& cfg = net.config();
    for (Minutes d = cfg.delay_interval; cfg.delay_interval > 0 && d <= cfg.max_delay; d += cfg.delay_interval) {
      std::vector<int> shifted;
      for (int j : flights) {
        int c = copy_with_delay(j, d);
        if (c < 0) break;
        shifted.push_back(c);
      }
      add(shifted);
    }
  }
  return out;
}

namespace {

struct Bits {
  std::vector<std::uint64_t> w;
  explicit Bits(int n = 0) : w((n + 63) / 64, 0) {}
  bool test(int i) const { return w[i >> 6] >> (i & 63) & 1u; }
  void set(int i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool subset_of(const Bits& o) const {
    for (std::size_t k = 0; k < w.size(); ++k)
      if (w[k] & ~o.w[k]) return false;
    return true;
  }
};

struct Label {
  double cost;
  int legs;
  int copy;
  int parent;
  int trie;  // node in the pool-prefix trie, -1 once the path left every pool route
  bool mt;
  Bits visited;
};

// Prefix trie of the pool's copy sequences.
struct PoolTrie {
  std::vector<std::map<int, int>> next{1};
  std::vector<char> terminal{0};

  void insert(const std::vector<int>& seq) {
    int node = 0;
    for (int c : seq) {
      auto it = next[node].find(c);
      if (it == next[node].end()) {
        next.emplace_back();
        terminal.push_back(0);
        it = next[node].emplace(c, static_cast<int>(next.size()) - 1).first;
      }
      node = it->second;
    }
    terminal[node] = 1;
  }
  int step(int node, int c) const {
    if (node < 0) return -1;
    auto it = next[node].find(c);
    return it == next[node].end() ? -1 : it->second;
  }
};

bool dominates(const Label& a, const Label& b) {
  return a.trie < 0 && a.cost <= b.cost + 1e-12 && a.legs <= b.legs && a.mt == b.mt && a.visited.subset_of(b.visited);
}

// Arc and node weights of one aircraft's pricing graph under `duals`, plus the
// cheapest resource-relaxed completion from each copy.
struct Weights {
  std::vector<int> cand;
  std::vector<char> in_set;
  std::vector<double> node;
  std::unordered_map<int, double> arc;
  std::vector<double> tail;
  double constant = 0.0;

  double arc_weight(int e) const {
    auto it = arc.find(e);
    return it == arc.end() ? 0.0 : it->second;
  }
};

Weights pricing_weights(const Network& net, int aircraft, const RouteDuals& duals, std::span<const BendersCut> cuts) {
  const Aircraft& ac = net.instance().aircraft[aircraft];
  const int ncopies = static_cast<int>(net.copies().size());
  Weights w;
  w.cand = route_candidates(net, aircraft);
  w.in_set.assign(ncopies, 0);
  for (int c : w.cand) w.in_set[c] = 1;
  w.constant = duals.aircraft[aircraft];
  w.node.assign(ncopies, 0.0);
  for (int c : w.cand) {
    const FlightCopy& fc = net.copy(c);
    double v = copy_cost(net, aircraft, c) - duals.flight[fc.flight];
    if (!net.is_maintenance_copy(c)) v += duals.slot_dep[fc.dep_slot] + duals.slot_arr[fc.arr_slot];
    w.node[c] = v;
  }
  for (std::size_t q = 0; q < cuts.size(); ++q) {
    double lam = duals.cut[q];
    if (lam == 0.0) continue;
    const BendersCut& cut = cuts[q];
    if (cut.kind == CutKind::Feasibility || cut.kind == CutKind::Optimality) {
      for (int c : w.cand) {
        w.node[c] += lam * cut.duals.activity[net.dep_activity(c)];
        if (!net.is_maintenance_copy(c)) w.node[c] += lam * cut.duals.activity[net.arr_activity(c)];
      }
      for (const auto& [e, v] : cut.duals.pair) w.arc[e] += lam * v;
    } else {
      w.constant += lam * cut.outside_coef();
    }
  }
  w.tail.assign(ncopies, kInf);
  for (auto it = w.cand.rbegin(); it != w.cand.rend(); ++it) {
    const int c = *it;
    double best = net.flight_of(c).arr_airport == ac.end_airport ? 0.0 : kInf;
    for (int e : net.out_connections(c)) {
      int s = net.connection(e).succ;
      if (!w.in_set[s] || w.tail[s] == kInf) continue;
      if (net.copy(c).arr_time + ac.turn_time > net.copy(s).dep_time) continue;
      best = std::min(best, w.arc_weight(e) + w.node[s] + w.tail[s]);
    }
    w.tail[c] = best;
  }
  return w;
}

}  // namespace

std::vector<AircraftRoute> price_routes(const Network& net, int aircraft, const RouteDuals& duals,
                                        std::span<const BendersCut> cuts, const std::vector<AircraftRoute>& pool,
                                        int k, double threshold) {
  const Aircraft& ac = net.instance().aircraft[aircraft];
  const int nf = net.num_flights();
  const int eta = net.config().max_legs;
  if (k <= 0) return {};
  const Weights w = pricing_weights(net, aircraft, duals, cuts);
  if (w.cand.empty()) return {};
  const int ncopies = static_cast<int>(net.copies().size());

  PoolTrie trie;
  for (const auto& p : pool)
    if (p.aircraft == aircraft) trie.insert(p.copies);

  std::vector<Label> labels;
  std::vector<std::vector<int>> at(ncopies);
  // A label that cannot finish below the threshold is never stored. A label is
  // dropped once k others dominate it; each of them extends to a distinct
  // route at least as good as any extension of the dropped one.
  auto insert = [&](Label&& lab) {
    if (!(lab.cost + w.tail[lab.copy] < threshold)) return;
    auto& list = at[lab.copy];
    int dom = 0;
    for (int idx : list)
      if (dominates(labels[idx], lab) && ++dom >= k) return;
    labels.push_back(std::move(lab));
    const int id = static_cast<int>(labels.size()) - 1;
    list.push_back(id);
    std::vector<int> drop;
    for (int idx : list) {
      if (idx == id || !dominates(labels[id], labels[idx])) continue;
      int n = 0;
      for (int o : list)
        if (o != idx && dominates(labels[o], labels[idx])) ++n;
      if (n >= k) drop.push_back(idx);
    }
    std::erase_if(list, [&](int idx) { return std::find(drop.begin(), drop.end(), idx) != drop.end(); });
  };

  struct Found {
    double rc;
    std::vector<int> copies;
  };
  std::vector<Found> found;

  for (int c : w.cand) {
    const Flight& f = net.flight_of(c);
    if (f.dep_airport == ac.start_airport) {
      Label lab{w.constant + w.node[c], 1, c, -1, trie.step(0, c), f.is_maintenance(), Bits(nf)};
      lab.visited.set(net.copy(c).flight);
      insert(std::move(lab));
    }
    const std::vector<int> here = at[c];
    for (int li : here) {
      if (f.arr_airport == ac.end_airport && (!ac.maintenance || labels[li].mt) && labels[li].cost < threshold) {
        int tn = labels[li].trie;
        if (!(tn >= 0 && trie.terminal[tn])) {
          std::vector<int> seq;
          for (int x = li; x >= 0; x = labels[x].parent) seq.push_back(labels[x].copy);
          std::reverse(seq.begin(), seq.end());
          found.push_back({labels[li].cost, std::move(seq)});
        }
      }
      if (labels[li].legs >= eta) continue;
      for (int e : net.out_connections(c)) {
        int s = net.connection(e).succ;
        if (!w.in_set[s]) continue;
        if (net.copy(c).arr_time + ac.turn_time > net.copy(s).dep_time) continue;
        const Label& cur = labels[li];
        int sf = net.copy(s).flight;
        if (cur.visited.test(sf)) continue;
        Label nxt{cur.cost + w.node[s] + w.arc_weight(e),
                  cur.legs + 1,
                  s,
                  li,
                  trie.step(cur.trie, s),
                  cur.mt || net.is_maintenance_copy(s),
                  cur.visited};
        nxt.visited.set(sf);
        insert(std::move(nxt));
      }
    }
  }

  std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
    return a.rc != b.rc ? a.rc < b.rc : a.copies < b.copies;
  });
  std::vector<AircraftRoute> out;
  for (const auto& fnd : found) {
    if (static_cast<int>(out.size()) >= k) break;
    auto route = make_route(net, aircraft, fnd.copies);
    if (route) out.push_back(std::move(*route));
  }
  return out;
}

RouteSweep routes_below(const Network& net, int aircraft, const RouteDuals& duals, std::span<const BendersCut> cuts,
                        const std::vector<AircraftRoute>& pool, double threshold, int max_routes, long max_nodes) {
  const Aircraft& ac = net.instance().aircraft[aircraft];
  const int eta = net.config().max_legs;
  const Weights w = pricing_weights(net, aircraft, duals, cuts);
  PoolTrie trie;
  for (const auto& p : pool)
    if (p.aircraft == aircraft) trie.insert(p.copies);

  RouteSweep out;
  std::vector<int> path;
  std::vector<char> used(net.num_flights(), 0);
  long nodes = 0;
  // Depth-first over partial routes that can still finish below the threshold.
  auto dfs = [&](auto&& self, double cost, int node, bool mt) -> void {
    if (!out.complete) return;
    if (++nodes > max_nodes) {
      out.complete = false;
      return;
    }
    const int c = path.back();
    if (net.flight_of(c).arr_airport == ac.end_airport && (!ac.maintenance || mt) && cost < threshold &&
        !(node >= 0 && trie.terminal[node])) {
      if (static_cast<int>(out.routes.size()) >= max_routes) {
        out.complete = false;
        return;
      }
      if (auto r = make_route(net, aircraft, path)) out.routes.push_back(std::move(*r));
    }
    if (static_cast<int>(path.size()) >= eta) return;
    for (int e : net.out_connections(c)) {
      int s = net.connection(e).succ;
      if (!w.in_set[s] || used[net.copy(s).flight]) continue;
      if (net.copy(c).arr_time + ac.turn_time > net.copy(s).dep_time) continue;
      double next = cost + w.arc_weight(e) + w.node[s];
      if (!(next + w.tail[s] < threshold)) continue;
      path.push_back(s);
      used[net.copy(s).flight] = 1;
      self(self, next, trie.step(node, s), mt || net.is_maintenance_copy(s));
      used[net.copy(s).flight] = 0;
      path.pop_back();
    }
  };
  for (int c : w.cand) {
    const Flight& f = net.flight_of(c);
    if (f.dep_airport != ac.start_airport) continue;
    double cost = w.constant + w.node[c];
    if (!(cost + w.tail[c] < threshold)) continue;
    path.assign(1, c);
    used[net.copy(c).flight] = 1;
    dfs(dfs, cost, trie.step(0, c), f.is_maintenance());
    used[net.copy(c).flight] = 0;
  }
  return out;
}

}  // namespace sagr
