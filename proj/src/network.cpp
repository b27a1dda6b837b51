#include "sagr/network.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "sagr/errors.hpp"

namespace sagr {

std::vector<FlightCopy> generate_flight_copies(const Instance& inst) {
  const auto& cfg = inst.config;
  const int step = std::max(1, cfg.delay_interval);
  std::vector<FlightCopy> out;
  for (int j = 0; j < static_cast<int>(inst.flights.size()); ++j) {
    const Flight& f = inst.flights[j];
    for (Minutes d = 0; d <= cfg.max_delay; d += step) {
      FlightCopy c;
      c.flight = j;
      c.delay = d;
      c.dep_time = f.sched_dep + d;
      c.arr_time = f.sched_arr + d;
      if (c.dep_time < inst.recovery_window.start || c.arr_time >= inst.recovery_window.end) continue;
      c.delay_cost = d * cfg.delay_cost_per_min;
      c.id = static_cast<int>(out.size());
      out.push_back(c);
    }
  }
  return out;
}

namespace {

int find_slot(const Instance& inst, const std::vector<int>& slots, Minutes t) {
  auto it = std::upper_bound(slots.begin(), slots.end(), t,
                             [&](Minutes v, int s) { return v < inst.slots[s].start; });
  if (it == slots.begin()) return -1;
  int s = *std::prev(it);
  return inst.slots[s].contains(t) ? s : -1;
}

}  // namespace

void copy_slot_membership(const Instance& inst, std::vector<FlightCopy>& copies) {
  InstanceIndex idx(inst);
  for (auto& c : copies) {
    const Flight& f = inst.flights[c.flight];
    c.dep_slot = find_slot(inst, idx.slots_by_airport[idx.airport.at(f.dep_airport)], c.dep_time);
    c.arr_slot = find_slot(inst, idx.slots_by_airport[idx.airport.at(f.arr_airport)], c.arr_time);
    if (c.dep_slot < 0 || c.arr_slot < 0)
      throw CoverageError("copy of flight " + f.id + " delayed " + std::to_string(c.delay) + " min has no " +
                          (c.dep_slot < 0 ? "departure" : "arrival") + " slot");
  }
}

Minutes min_turn_time(const Instance& inst, const std::string& fleet) {
  Minutes best = -1;
  for (const auto& r : inst.aircraft)
    if (r.fleet_type == fleet && (best < 0 || r.turn_time < best)) best = r.turn_time;
  return best;
}

std::vector<Connection> build_connections(const Instance& inst, const std::vector<FlightCopy>& copies) {
  InstanceIndex idx(inst);
  std::map<std::string, Minutes> turn;
  for (const auto& f : inst.flights)
    if (!turn.count(f.fleet_type)) turn[f.fleet_type] = min_turn_time(inst, f.fleet_type);

  // Copies grouped by departure airport, sorted by departure time.
  std::vector<std::vector<int>> departing(inst.airports.size());
  for (const auto& c : copies) departing[idx.airport.at(inst.flights[c.flight].dep_airport)].push_back(c.id);
  for (auto& list : departing)
    std::sort(list.begin(), list.end(), [&](int a, int b) {
      return copies[a].dep_time != copies[b].dep_time ? copies[a].dep_time < copies[b].dep_time : a < b;
    });

  std::vector<Connection> out;
  for (const auto& i : copies) {
    const Flight& fi = inst.flights[i.flight];
    Minutes tt = turn[fi.fleet_type];
    if (tt < 0) continue;
    int airport = idx.airport.at(fi.arr_airport);
    int type = idx.fleet_gate_type.at(fi.fleet_type);
    const auto& list = departing[airport];
    auto it = std::lower_bound(list.begin(), list.end(), i.arr_time + tt,
                               [&](int c, Minutes t) { return copies[c].dep_time < t; });
    for (; it != list.end(); ++it) {
      const FlightCopy& j = copies[*it];
      if (j.flight == i.flight) continue;
      if (inst.flights[j.flight].fleet_type != fi.fleet_type) continue;
      out.push_back({static_cast<int>(out.size()), i.id, j.id, airport, type});
    }
  }
  std::sort(out.begin(), out.end(), [](const Connection& a, const Connection& b) {
    return a.pred != b.pred ? a.pred < b.pred : a.succ < b.succ;
  });
  for (int e = 0; e < static_cast<int>(out.size()); ++e) out[e].id = e;
  return out;
}

Network::Network(Instance inst) : inst_(std::move(inst)), index_(inst_) {
  copies_ = generate_flight_copies(inst_);
  copy_slot_membership(inst_, copies_);
  connections_ = build_connections(inst_, copies_);

  const int nc = static_cast<int>(copies_.size());
  by_flight_.assign(inst_.flights.size(), {});
  usable_.assign(nc, 1);
  for (const auto& c : copies_) {
    by_flight_[c.flight].push_back(c.id);
    if (!flight_of(c.id).is_maintenance())
      usable_[c.id] = inst_.slots[c.dep_slot].dep_cap > 0 && inst_.slots[c.arr_slot].arr_cap > 0;
  }
  out_.assign(nc, {});
  for (const auto& e : connections_) {
    connection_lookup_.emplace(static_cast<std::uint64_t>(e.pred) * nc + e.succ, e.id);
    out_[e.pred].push_back(e.id);
  }

  // Gate keys: every (airport, type) with gates or with activities, in label order.
  std::map<std::pair<std::string, std::string>, GateKey> keyset;
  for (int a = 0; a < static_cast<int>(inst_.airports.size()); ++a)
    for (const auto& [type, count] : inst_.airports[a].gate_counts)
      keyset[{inst_.airports[a].code, type}] = {a, index_.gate_type.at(type)};
  for (const auto& f : inst_.flights) {
    int t = index_.fleet_gate_type.at(f.fleet_type);
    const std::string& tid = inst_.gate_types[t].id;
    keyset[{f.dep_airport, tid}] = {index_.airport.at(f.dep_airport), t};
    keyset[{f.arr_airport, tid}] = {index_.airport.at(f.arr_airport), t};
  }
  for (const auto& [label, key] : keyset) {
    keys_.push_back(key);
    const std::string& code = inst_.airports[key.airport].code;
    const std::string& tid = inst_.gate_types[key.gate_type].id;
    key_capacity_.push_back(inst_.gate_count(code, tid));
    key_cost_.push_back(inst_.pattern_cost(code, tid));
  }
  key_activities_.assign(keys_.size(), {});
  key_connections_.assign(keys_.size(), {});

  activities_.assign(2 * nc, Activity{});
  for (const auto& c : copies_) {
    const Flight& f = flight_of(c.id);
    int t = index_.fleet_gate_type.at(f.fleet_type);
    int dep_ap = index_.airport.at(f.dep_airport);
    int arr_ap = index_.airport.at(f.arr_airport);
    if (f.is_maintenance()) {
      Activity& a = activities_[2 * c.id];
      a = {2 * c.id, c.id, ActivityKind::Maintenance, dep_ap, t, gate_key(dep_ap, t), c.dep_time, c.arr_time};
      activities_[2 * c.id + 1].id = 2 * c.id + 1;
    } else {
      activities_[2 * c.id] = {2 * c.id, c.id, ActivityKind::Departure, dep_ap, t, gate_key(dep_ap, t), c.dep_time,
                               c.dep_time};
      activities_[2 * c.id + 1] = {2 * c.id + 1, c.id, ActivityKind::Arrival, arr_ap, t, gate_key(arr_ap, t),
                                   c.arr_time, c.arr_time};
    }
  }
  for (const auto& a : activities_)
    if (a.valid()) key_activities_[a.gate_key].push_back(a.id);
  for (auto& list : key_activities_)
    std::sort(list.begin(), list.end(), [&](int x, int y) {
      const Activity& u = activities_[x];
      const Activity& v = activities_[y];
      if (u.start != v.start) return u.start < v.start;
      if (u.end != v.end) return u.end < v.end;
      return x < y;
    });
  for (const auto& e : connections_) key_connections_[gate_key(e.airport, e.gate_type)].push_back(e.id);
}

int Network::find_connection(int pred, int succ) const {
  auto it = connection_lookup_.find(static_cast<std::uint64_t>(pred) * copies_.size() + succ);
  return it == connection_lookup_.end() ? -1 : it->second;
}

int Network::dep_activity(int c) const { return 2 * c; }

int Network::arr_activity(int c) const { return is_maintenance_copy(c) ? 2 * c : 2 * c + 1; }

int Network::gate_key(int airport, int gate_type) const {
  for (int k = 0; k < static_cast<int>(keys_.size()); ++k)
    if (keys_[k].airport == airport && keys_[k].gate_type == gate_type) return k;
  return -1;
}

std::string Network::key_label(int key) const {
  return inst_.airports[keys_[key].airport].code + "/" + inst_.gate_types[keys_[key].gate_type].id;
}

void Network::dump_edges(std::ostream& os) const {
  auto name = [&](int c) { return flight_of(c).id + "_" + std::to_string(copies_[c].delay); };
  os << "# pred succ airport gate_type\n";
  for (const auto& e : connections_)
    os << name(e.pred) << ' ' << name(e.succ) << ' ' << inst_.airports[e.airport].code << ' '
       << inst_.gate_types[e.gate_type].id << '\n';
}

}  // namespace sagr
