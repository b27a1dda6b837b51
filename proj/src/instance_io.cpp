#include "sagr/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json_util.hpp"
#include "sagr/errors.hpp"

namespace sagr {

using detail::json;
using detail::Node;

namespace {

RecoveryConfig read_config(const Node& n) {
  RecoveryConfig c;
  n.allow_only({"delay_interval", "max_delay", "cancel_cost_default", "delay_cost_per_min", "swap_cost",
                "gate_pattern_cost", "gate_pattern_cost_overrides", "buffer_time", "epsilon", "time_limit",
                "max_legs", "columns_per_round", "cut_families", "alpha"});
  if (n.has("delay_interval")) c.delay_interval = n.int32("delay_interval");
  if (n.has("max_delay")) c.max_delay = n.int32("max_delay");
  if (n.has("cancel_cost_default")) c.cancel_cost_default = n.number("cancel_cost_default");
  if (n.has("delay_cost_per_min")) c.delay_cost_per_min = n.number("delay_cost_per_min");
  if (n.has("swap_cost")) c.swap_cost = n.number("swap_cost");
  if (n.has("gate_pattern_cost")) c.gate_pattern_cost = n.number("gate_pattern_cost");
  if (n.has("gate_pattern_cost_overrides")) {
    Node o = n.at("gate_pattern_cost_overrides");
    o.require_object();
    for (auto it = o.raw().begin(); it != o.raw().end(); ++it)
      c.gate_pattern_cost_overrides[it.key()] = o.number(it.key());
  }
  if (n.has("buffer_time")) c.buffer_time = n.int32("buffer_time");
  if (n.has("epsilon")) c.epsilon = n.number("epsilon");
  if (n.has("time_limit")) c.time_limit = n.number("time_limit");
  if (n.has("max_legs")) c.max_legs = n.int32("max_legs");
  if (n.has("columns_per_round")) c.columns_per_round = n.int32("columns_per_round");
  if (n.has("cut_families")) {
    c.cut_families.clear();
    for (const auto& f : n.at("cut_families").items()) {
      try {
        c.cut_families.insert(cut_family_from_string(f.str()));
      } catch (const ParseError&) {
        f.fail("unknown cut family");
      }
    }
  }
  if (n.has("alpha")) c.alpha = n.number("alpha");
  return c;
}

json write_config(const RecoveryConfig& c) {
  json j = json::object();
  j["delay_interval"] = c.delay_interval;
  j["max_delay"] = c.max_delay;
  j["cancel_cost_default"] = c.cancel_cost_default;
  j["delay_cost_per_min"] = c.delay_cost_per_min;
  j["swap_cost"] = c.swap_cost;
  j["gate_pattern_cost"] = c.gate_pattern_cost;
  j["gate_pattern_cost_overrides"] = c.gate_pattern_cost_overrides;
  j["buffer_time"] = c.buffer_time;
  j["epsilon"] = c.epsilon;
  j["time_limit"] = c.time_limit;
  j["max_legs"] = c.max_legs;
  j["columns_per_round"] = c.columns_per_round;
  json fams = json::array();
  for (auto f : c.cut_families) fams.push_back(to_string(f));
  j["cut_families"] = fams;
  if (c.alpha) j["alpha"] = *c.alpha;
  return j;
}

void check_references(const Instance& inst) {
  InstanceIndex idx(inst);
  auto need_airport = [&](const std::string& code, const std::string& where) {
    if (!idx.airport.count(code)) throw ReferenceError(where + ": unknown airport '" + code + "'");
  };
  auto need_fleet = [&](const std::string& fleet, const std::string& where) {
    if (!idx.fleet_gate_type.count(fleet))
      throw ReferenceError(where + ": fleet type '" + fleet + "' is not served by any gate type");
  };
  for (const auto& a : inst.airports)
    for (const auto& [type, count] : a.gate_counts)
      if (!idx.gate_type.count(type))
        throw ReferenceError("airport " + a.code + ": unknown gate type '" + type + "'");
  for (const auto& s : inst.slots) need_airport(s.airport, "slot");
  for (const auto& f : inst.flights) {
    need_airport(f.dep_airport, "flight " + f.id);
    need_airport(f.arr_airport, "flight " + f.id);
    need_fleet(f.fleet_type, "flight " + f.id);
  }
  for (const auto& r : inst.aircraft) {
    need_airport(r.start_airport, "aircraft " + r.id);
    need_airport(r.end_airport, "aircraft " + r.id);
    need_fleet(r.fleet_type, "aircraft " + r.id);
    if (r.maintenance && !idx.flight.count(*r.maintenance))
      throw ReferenceError("aircraft " + r.id + ": unknown maintenance flight '" + *r.maintenance + "'");
    for (const auto& fid : r.planned_flight_ids)
      if (!idx.flight.count(fid)) throw ReferenceError("aircraft " + r.id + ": unknown flight '" + fid + "'");
  }
  for (const auto& d : inst.disruption) need_airport(d.airport, "disruption");
}

}  // namespace

Instance parse_instance(std::string_view text) {
  json root = detail::parse_json(text);
  Node r(root, "");
  r.require_object();
  r.allow_only({"schema_version", "airports", "gate_types", "slots", "flights", "aircraft", "recovery_window",
                "disruption", "config"});
  if (r.has("schema_version") && r.int32("schema_version") != kInstanceSchemaVersion)
    r.fail("unsupported schema_version", "schema_version");

  Instance inst;
  for (const auto& n : r.at("airports").items()) {
    n.allow_only({"code", "gate_counts"});
    Airport a;
    a.code = n.str("code");
    if (n.has("gate_counts")) {
      Node g = n.at("gate_counts");
      g.require_object();
      for (auto it = g.raw().begin(); it != g.raw().end(); ++it) a.gate_counts[it.key()] = g.int32(it.key());
    }
    inst.airports.push_back(std::move(a));
  }
  for (const auto& n : r.at("gate_types").items()) {
    n.allow_only({"id", "fleet_types"});
    GateType t;
    t.id = n.str("id");
    for (const auto& f : n.at("fleet_types").items()) t.fleet_types.push_back(f.str());
    inst.gate_types.push_back(std::move(t));
  }
  for (const auto& n : r.at("slots").items()) {
    n.allow_only({"airport", "start", "length", "dep_cap", "arr_cap"});
    inst.slots.push_back({n.str("airport"), n.int32("start"), n.int32("length"), n.int32("dep_cap"),
                          n.int32("arr_cap")});
  }
  for (const auto& n : r.at("flights").items()) {
    n.allow_only({"id", "dep_airport", "arr_airport", "sched_dep", "sched_arr", "fleet_type", "cancel_cost"});
    Flight f;
    f.id = n.str("id");
    f.dep_airport = n.str("dep_airport");
    f.arr_airport = n.str("arr_airport");
    f.sched_dep = n.int32("sched_dep");
    f.sched_arr = n.int32("sched_arr");
    f.fleet_type = n.str("fleet_type");
    if (n.has("cancel_cost")) f.cancel_cost = n.number("cancel_cost");
    inst.flights.push_back(std::move(f));
  }
  for (const auto& n : r.at("aircraft").items()) {
    n.allow_only({"id", "fleet_type", "start_airport", "end_airport", "turn_time", "maintenance",
                  "planned_flight_ids"});
    Aircraft a;
    a.id = n.str("id");
    a.fleet_type = n.str("fleet_type");
    a.start_airport = n.str("start_airport");
    a.end_airport = n.str("end_airport");
    a.turn_time = n.int32("turn_time");
    if (n.has("maintenance")) a.maintenance = n.str("maintenance");
    if (n.has("planned_flight_ids"))
      for (const auto& f : n.at("planned_flight_ids").items()) a.planned_flight_ids.push_back(f.str());
    inst.aircraft.push_back(std::move(a));
  }
  Node w = r.at("recovery_window");
  w.allow_only({"start", "end"});
  inst.recovery_window = {w.int32("start"), w.int32("end")};
  if (r.has("disruption")) {
    for (const auto& n : r.at("disruption").items()) {
      n.allow_only({"airport", "start", "end", "dep_cap", "arr_cap"});
      CapacityOverride o;
      o.airport = n.str("airport");
      o.range = {n.int32("start"), n.int32("end")};
      if (n.has("dep_cap")) o.dep_cap = n.int32("dep_cap");
      if (n.has("arr_cap")) o.arr_cap = n.int32("arr_cap");
      inst.disruption.push_back(std::move(o));
    }
  }
  if (r.has("config")) inst.config = read_config(r.at("config"));
  check_references(inst);
  return inst;
}

std::string emit_instance(const Instance& inst) {
  json j = json::object();
  j["schema_version"] = kInstanceSchemaVersion;
  j["airports"] = json::array();
  for (const auto& a : inst.airports) j["airports"].push_back({{"code", a.code}, {"gate_counts", a.gate_counts}});
  j["gate_types"] = json::array();
  for (const auto& t : inst.gate_types) j["gate_types"].push_back({{"id", t.id}, {"fleet_types", t.fleet_types}});
  j["slots"] = json::array();
  for (const auto& s : inst.slots)
    j["slots"].push_back({{"airport", s.airport},
                          {"start", s.start},
                          {"length", s.length},
                          {"dep_cap", s.dep_cap},
                          {"arr_cap", s.arr_cap}});
  j["flights"] = json::array();
  for (const auto& f : inst.flights) {
    json o = {{"id", f.id},
              {"dep_airport", f.dep_airport},
              {"arr_airport", f.arr_airport},
              {"sched_dep", f.sched_dep},
              {"sched_arr", f.sched_arr},
              {"fleet_type", f.fleet_type}};
    if (f.cancel_cost) o["cancel_cost"] = *f.cancel_cost;
    j["flights"].push_back(std::move(o));
  }
  j["aircraft"] = json::array();
  for (const auto& a : inst.aircraft) {
    json o = {{"id", a.id},
              {"fleet_type", a.fleet_type},
              {"start_airport", a.start_airport},
              {"end_airport", a.end_airport},
              {"turn_time", a.turn_time},
              {"planned_flight_ids", a.planned_flight_ids}};
    o["maintenance"] = a.maintenance ? json(*a.maintenance) : json(nullptr);
    j["aircraft"].push_back(std::move(o));
  }
  j["recovery_window"] = {{"start", inst.recovery_window.start}, {"end", inst.recovery_window.end}};
  j["disruption"] = json::array();
  for (const auto& d : inst.disruption) {
    json o = {{"airport", d.airport}, {"start", d.range.start}, {"end", d.range.end}};
    if (d.dep_cap) o["dep_cap"] = *d.dep_cap;
    if (d.arr_cap) o["arr_cap"] = *d.arr_cap;
    j["disruption"].push_back(std::move(o));
  }
  j["config"] = write_config(inst.config);
  return j.dump(2) + "\n";
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot write " + path);
  out << emit_instance(inst);
}

std::vector<Violation> validate_instance(const Instance& inst) {
  std::vector<Violation> out;
  auto add = [&](std::string code, std::string msg) { out.push_back({std::move(code), std::move(msg)}); };
  InstanceIndex idx(inst);
  const auto& cfg = inst.config;
  const TimeRange win = inst.recovery_window;

  if (idx.airport.size() != inst.airports.size()) add("duplicate_id", "airport codes are not unique");
  if (idx.flight.size() != inst.flights.size()) add("duplicate_id", "flight ids are not unique");
  if (idx.aircraft.size() != inst.aircraft.size()) add("duplicate_id", "aircraft ids are not unique");
  if (idx.gate_type.size() != inst.gate_types.size()) add("duplicate_id", "gate type ids are not unique");
  {
    std::unordered_set<std::string> fleets;
    for (const auto& t : inst.gate_types)
      for (const auto& f : t.fleet_types)
        if (!fleets.insert(f).second) add("gate_type_ambiguous", "fleet " + f + " is served by several gate types");
  }
  for (const auto& a : inst.airports)
    for (const auto& [type, count] : a.gate_counts) {
      if (!idx.gate_type.count(type)) add("unknown_gate_type", "airport " + a.code + " lists gate type " + type);
      if (count < 0) add("negative_count", "airport " + a.code + " has a negative gate count");
    }

  if (win.start >= win.end) add("empty_window", "recovery window is empty");

  for (std::size_t ai = 0; ai < inst.airports.size(); ++ai) {
    const auto& list = idx.slots_by_airport[ai];
    Minutes cursor = win.start;
    for (int s : list) {
      const Slot& sl = inst.slots[s];
      if (sl.length <= 0) add("slot_length", "slot at " + sl.airport + " has nonpositive length");
      if (sl.dep_cap < 0 || sl.arr_cap < 0) add("slot_capacity", "slot at " + sl.airport + " has negative capacity");
      if (sl.start < cursor) add("slot_overlap", "slots overlap at " + sl.airport + " near minute " + std::to_string(sl.start));
      else if (sl.start > cursor) add("slot_gap", "slots leave a gap at " + sl.airport + " at minute " + std::to_string(cursor));
      cursor = std::max(cursor, sl.end());
    }
    if (cursor != win.end)
      add("slot_tiling", "slots at " + inst.airports[ai].code + " do not end at the recovery window end");
  }
  for (const auto& s : inst.slots)
    if (!idx.airport.count(s.airport)) add("unknown_airport", "slot references airport " + s.airport);

  for (const auto& f : inst.flights) {
    if (f.sched_dep >= f.sched_arr) add("nonpositive_duration", "flight " + f.id + " has nonpositive duration");
    if (!idx.airport.count(f.dep_airport) || !idx.airport.count(f.arr_airport))
      add("unknown_airport", "flight " + f.id + " references an unknown airport");
    if (!idx.fleet_gate_type.count(f.fleet_type))
      add("unknown_fleet", "flight " + f.id + " has fleet " + f.fleet_type + " without a gate type");
    if (f.sched_dep < win.start || f.sched_arr >= win.end)
      add("outside_window", "flight " + f.id + " is not inside the recovery window");
    if (f.cancel_cost && *f.cancel_cost < 0) add("negative_cost", "flight " + f.id + " has a negative cancel cost");
  }

  std::unordered_map<std::string, std::string> owner;
  for (const auto& r : inst.aircraft) {
    if (!idx.airport.count(r.start_airport) || !idx.airport.count(r.end_airport))
      add("unknown_airport", "aircraft " + r.id + " references an unknown airport");
    if (!idx.fleet_gate_type.count(r.fleet_type))
      add("unknown_fleet", "aircraft " + r.id + " has fleet " + r.fleet_type + " without a gate type");
    if (r.turn_time < 1) add("turn_time", "aircraft " + r.id + " needs a turn time of at least 1 minute");
    if (r.maintenance) {
      auto it = idx.flight.find(*r.maintenance);
      if (it == idx.flight.end()) {
        add("unknown_flight", "aircraft " + r.id + " references maintenance " + *r.maintenance);
      } else {
        const Flight& mt = inst.flights[it->second];
        if (!mt.is_maintenance()) add("maintenance_kind", "maintenance " + mt.id + " is not a pseudo-flight");
        if (mt.fleet_type != r.fleet_type) add("maintenance_fleet", "maintenance " + mt.id + " fleet mismatch");
        if (owner.count("mt:" + mt.id)) add("maintenance_shared", "maintenance " + mt.id + " assigned twice");
        owner["mt:" + mt.id] = r.id;
      }
    }
    std::string at = r.start_airport;
    Minutes ready = win.start;
    bool chain_ok = true;
    for (const auto& fid : r.planned_flight_ids) {
      auto it = idx.flight.find(fid);
      if (it == idx.flight.end()) {
        add("unknown_flight", "aircraft " + r.id + " plans unknown flight " + fid);
        chain_ok = false;
        break;
      }
      if (owner.count(fid)) add("planned_twice", "flight " + fid + " is planned on two aircraft");
      owner[fid] = r.id;
      const Flight& f = inst.flights[it->second];
      if (f.fleet_type != r.fleet_type) add("planned_fleet", "aircraft " + r.id + " plans flight " + fid + " of another fleet");
      if (f.dep_airport != at || f.sched_dep < ready) chain_ok = false;
      at = f.arr_airport;
      ready = f.sched_arr + r.turn_time;
    }
    if (!chain_ok) add("planned_chain", "aircraft " + r.id + " planned flights are not a feasible chain");
    else if (at != r.end_airport) add("planned_chain", "aircraft " + r.id + " planned chain does not end at its end airport");
  }
  for (const auto& f : inst.flights)
    if (f.is_maintenance() && !owner.count("mt:" + f.id))
      add("orphan_maintenance", "maintenance " + f.id + " is not assigned to an aircraft");

  if (cfg.delay_interval <= 0) add("config", "delay_interval must be positive");
  else if (cfg.max_delay < 0 || cfg.max_delay % cfg.delay_interval != 0)
    add("config", "delay_interval must divide max_delay");
  if (cfg.alpha && (*cfg.alpha < 0 || *cfg.alpha >= 1)) add("config", "alpha must lie in [0, 1)");
  if (!(cfg.epsilon > 0)) add("config", "epsilon must be positive");
  if (cfg.buffer_time < 1) add("config", "buffer_time must be at least 1 minute");
  if (cfg.max_legs < 1) add("config", "max_legs must be at least 1");
  if (cfg.columns_per_round < 1) add("config", "columns_per_round must be at least 1");
  if (!(cfg.time_limit > 0)) add("config", "time_limit must be positive");
  if (cfg.cancel_cost_default < 0 || cfg.delay_cost_per_min < 0 || cfg.swap_cost < 0 || cfg.gate_pattern_cost < 0)
    add("config", "costs must be nonnegative");

  for (const auto& d : inst.disruption) {
    if (!idx.airport.count(d.airport)) add("unknown_airport", "disruption references airport " + d.airport);
    if (d.range.start >= d.range.end) add("disruption_range", "disruption at " + d.airport + " has an empty range");
    if (d.range.start < win.start || d.range.end > win.end)
      add("disruption_range", "disruption at " + d.airport + " leaves the recovery window");
    if ((d.dep_cap && *d.dep_cap < 0) || (d.arr_cap && *d.arr_cap < 0))
      add("slot_capacity", "disruption at " + d.airport + " has a negative capacity");
  }
  return out;
}

Instance apply_disruption(const Instance& inst) {
  Instance out = inst;
  for (const auto& d : inst.disruption) {
    if (d.range.start < inst.recovery_window.start || d.range.end > inst.recovery_window.end ||
        d.range.start >= d.range.end)
      throw RangeError("disruption at " + d.airport + " [" + std::to_string(d.range.start) + "," +
                       std::to_string(d.range.end) + ") is outside the recovery window");
    for (auto& s : out.slots) {
      if (s.airport != d.airport) continue;
      if (s.start >= d.range.end || s.end() <= d.range.start) continue;
      if (d.dep_cap) s.dep_cap = *d.dep_cap;
      if (d.arr_cap) s.arr_cap = *d.arr_cap;
    }
  }
  return out;
}

}  // namespace sagr
