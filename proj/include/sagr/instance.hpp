#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace sagr {

using Minutes = int;

struct Airport {
  std::string code;
  std::map<std::string, int> gate_counts;  // gate type id -> n_{a,t}

  bool operator==(const Airport&) const = default;
};

// A gate type and the fleet types whose aircraft it may serve.
struct GateType {
  std::string id;
  std::vector<std::string> fleet_types;

  bool operator==(const GateType&) const = default;
};

// Half-open interval [start, start + length).
struct Slot {
  std::string airport;
  Minutes start = 0;
  Minutes length = 0;
  int dep_cap = 0;
  int arr_cap = 0;

  Minutes end() const { return start + length; }
  bool contains(Minutes t) const { return t >= start && t < end(); }
  bool operator==(const Slot&) const = default;
};

struct Flight {
  std::string id;
  std::string dep_airport;
  std::string arr_airport;
  Minutes sched_dep = 0;
  Minutes sched_arr = 0;
  std::string fleet_type;
  std::optional<double> cancel_cost;  // falls back to config.cancel_cost_default

  bool is_maintenance() const { return dep_airport == arr_airport; }
  bool operator==(const Flight&) const = default;
};

struct Aircraft {
  std::string id;
  std::string fleet_type;
  std::string start_airport;
  std::string end_airport;
  Minutes turn_time = 0;
  std::optional<std::string> maintenance;
  std::vector<std::string> planned_flight_ids;

  bool operator==(const Aircraft&) const = default;
};

struct TimeRange {
  Minutes start = 0;
  Minutes end = 0;

  bool operator==(const TimeRange&) const = default;
};

// Replaces the capacities of every slot at `airport` intersecting `range`.
// An absent capacity is left untouched.
struct CapacityOverride {
  std::string airport;
  TimeRange range;
  std::optional<int> dep_cap;
  std::optional<int> arr_cap;

  bool operator==(const CapacityOverride&) const = default;
};

enum class CutFamily { BendersOpt, Llc, Global };

struct RecoveryConfig {
  Minutes delay_interval = 5;
  Minutes max_delay = 120;
  double cancel_cost_default = 200.0;
  double delay_cost_per_min = 1.0;
  double swap_cost = 0.0;
  double gate_pattern_cost = 4.0;
  // "AIRPORT/TYPE" -> c_{a,t}
  std::map<std::string, double> gate_pattern_cost_overrides;
  Minutes buffer_time = 15;
  double epsilon = 0.05;
  double time_limit = 60.0;
  int max_legs = 12;
  int columns_per_round = 10;
  std::set<CutFamily> cut_families{CutFamily::BendersOpt, CutFamily::Llc, CutFamily::Global};
  std::optional<double> alpha;

  bool operator==(const RecoveryConfig&) const = default;
};

struct Instance {
  std::vector<Airport> airports;
  std::vector<GateType> gate_types;
  std::vector<Slot> slots;
  std::vector<Flight> flights;
  std::vector<Aircraft> aircraft;
  TimeRange recovery_window;
  std::vector<CapacityOverride> disruption;
  RecoveryConfig config;

  bool operator==(const Instance&) const = default;

  double cancel_cost(const Flight& f) const {
    return f.cancel_cost.value_or(config.cancel_cost_default);
  }
  double pattern_cost(const std::string& airport, const std::string& gate_type) const;
  int gate_count(const std::string& airport, const std::string& gate_type) const;
};

// Id -> position lookups. Built on demand; an Instance stays a plain value.
struct InstanceIndex {
  std::unordered_map<std::string, int> airport;
  std::unordered_map<std::string, int> gate_type;
  std::unordered_map<std::string, int> flight;
  std::unordered_map<std::string, int> aircraft;
  std::unordered_map<std::string, int> fleet_gate_type;  // fleet type -> gate type index
  std::vector<std::vector<int>> slots_by_airport;        // sorted by start

  explicit InstanceIndex(const Instance& inst);
};

// One gate type serving every fleet, gate counts summed per airport and each
// airport priced at its cheapest type. Every recovery of `inst` stays feasible.
Instance merge_gate_types(const Instance& inst);

std::string to_string(CutFamily f);
CutFamily cut_family_from_string(const std::string& s);

}  // namespace sagr
