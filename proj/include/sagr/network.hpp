#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "sagr/instance.hpp"

namespace sagr {

struct FlightCopy {
  int id = -1;
  int flight = -1;
  Minutes delay = 0;
  Minutes dep_time = 0;
  Minutes arr_time = 0;
  int dep_slot = -1;
  int arr_slot = -1;
  double delay_cost = 0.0;
};

struct Connection {
  int id = -1;
  int pred = -1;  // copy ids
  int succ = -1;
  int airport = -1;
  int gate_type = -1;
};

enum class ActivityKind : std::uint8_t { Departure, Arrival, Maintenance };

// Gate-side event of a copy. Departures and arrivals are instants; a
// maintenance pseudo-flight occupies its gate over [dep_time, arr_time].
struct Activity {
  int id = -1;
  int copy = -1;
  ActivityKind kind = ActivityKind::Departure;
  int airport = -1;
  int gate_type = -1;
  int gate_key = -1;  // -1 marks an unused id (second side of a maintenance copy)
  Minutes start = 0;
  Minutes end = 0;

  bool valid() const { return gate_key >= 0; }
  // Ends an aircraft's stay at the gate (departure) or begins one (arrival);
  // maintenance does both.
  bool incoming() const { return kind != ActivityKind::Departure; }
  bool outgoing() const { return kind != ActivityKind::Arrival; }
};

struct GateKey {
  int airport = -1;
  int gate_type = -1;
};

inline int activity_id(int copy, ActivityKind kind) { return 2 * copy + (kind == ActivityKind::Arrival ? 1 : 0); }

std::vector<FlightCopy> generate_flight_copies(const Instance& inst);

// Fills dep_slot/arr_slot. Throws CoverageError when a time lies in no slot.
void copy_slot_membership(const Instance& inst, std::vector<FlightCopy>& copies);

std::vector<Connection> build_connections(const Instance& inst, const std::vector<FlightCopy>& copies);

// Minimum turn time over aircraft of `fleet`; -1 when the fleet has no aircraft.
Minutes min_turn_time(const Instance& inst, const std::string& fleet);

class Network {
 public:
  explicit Network(Instance inst);

  const Instance& instance() const { return inst_; }
  const InstanceIndex& index() const { return index_; }
  const RecoveryConfig& config() const { return inst_.config; }

  int num_flights() const { return static_cast<int>(inst_.flights.size()); }
  int num_aircraft() const { return static_cast<int>(inst_.aircraft.size()); }
  int num_slots() const { return static_cast<int>(inst_.slots.size()); }

  const std::vector<FlightCopy>& copies() const { return copies_; }
  const FlightCopy& copy(int c) const { return copies_[c]; }
  const Flight& flight_of(int c) const { return inst_.flights[copies_[c].flight]; }
  const std::vector<int>& copies_of(int flight) const { return by_flight_[flight]; }
  bool is_maintenance_copy(int c) const { return flight_of(c).is_maintenance(); }
  // Regular copies in a slot with zero departure or arrival capacity can never be flown.
  bool usable(int c) const { return usable_[c]; }

  const std::vector<Connection>& connections() const { return connections_; }
  const Connection& connection(int e) const { return connections_[e]; }
  int find_connection(int pred, int succ) const;
  const std::vector<int>& out_connections(int c) const { return out_[c]; }

  int num_activity_ids() const { return static_cast<int>(activities_.size()); }
  const Activity& activity(int id) const { return activities_[id]; }
  int dep_activity(int c) const;
  int arr_activity(int c) const;

  const std::vector<GateKey>& gate_keys() const { return keys_; }
  int gate_key(int airport, int gate_type) const;
  int capacity(int key) const { return key_capacity_[key]; }
  double pattern_cost(int key) const { return key_cost_[key]; }
  const std::vector<int>& activities_at(int key) const { return key_activities_[key]; }  // sorted by time
  const std::vector<int>& connections_at(int key) const { return key_connections_[key]; }
  std::string key_label(int key) const;

  int fleet_gate_type(const std::string& fleet) const { return index_.fleet_gate_type.at(fleet); }

  void dump_edges(std::ostream& os) const;

 private:
  Instance inst_;
  InstanceIndex index_;
  std::vector<FlightCopy> copies_;
  std::vector<std::vector<int>> by_flight_;
  std::vector<char> usable_;
  std::vector<Connection> connections_;
  std::unordered_map<std::uint64_t, int> connection_lookup_;
  std::vector<std::vector<int>> out_;
  std::vector<Activity> activities_;
  std::vector<GateKey> keys_;
  std::vector<int> key_capacity_;
  std::vector<double> key_cost_;
  std::vector<std::vector<int>> key_activities_;
  std::vector<std::vector<int>> key_connections_;
};

}  // namespace sagr
