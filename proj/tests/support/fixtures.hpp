#pragma once

#include <string>

#include "sagr/instance.hpp"

namespace fixtures {

// T1: one A320 rotating A -> B -> A.
//   F1 A->B 60-120, F2 B->A 180-240, turn 30, window [0,360), 30-minute slots
//   with capacity 2, delays 0/30/60, one narrow gate at each airport.
inline sagr::Instance t1() {
  sagr::Instance inst;
  inst.airports = {{"A", {{"narrow", 1}}}, {"B", {{"narrow", 1}}}};
  inst.gate_types = {{"narrow", {"A320"}}};
  inst.recovery_window = {0, 360};
  for (const char* ap : {"A", "B"})
    for (int s = 0; s < 360; s += 30) inst.slots.push_back({ap, s, 30, 2, 2});
  inst.flights = {{"F1", "A", "B", 60, 120, "A320", std::nullopt}, {"F2", "B", "A", 180, 240, "A320", std::nullopt}};
  inst.aircraft = {{"R1", "A320", "A", "A", 30, std::nullopt, {"F1", "F2"}}};
  inst.config.delay_interval = 30;
  inst.config.max_delay = 60;
  inst.config.buffer_time = 15;
  return inst;
}

inline sagr::Instance t1_closed(int start, int end) {
  sagr::Instance inst = t1();
  inst.disruption.push_back({"A", {start, end}, 0, 0});
  return inst;
}

// T1 with a second A320 flying the same rotation; B has a single gate, so the
// planned schedule needs two gates there at once.
inline sagr::Instance t1_overload() {
  sagr::Instance inst = t1();
  inst.airports = {{"A", {{"narrow", 2}}}, {"B", {{"narrow", 1}}}};
  inst.flights.push_back({"F3", "A", "B", 60, 120, "A320", std::nullopt});
  inst.flights.push_back({"F4", "B", "A", 180, 240, "A320", std::nullopt});
  inst.aircraft.push_back({"R2", "A320", "A", "A", 30, std::nullopt, {"F3", "F4"}});
  inst.config.max_delay = 90;
  return inst;
}

inline std::string data_path(const std::string& name) { return std::string(SAGR_DATA_DIR) + "/" + name; }

}  // namespace fixtures
