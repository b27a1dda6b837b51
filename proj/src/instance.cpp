#include "sagr/instance.hpp"

#include <algorithm>

#include "sagr/errors.hpp"

namespace sagr {

double Instance::pattern_cost(const std::string& airport, const std::string& gate_type) const {
  auto it = config.gate_pattern_cost_overrides.find(airport + "/" + gate_type);
  return it == config.gate_pattern_cost_overrides.end() ? config.gate_pattern_cost : it->second;
}

int Instance::gate_count(const std::string& airport, const std::string& gate_type) const {
  for (const auto& a : airports) {
    if (a.code != airport) continue;
    auto it = a.gate_counts.find(gate_type);
    return it == a.gate_counts.end() ? 0 : it->second;
  }
  return 0;
}

InstanceIndex::InstanceIndex(const Instance& inst) {
  for (int i = 0; i < static_cast<int>(inst.airports.size()); ++i) airport.emplace(inst.airports[i].code, i);
  for (int i = 0; i < static_cast<int>(inst.gate_types.size()); ++i) {
    gate_type.emplace(inst.gate_types[i].id, i);
    for (const auto& fleet : inst.gate_types[i].fleet_types) fleet_gate_type.emplace(fleet, i);
  }
  for (int i = 0; i < static_cast<int>(inst.flights.size()); ++i) flight.emplace(inst.flights[i].id, i);
  for (int i = 0; i < static_cast<int>(inst.aircraft.size()); ++i) aircraft.emplace(inst.aircraft[i].id, i);
  slots_by_airport.assign(inst.airports.size(), {});
  for (int s = 0; s < static_cast<int>(inst.slots.size()); ++s) {
    auto it = airport.find(inst.slots[s].airport);
    if (it != airport.end()) slots_by_airport[it->second].push_back(s);
  }
  for (auto& list : slots_by_airport) {
    std::sort(list.begin(), list.end(), [&](int a, int b) {
      return inst.slots[a].start != inst.slots[b].start ? inst.slots[a].start < inst.slots[b].start : a < b;
    });
  }
}

Instance merge_gate_types(const Instance& inst) {
  Instance out = inst;
  GateType any{"any", {}};
  for (const auto& t : inst.gate_types)
    for (const auto& f : t.fleet_types) any.fleet_types.push_back(f);
  out.gate_types = {any};
  out.config.gate_pattern_cost_overrides.clear();
  for (auto& a : out.airports) {
    int total = 0;
    std::optional<double> cost;
    for (const auto& [type, n] : a.gate_counts) {
      total += n;
      double c = inst.pattern_cost(a.code, type);
      cost = cost ? std::min(*cost, c) : c;
    }
    a.gate_counts = {{"any", total}};
    if (cost && *cost != inst.config.gate_pattern_cost) out.config.gate_pattern_cost_overrides[a.code + "/any"] = *cost;
  }
  return out;
}

std::string to_string(CutFamily f) {
  switch (f) {
    case CutFamily::BendersOpt: return "BendersOpt";
    case CutFamily::Llc: return "LLC";
    case CutFamily::Global: return "Global";
  }
  return "?";
}

CutFamily cut_family_from_string(const std::string& s) {
  std::string k;
  for (char c : s) k.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (k == "bendersopt" || k == "benders" || k == "opt") return CutFamily::BendersOpt;
  if (k == "llc") return CutFamily::Llc;
  if (k == "global" || k == "gc") return CutFamily::Global;
  throw ParseError("unknown cut family '" + s + "'", 0, "config/cut_families");
}

}  // namespace sagr
