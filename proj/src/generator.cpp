#include "sagr/generator.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "sagr/bcg.hpp"

namespace sagr {

Instance generate_instance(const GeneratorParams& p) {
  std::mt19937_64 rng(p.seed);
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto coin = [&](double prob) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < prob; };

  Instance inst;
  inst.config.delay_interval = coin(0.5) ? 15 : 30;
  inst.config.max_delay = coin(0.5) ? 60 : 90;
  inst.config.buffer_time = 15;
  inst.recovery_window = {0, 900};

  const int na = std::max(2, p.airports);
  for (int a = 0; a < na; ++a) inst.airports.push_back({"AP" + std::to_string(a), {}});
  const char* fleets[] = {"N320", "W330"};
  const char* types[] = {"narrow", "wide"};
  const int nt = std::clamp(p.gate_types, 1, 2);
  for (int t = 0; t < nt; ++t) inst.gate_types.push_back({types[t], {fleets[t]}});

  const int nr = std::max(1, p.aircraft);
  std::vector<int> legs(nr, 1);
  for (int extra = p.flights - nr; extra > 0; --extra) ++legs[uni(0, nr - 1)];

  int fid = 0;
  int mt_budget = 12 - p.flights;
  for (int r = 0; r < nr; ++r) {
    Aircraft ac;
    ac.id = "R" + std::to_string(r + 1);
    int t = nt == 1 ? 0 : r % 2;
    ac.fleet_type = fleets[t];
    ac.turn_time = uni(2, 4) * 10;
    int at = uni(0, na - 1);
    ac.start_airport = inst.airports[at].code;
    Minutes clock = uni(1, 8) * 15;
    bool want_mt = p.maintenance && mt_budget > 0 && coin(0.25);
    if (want_mt) --mt_budget;
    int mt_after = uni(0, legs[r] - 1);
    for (int k = 0; k < legs[r]; ++k) {
      int to = uni(0, na - 2);
      if (to >= at) ++to;
      Flight f;
      f.id = "F" + std::to_string(++fid);
      f.dep_airport = inst.airports[at].code;
      f.arr_airport = inst.airports[to].code;
      f.sched_dep = clock;
      f.sched_arr = clock + uni(3, 8) * 15;
      f.fleet_type = ac.fleet_type;
      inst.flights.push_back(f);
      ac.planned_flight_ids.push_back(f.id);
      clock = f.sched_arr + ac.turn_time + uni(0, 4) * 15;
      at = to;
      if (want_mt && k == mt_after) {
        Flight mt;
        mt.id = "MT" + std::to_string(r + 1);
        mt.dep_airport = mt.arr_airport = inst.airports[at].code;
        mt.sched_dep = clock;
        mt.sched_arr = clock + uni(2, 4) * 15;
        mt.fleet_type = ac.fleet_type;
        inst.flights.push_back(mt);
        ac.planned_flight_ids.push_back(mt.id);
        ac.maintenance = mt.id;
        clock = mt.sched_arr + ac.turn_time;
      }
    }
    ac.end_airport = inst.airports[at].code;
    inst.aircraft.push_back(std::move(ac));
  }
  Minutes last = 0;
  for (const auto& f : inst.flights) last = std::max(last, f.sched_arr);
  Minutes end = last + 60 + inst.config.max_delay;
  inst.recovery_window.end = std::max<Minutes>(600, (end + 59) / 60 * 60);

  for (const auto& a : inst.airports)
    for (Minutes s = inst.recovery_window.start; s < inst.recovery_window.end; s += 60)
      inst.slots.push_back({a.code, s, 60, uni(1, 3), uni(1, 3)});

  // Gate counts: what the plan needs plus zero or one spare gate, so the
  // undisrupted schedule is always gate-feasible.
  for (auto& a : inst.airports)
    for (const auto& f : inst.flights)
      if (f.dep_airport == a.code || f.arr_airport == a.code)
        a.gate_counts[f.fleet_type == fleets[0] ? types[0] : types[1]] = 1;
  const auto need = planned_gate_need(inst);
  for (auto& a : inst.airports)
    for (auto& [type, n] : a.gate_counts) n = std::max(1, need.at(a.code + "/" + type)) + uni(0, 1);

  if (p.disruption) {
    const auto& a = inst.airports[uni(0, na - 1)];
    Minutes start = uni(1, 8) * 30;
    CapacityOverride o;
    o.airport = a.code;
    o.range = {start, start + 60};
    if (coin(0.5)) {
      o.dep_cap = 0;
      o.arr_cap = 0;
    } else {
      o.arr_cap = 0;
      o.dep_cap = 1;
    }
    inst.disruption.push_back(o);
  }
  return inst;
}

GeneratorParams desk_params(std::uint64_t seed, int index) {
  std::mt19937_64 rng(seed * 1000003ULL + static_cast<std::uint64_t>(index));
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  GeneratorParams p;
  p.aircraft = uni(2, 4);
  p.flights = uni(std::max(4, p.aircraft), 12);
  p.airports = uni(2, 5);
  p.gate_types = uni(1, 2);
  p.seed = rng();
  return p;
}

Instance generate_hub_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Instance inst;
  const int k = uni(5, 6);
  const char* spokes[] = {"S1", "S2", "S3"};
  inst.gate_types = {{"narrow", {"A320"}}};
  inst.recovery_window = {0, 480};
  std::map<int, int> hub_arrivals;
  for (int r = 0; r < k; ++r) {
    // The first three aircraft sit at S1, where departures get closed.
    std::string home = r < 3 ? "S1" : spokes[r % 3];
    int arr = 5 * uni(24, 44);
    int back = arr + 30 + 5 * uni(0, 4);
    std::string in = "F" + std::to_string(2 * r + 1), out = "F" + std::to_string(2 * r + 2);
    inst.flights.push_back({in, home, "H", arr - 60, arr, "A320", std::nullopt});
    inst.flights.push_back({out, "H", home, back, back + 60, "A320", std::nullopt});
    inst.aircraft.push_back({"R" + std::to_string(r + 1), "A320", home, home, 30, std::nullopt, {in, out}});
    ++hub_arrivals[arr / 60];
  }
  for (const char* ap : {"H", "S1", "S2", "S3"})
    for (int t = 0; t < 480; t += 60) {
      // Hub arrival caps of 6-7: a 10% cut keeps five or six arrivals an hour,
      // a 20% cut only four or five.
      int arr_cap = std::string(ap) == "H" ? std::max(hub_arrivals[t / 60], uni(6, 7)) : 10;
      inst.slots.push_back({ap, t, 60, 10, arr_cap});
    }
  inst.airports = {{"H", {{"narrow", 1}}}, {"S1", {{"narrow", 3}}}, {"S2", {{"narrow", 3}}}, {"S3", {{"narrow", 3}}}};
  inst.airports[0].gate_counts["narrow"] = std::max(1, planned_gate_need(inst)["H/narrow"]);
  inst.disruption.push_back({"S1", {60, 60 + 60 * uni(1, 2)}, 0, std::nullopt});
  inst.config.max_delay = 120;
  return inst;
}

}  // namespace sagr
