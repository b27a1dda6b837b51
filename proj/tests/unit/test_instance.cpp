#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "sagr/errors.hpp"
#include "sagr/generator.hpp"
#include "sagr/instance_io.hpp"

using namespace sagr;

namespace {

bool has_code(const std::vector<Violation>& v, const std::string& code) {
  for (const auto& x : v)
    if (x.code == code) return true;
  return false;
}

const char* kMinimal = R"({
  "airports": [{"code": "A", "gate_counts": {"n": 1}}, {"code": "B", "gate_counts": {"n": 1}}],
  "gate_types": [{"id": "n", "fleet_types": ["E190"]}],
  "slots": [{"airport": "A", "start": 0, "length": 100, "dep_cap": 1, "arr_cap": 1},
            {"airport": "B", "start": 0, "length": 100, "dep_cap": 1, "arr_cap": 1}],
  "flights": [{"id": "F", "dep_airport": "A", "arr_airport": "B", "sched_dep": 10, "sched_arr": 50, "fleet_type": "E190"}],
  "aircraft": [{"id": "R", "fleet_type": "E190", "start_airport": "A", "end_airport": "B", "turn_time": 20,
                "planned_flight_ids": ["F"]}],
  "recovery_window": {"start": 0, "end": 100},
  "disruption": [],
  "config": {"delay_interval": 10, "max_delay": 20}
})";

}  // namespace

TEST_CASE("minimal document parses") {
  Instance inst = parse_instance(kMinimal);
  CHECK(inst.flights.size() == 1);
  CHECK(inst.aircraft.size() == 1);
  CHECK(inst.config.delay_interval == 10);
  CHECK(inst.config.cancel_cost_default == 200.0);
  CHECK(validate_instance(inst).empty());
}

TEST_CASE("dangling airport is a reference error") {
  std::string text = kMinimal;
  text.replace(text.find("\"arr_airport\": \"B\""), 18, "\"arr_airport\": \"ZZZ\"");
  CHECK_THROWS_AS(parse_instance(text), ReferenceError);
}

TEST_CASE("syntax errors carry a line") {
  std::string text = kMinimal;
  text.replace(text.find("\"gate_types\""), 12, "\"gate_types\" oops");
  try {
    parse_instance(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("type errors carry the field path") {
  std::string text = kMinimal;
  text.replace(text.find("\"turn_time\": 20"), 15, "\"turn_time\": \"x\"");
  try {
    parse_instance(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.field() == "/aircraft/0/turn_time");
  }
}

TEST_CASE("T1 is valid and round-trips") {
  Instance t1 = fixtures::t1();
  CHECK(validate_instance(t1).empty());
  CHECK(t1.flights.size() == 2);
  CHECK(t1.airports.size() == 2);
  CHECK(t1.aircraft.size() == 1);
  Instance back = parse_instance(emit_instance(t1));
  CHECK(back == t1);
  Instance closed = fixtures::t1_closed(30, 90);
  CHECK(parse_instance(emit_instance(closed)) == closed);
}

TEST_CASE("shipped T1 file matches the builder") {
  CHECK(load_instance(fixtures::data_path("t1.json")) == fixtures::t1());
}

TEST_CASE("validation catches broken invariants") {
  Instance inst = fixtures::t1();
  inst.flights[0].sched_arr = inst.flights[0].sched_dep;
  CHECK(has_code(validate_instance(inst), "nonpositive_duration"));

  inst = fixtures::t1();
  inst.slots.push_back({"A", 15, 30, 1, 1});
  CHECK(has_code(validate_instance(inst), "slot_overlap"));

  inst = fixtures::t1();
  inst.config.max_delay = 50;
  CHECK(has_code(validate_instance(inst), "config"));

  inst = fixtures::t1();
  inst.aircraft[0].planned_flight_ids = {"F2", "F1"};
  CHECK(has_code(validate_instance(inst), "planned_chain"));
}

TEST_CASE("disruption overrides") {
  Instance closed = apply_disruption(fixtures::t1_closed(60, 120));
  for (const auto& s : closed.slots) {
    bool hit = s.airport == "A" && s.start < 120 && s.end() > 60;
    CHECK((s.dep_cap == 0) == hit);
    CHECK((s.arr_cap == 0) == hit);
  }
  CHECK(apply_disruption(closed) == closed);

  Instance flow = fixtures::t1();
  flow.slots[4].arr_cap = 4;
  flow.disruption.push_back({"A", {120, 150}, std::nullopt, 2});
  Instance after = apply_disruption(flow);
  for (std::size_t s = 0; s < after.slots.size(); ++s) {
    if (s == 4) CHECK(after.slots[s].arr_cap == 2);
    else CHECK(after.slots[s] == flow.slots[s]);
  }

  Instance none = fixtures::t1();
  CHECK(apply_disruption(none) == none);

  Instance bad = fixtures::t1();
  bad.disruption.push_back({"A", {300, 400}, 0, 0});
  CHECK_THROWS_AS(apply_disruption(bad), RangeError);
}

TEST_CASE("generated instances validate and round-trip") {
  for (int i = 0; i < 60; ++i) {
    Instance inst = generate_instance(desk_params(5, i));
    auto v = validate_instance(inst);
    INFO(i << (v.empty() ? "" : ": " + v.front().message));
    CHECK(v.empty());
    CHECK(parse_instance(emit_instance(inst)) == inst);
  }
}

TEST_CASE("shipped fixtures validate") {
  for (const char* name : {"t1.json", "seq_hub.json", "sensitivity.json"}) {
    INFO(name);
    CHECK(validate_instance(load_instance(fixtures::data_path(name))).empty());
  }
}
