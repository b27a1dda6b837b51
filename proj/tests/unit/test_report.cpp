#include <doctest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "fixtures.hpp"
#include "sagr/bcg.hpp"
#include "sagr/errors.hpp"
#include "sagr/report.hpp"

using namespace sagr;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Timing fields zeroed so the document is reproducible.
Report t1_report() {
  Instance inst = fixtures::t1();
  SolverOptions o;
  o.workers = 1;
  RunResult r = run_bcg(inst, o);
  r.metrics.cpu_seconds = 0.0;
  for (auto& it : r.log) it.seconds = 0.0;
  return make_report(Network(inst), r, "t1");
}

}  // namespace

TEST_CASE("report round trip") {
  Report r = t1_report();
  CHECK(r.status == "solved");
  CHECK(r.metrics.total_cost == doctest::Approx(8));
  REQUIRE(r.routes.size() == 1);
  CHECK(r.routes[0].aircraft == "R1");
  CHECK(r.routes[0].legs.size() == 2);
  CHECK(r.gates.size() == 2);
  CHECK(r.cancelled.empty());
  CHECK_FALSE(r.log.empty());
  CHECK(parse_report(emit_report(r)) == r);
}

TEST_CASE("golden report") {
  const std::string golden = read_file(std::string(SAGR_GOLDEN_DIR) + "/t1_report.json");
  REQUIRE_FALSE(golden.empty());
  Report g = parse_report(golden);
  CHECK(emit_report(g) == golden);
  Report r = t1_report();
  CHECK(g.metrics == r.metrics);
  CHECK(g.routes == r.routes);
  CHECK(g.gates == r.gates);
  CHECK(g.cancelled == r.cancelled);
}

TEST_CASE("unbounded figures survive as null") {
  Report r;
  r.method = "bcg";
  r.status = "time_limit";
  r.ub = std::numeric_limits<double>::infinity();
  r.metrics.optimality_gap = std::numeric_limits<double>::infinity();
  IterationRecord it;
  it.gap = std::numeric_limits<double>::infinity();
  r.log.push_back(it);
  std::string text = emit_report(r);
  CHECK(text.find("\"ub\": null") != std::string::npos);
  Report back = parse_report(text);
  CHECK(std::isinf(back.ub));
  CHECK(std::isinf(back.metrics.optimality_gap));
  CHECK(back == r);
}

TEST_CASE("malformed report names the field") {
  Report r = t1_report();
  std::string text = emit_report(r);
  auto pos = text.find("\"used_gates\": 2");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 15, "\"used_gates\": \"2\"");
  try {
    parse_report(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.field() == "/metrics/used_gates");
  }
  CHECK_THROWS_AS(parse_report("{"), ParseError);
}

TEST_CASE("csv row") {
  Report r;
  r.instance = "1";
  r.method = "bcg";
  r.status = "solved";
  r.metrics = metrics_from_counts(RecoveryConfig{}, 2, 20, 10, 15, 480, 477);
  r.metrics.cpu_seconds = 1.5;
  CHECK(csv_header() ==
        "instance,method,status,canceled_flights,total_delay_minutes,swapped_tail_assignments,used_gates,"
        "schedule_aircraft_cost,gate_cost,total_cost,optimality_gap_percent,cpu_seconds");
  CHECK(csv_row(r) == "1,bcg,solved,2,20,10,15,420.00,60.00,480.00,0.63,1.500");
  r.method = "seq-oe";
  r.status = "gate_infeasible";
  CHECK(csv_row(r) == "1,seq-oe,gate_infeasible,2,20,10,15,420.00,infea,infea,infea,1.500");
  r.instance = "a,b";
  CHECK(csv_row(r).rfind("\"a,b\",", 0) == 0);
}

TEST_CASE("all flights cancelled") {
  RecoveryConfig cfg;
  Metrics m = metrics_from_counts(cfg, 24, 0, 0, 0, 4800, 4800);
  CHECK(m.schedule_aircraft_cost == 4800);
  CHECK(m.gate_cost == 0);
  CHECK(m.total_cost == 4800);
}
