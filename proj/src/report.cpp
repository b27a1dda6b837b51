#include "sagr/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json_util.hpp"
#include "sagr/errors.hpp"

namespace sagr {

using detail::json;
using detail::Node;

namespace {

const char* kind_label(ActivityKind k) {
  switch (k) {
    case ActivityKind::Departure: return "dep";
    case ActivityKind::Arrival: return "arr";
    case ActivityKind::Maintenance: return "mt";
  }
  return "?";
}

// JSON has no infinity; an unbounded figure is written as null.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_inf(const Node& n, const std::string& key) {
  if (!n.raw().contains(key)) n.fail("missing field", key);
  if (n.raw().at(key).is_null()) return std::numeric_limits<double>::infinity();
  return n.number(key);
}

json metrics_json(const Metrics& m) {
  return {{"canceled_flights", m.canceled_flights},
          {"total_delay_minutes", m.total_delay_minutes},
          {"swapped_tail_assignments", m.swapped_tail_assignments},
          {"used_gates", m.used_gates},
          {"schedule_aircraft_cost", m.schedule_aircraft_cost},
          {"gate_cost", m.gate_cost},
          {"total_cost", m.total_cost},
          {"optimality_gap", number_or_null(m.optimality_gap)},
          {"cpu_seconds", m.cpu_seconds}};
}

Metrics parse_metrics(const Node& n) {
  Metrics m;
  m.canceled_flights = n.int32("canceled_flights");
  m.total_delay_minutes = n.int32("total_delay_minutes");
  m.swapped_tail_assignments = n.int32("swapped_tail_assignments");
  m.used_gates = n.int32("used_gates");
  m.schedule_aircraft_cost = n.number("schedule_aircraft_cost");
  m.gate_cost = n.number("gate_cost");
  m.total_cost = n.number("total_cost");
  m.optimality_gap = number_or_inf(n, "optimality_gap");
  m.cpu_seconds = n.number("cpu_seconds");
  return m;
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Report make_report(const Network& net, const RunResult& res, std::string instance_name) {
  const Instance& inst = net.instance();
  Report r;
  r.instance = std::move(instance_name);
  r.method = res.method;
  r.status = to_string(res.status);
  r.metrics = res.metrics;
  r.lb = res.plan.lb;
  r.ub = res.plan.ub;
  for (int f : res.plan.cancelled) r.cancelled.push_back(inst.flights[f].id);
  for (const auto& route : res.plan.routes) {
    ReportRoute rr;
    rr.aircraft = inst.aircraft[route.aircraft].id;
    rr.cost = route.cost;
    rr.swaps = route.swaps;
    for (int c : route.copies) {
      const FlightCopy& fc = net.copy(c);
      rr.legs.push_back({inst.flights[fc.flight].id, fc.dep_time, fc.arr_time, fc.delay});
    }
    r.routes.push_back(std::move(rr));
  }
  for (const auto& g : res.plan.gates) {
    const GateKey& key = net.gate_keys()[g.key];
    ReportGate rg;
    rg.airport = inst.airports[key.airport].code;
    rg.gate_type = inst.gate_types[key.gate_type].id;
    rg.gate = g.gate;
    for (int a : g.pattern.activities) {
      const Activity& act = net.activity(a);
      rg.activities.push_back({inst.flights[net.copy(act.copy).flight].id, kind_label(act.kind), act.start, act.end});
    }
    r.gates.push_back(std::move(rg));
  }
  r.gate_shortfall = res.gate_shortfall;
  r.certificates = res.certificates;
  r.cuts = res.cuts;
  r.log = res.log;
  return r;
}

std::string emit_report(const Report& r) {
  json routes = json::array();
  for (const auto& rr : r.routes) {
    json legs = json::array();
    for (const auto& l : rr.legs) legs.push_back({{"flight", l.flight}, {"dep", l.dep}, {"arr", l.arr}, {"delay", l.delay}});
    routes.push_back({{"aircraft", rr.aircraft}, {"cost", rr.cost}, {"swaps", rr.swaps}, {"legs", std::move(legs)}});
  }
  json gates = json::array();
  for (const auto& g : r.gates) {
    json acts = json::array();
    for (const auto& a : g.activities)
      acts.push_back({{"flight", a.flight}, {"kind", a.kind}, {"start", a.start}, {"end", a.end}});
    gates.push_back(
        {{"airport", g.airport}, {"gate_type", g.gate_type}, {"gate", g.gate}, {"activities", std::move(acts)}});
  }
  json log = json::array();
  for (const auto& it : r.log)
    log.push_back({{"iteration", it.iteration},
                   {"lb", number_or_null(it.lb)},
                   {"ub", number_or_null(it.ub)},
                   {"gap", number_or_null(it.gap)},
                   {"columns_added", it.columns_added},
                   {"patterns_added", it.patterns_added},
                   {"cuts_added", it.cuts_added},
                   {"event", it.event},
                   {"seconds", it.seconds}});
  json doc = {{"schema_version", kReportSchemaVersion},
              {"instance", r.instance},
              {"method", r.method},
              {"status", r.status},
              {"metrics", metrics_json(r.metrics)},
              {"bounds", {{"lb", number_or_null(r.lb)}, {"ub", number_or_null(r.ub)}}},
              {"plan", {{"cancelled", r.cancelled}, {"routes", std::move(routes)}, {"gates", std::move(gates)}}},
              {"gate_shortfall", r.gate_shortfall},
              {"certificates", r.certificates},
              {"cuts", r.cuts},
              {"log", std::move(log)}};
  return doc.dump(2) + "\n";
}

Report parse_report(std::string_view text) {
  json doc = detail::parse_json(text);
  Node root(doc, "");
  root.require_object();
  if (root.int32("schema_version") != kReportSchemaVersion) root.fail("unsupported schema version", "schema_version");
  Report r;
  r.instance = root.str("instance");
  r.method = root.str("method");
  r.status = root.str("status");
  r.metrics = parse_metrics(root.at("metrics"));
  Node bounds = root.at("bounds");
  r.lb = number_or_inf(bounds, "lb");
  r.ub = number_or_inf(bounds, "ub");
  Node plan = root.at("plan");
  for (const auto& c : plan.at("cancelled").items()) r.cancelled.push_back(c.str());
  for (const auto& n : plan.at("routes").items()) {
    ReportRoute rr;
    rr.aircraft = n.str("aircraft");
    rr.cost = n.number("cost");
    rr.swaps = n.int32("swaps");
    for (const auto& l : n.at("legs").items())
      rr.legs.push_back({l.str("flight"), l.int32("dep"), l.int32("arr"), l.int32("delay")});
    r.routes.push_back(std::move(rr));
  }
  for (const auto& n : plan.at("gates").items()) {
    ReportGate g;
    g.airport = n.str("airport");
    g.gate_type = n.str("gate_type");
    g.gate = n.int32("gate");
    for (const auto& a : n.at("activities").items())
      g.activities.push_back({a.str("flight"), a.str("kind"), a.int32("start"), a.int32("end")});
    r.gates.push_back(std::move(g));
  }
  r.gate_shortfall = root.int32("gate_shortfall");
  r.certificates = root.int32("certificates");
  Node cuts = root.at("cuts");
  cuts.require_object();
  for (auto it = cuts.raw().begin(); it != cuts.raw().end(); ++it)
    r.cuts[it.key()] = Node(it.value(), cuts.path() + "/" + it.key()).int32();
  for (const auto& n : root.at("log").items()) {
    IterationRecord it;
    it.iteration = n.int32("iteration");
    it.lb = number_or_inf(n, "lb");
    it.ub = number_or_inf(n, "ub");
    it.gap = number_or_inf(n, "gap");
    it.columns_added = n.int32("columns_added");
    it.patterns_added = n.int32("patterns_added");
    it.cuts_added = n.int32("cuts_added");
    it.event = n.str("event");
    it.seconds = n.number("seconds");
    r.log.push_back(std::move(it));
  }
  return r;
}

void save_report(const Report& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IOError("cannot write " + path);
  out << emit_report(r);
  if (!out) throw IOError("write failed: " + path);
}

std::string csv_header() {
  return "instance,method,status,canceled_flights,total_delay_minutes,swapped_tail_assignments,used_gates,"
         "schedule_aircraft_cost,gate_cost,total_cost,optimality_gap_percent,cpu_seconds";
}

std::string csv_row(const Report& r) {
  const Metrics& m = r.metrics;
  // A gate-infeasible run has no gate side; its cost cells read "infea".
  const bool infea = r.status == to_string(RunStatus::GateInfeasible);
  std::ostringstream os;
  os << csv_cell(r.instance) << ',' << csv_cell(r.method) << ',' << r.status << ',' << m.canceled_flights << ','
     << m.total_delay_minutes << ',' << m.swapped_tail_assignments << ',' << m.used_gates << ','
     << fixed(m.schedule_aircraft_cost, 2) << ',' << (infea ? "infea" : fixed(m.gate_cost, 2)) << ','
     << (infea ? "infea" : fixed(m.total_cost, 2)) << ','
     << (infea || !std::isfinite(m.optimality_gap) ? "infea" : fixed(100.0 * m.optimality_gap, 2)) << ','
     << fixed(m.cpu_seconds, 3);
  return os.str();
}

void append_csv(const Report& r, const std::string& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const bool fresh = !fs::exists(path, ec) || fs::file_size(path, ec) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw IOError("cannot write " + path);
  if (fresh) out << csv_header() << '\n';
  out << csv_row(r) << '\n';
  if (!out) throw IOError("write failed: " + path);
}

}  // namespace sagr
