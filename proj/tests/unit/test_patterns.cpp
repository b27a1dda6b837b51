#include <doctest.h>

#include <algorithm>
#include <random>

#include "brute.hpp"
#include "fixtures.hpp"
#include "sagr/generator.hpp"
#include "sagr/instance_io.hpp"
#include "sagr/patterns.hpp"

using namespace sagr;

namespace {

int copy_named(const Network& net, const std::string& id, int delay) {
  for (const auto& c : net.copies())
    if (net.flight_of(c.id).id == id && c.delay == delay) return c.id;
  return -1;
}

int key_named(const Network& net, const std::string& label) {
  for (int k = 0; k < static_cast<int>(net.gate_keys().size()); ++k)
    if (net.key_label(k) == label) return k;
  return -1;
}

// Activities of the planned rotations, grouped by key.
std::vector<std::vector<int>> planned_activities(const Network& net) {
  std::vector<std::vector<int>> by_key(net.gate_keys().size());
  for (const auto& ac : net.instance().aircraft)
    for (const auto& id : ac.planned_flight_ids) {
      int j = net.index().flight.at(id);
      int c = net.copies_of(j).front();
      int d = net.dep_activity(c), a = net.arr_activity(c);
      by_key[net.activity(d).gate_key].push_back(d);
      if (a != d) by_key[net.activity(a).gate_key].push_back(a);
    }
  return by_key;
}

void check_exact(const Network& net, int key, const std::vector<int>& acts, const PatternDuals& d,
                 const std::vector<GatePattern>& pool, int k) {
  std::vector<double> expect;
  for (const auto& seq : brute::all_patterns(net, key, acts)) {
    bool pooled = false;
    for (const auto& p : pool) pooled = pooled || (p.gate_key == key && p.activities == seq);
    double rc = brute::pattern_rc(net, key, seq, d.activity, d.pair, d.cap);
    if (!pooled && rc < -1e-6) expect.push_back(rc);
  }
  std::sort(expect.begin(), expect.end());
  auto got = price_patterns(net, key, d, acts, pool, k);
  REQUIRE(got.size() == std::min<std::size_t>(k, expect.size()));
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(pattern_violation(net, got[i]) == "");
    CHECK(pattern_reduced_cost(net, got[i], d) == doctest::Approx(expect[i]));
    CHECK(pattern_reduced_cost(net, got[i], d) ==
          doctest::Approx(brute::pattern_rc(net, key, got[i].activities, d.activity, d.pair, d.cap)));
  }
}

PatternDuals random_duals(const Network& net, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 9.0);
  PatternDuals d = PatternDuals::zero(net);
  for (double& v : d.activity) v = u(rng);
  for (const auto& e : net.connections())
    if (rng() % 2) d.pair[e.id] = u(rng);
  d.cap = std::uniform_real_distribution<double>(0.0, 4.0)(rng);
  return d;
}

}  // namespace

TEST_CASE("zero duals price nothing") {
  Network net(fixtures::t1());
  int key = key_named(net, "B/narrow");
  PatternDuals d = PatternDuals::zero(net);
  CHECK(price_patterns(net, key, d, net.activities_at(key), {}, 5).empty());
  auto p = make_pattern(net, key, {net.arr_activity(copy_named(net, "F1", 0))});
  REQUIRE(p);
  CHECK(pattern_reduced_cost(net, *p, d) == 4.0);
  d.cap = -1.0;
  CHECK(pattern_reduced_cost(net, *p, d) == 3.0);
}

TEST_CASE("a single arrival dual prices its pattern") {
  Network net(fixtures::t1());
  int key = key_named(net, "B/narrow");
  int arr = net.arr_activity(copy_named(net, "F1", 0));
  PatternDuals d = PatternDuals::zero(net);
  d.activity[arr] = 10.0;
  auto got = price_patterns(net, key, d, net.activities_at(key), {}, 1);
  REQUIRE(got.size() == 1);
  CHECK(got[0].activities == std::vector<int>{arr});
  CHECK(pattern_reduced_cost(net, got[0], d) == -6.0);
}

TEST_CASE("turnaround pairs skip the buffer") {
  Instance inst = fixtures::t1();
  inst.config.buffer_time = 200;
  Network net(inst);
  int arr = net.arr_activity(copy_named(net, "F1", 0));
  int dep = net.dep_activity(copy_named(net, "F2", 0));
  auto p = make_pattern(net, key_named(net, "B/narrow"), {arr, dep});
  REQUIRE(p);
  CHECK(p->connections.size() == 1);
  CHECK(pattern_pair(net, arr, dep) == net.find_connection(copy_named(net, "F1", 0), copy_named(net, "F2", 0)));
  // Departure then arrival needs the buffer.
  int dep1 = net.dep_activity(copy_named(net, "F1", 0));
  int arr2 = net.arr_activity(copy_named(net, "F2", 0));
  CHECK_FALSE(make_pattern(net, key_named(net, "A/narrow"), {dep1, arr2}));
  inst.config.buffer_time = 15;
  Network loose(inst);
  CHECK(make_pattern(loose, key_named(loose, "A/narrow"), {dep1, arr2}));
  CHECK_FALSE(make_pattern(loose, key_named(loose, "A/narrow"), {arr2, dep1}));
  CHECK_FALSE(make_pattern(loose, key_named(loose, "B/narrow"), {dep1}));
}

TEST_CASE("maintenance is one activity") {
  Instance inst = fixtures::t1();
  inst.flights.push_back({"M1", "A", "A", 270, 330, "A320", std::nullopt});
  inst.aircraft[0].maintenance = "M1";
  inst.aircraft[0].planned_flight_ids.push_back("M1");
  inst.config.max_delay = 0;
  Network net(inst);
  int m = copy_named(net, "M1", 0);
  CHECK(net.dep_activity(m) == net.arr_activity(m));
  CHECK(net.activity(net.dep_activity(m)).kind == ActivityKind::Maintenance);
  int arr2 = net.arr_activity(copy_named(net, "F2", 0));
  auto p = make_pattern(net, key_named(net, "A/narrow"), {arr2, net.dep_activity(m)});
  REQUIRE(p);
  CHECK(p->connections.size() == 1);
}

TEST_CASE("pricing matches enumeration on T1") {
  Network net(fixtures::t1());
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    PatternDuals d = random_duals(net, rng);
    for (int key = 0; key < static_cast<int>(net.gate_keys().size()); ++key) {
      check_exact(net, key, net.activities_at(key), d, {}, 4);
      auto pool = price_patterns(net, key, d, net.activities_at(key), {}, 2);
      check_exact(net, key, net.activities_at(key), d, pool, 3);
    }
  }
}

TEST_CASE("pricing matches enumeration on generated instances") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 25; ++i) {
    Network net(apply_disruption(generate_instance(desk_params(33, i))));
    auto acts = planned_activities(net);
    PatternDuals d = random_duals(net, rng);
    for (int key = 0; key < static_cast<int>(acts.size()); ++key) {
      check_exact(net, key, acts[key], d, {}, 6);
      std::vector<double> w(net.num_activity_ids(), 0.0);
      for (int u : acts[key]) w[u] = d.activity[u];
      auto g = best_through(net, key, acts[key], w, d.pair);
      for (std::size_t t = 0; t < acts[key].size(); ++t) {
        double best = -1e300;
        for (const auto& seq : brute::all_patterns(net, key, acts[key]))
          if (std::find(seq.begin(), seq.end(), acts[key][t]) != seq.end())
            best = std::max(best, -brute::pattern_rc(net, key, seq, w, d.pair, 0.0) + net.pattern_cost(key));
        CHECK(g[t] == doctest::Approx(best));
      }
    }
  }
}

TEST_CASE("customized initialization covers the turnaround") {
  Network net(fixtures::t1());
  int key = key_named(net, "B/narrow");
  int c1 = copy_named(net, "F1", 0), c2 = copy_named(net, "F2", 0);
  int e = net.find_connection(c1, c2);
  std::vector<int> demand{net.arr_activity(c1), net.dep_activity(c2)};
  std::vector<int> forced{e};
  auto got = customized_init(net, key, demand, forced, {}, 3);
  REQUIRE_FALSE(got.empty());
  CHECK(got[0].activities == demand);
  for (const auto& p : got) CHECK(std::find(p.connections.begin(), p.connections.end(), e) != p.connections.end());
  CHECK(customized_init(net, key, demand, forced, got, 3).empty());
  CHECK(customized_init(net, key, demand, forced, {}, 0).empty());
}
