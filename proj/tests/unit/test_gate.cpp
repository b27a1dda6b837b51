#include <doctest.h>

#include <random>

#include "brute.hpp"
#include "fixtures.hpp"
#include "sagr/bcg.hpp"
#include "sagr/errors.hpp"
#include "sagr/gate.hpp"
#include "sagr/generator.hpp"
#include "sagr/instance_io.hpp"
#include "sagr/master.hpp"

using namespace sagr;

namespace {

// Random route choice on a generated instance: each aircraft flies a random
// enumerated route or stays on the ground, flights used at most once.
std::vector<AircraftRoute> random_selection(const Network& net, std::mt19937_64& rng) {
  std::vector<AircraftRoute> out;
  std::vector<char> used(net.num_flights(), 0);
  for (int r = 0; r < net.num_aircraft(); ++r) {
    std::vector<AircraftRoute> routes;
    try {
      routes = enumerate_routes(net, r, 20000);
    } catch (const SizeError&) {
      continue;
    }
    if (routes.empty() || rng() % 5 == 0) continue;
    for (int tries = 0; tries < 5; ++tries) {
      const auto& cand = routes[rng() % routes.size()];
      bool clash = false;
      for (int c : cand.copies) clash = clash || used[net.copy(c).flight];
      if (clash) continue;
      for (int c : cand.copies) used[net.copy(c).flight] = 1;
      out.push_back(cand);
      break;
    }
  }
  return out;
}

struct GateFixture {
  Network net;
  std::vector<AircraftRoute> selected;
};

GateFixture gate_fixture(std::uint64_t seed, int index) {
  GeneratorParams p = desk_params(seed, index);
  p.flights = std::min(p.flights, 8);
  p.aircraft = std::min(p.aircraft, p.flights);
  GateFixture f{Network(apply_disruption(generate_instance(p))), {}};
  std::mt19937_64 rng(seed * 31 + static_cast<std::uint64_t>(index));
  f.selected = random_selection(f.net, rng);
  return f;
}

SolverOptions serial() {
  SolverOptions o;
  o.workers = 1;
  return o;
}

double sum_coef(const Network& net, const BendersCut& cut, const std::vector<AircraftRoute>& routes) {
  double s = 0.0;
  for (const auto& r : routes) s += cut.duals.route_value(net, r);
  return s;
}

}  // namespace

TEST_CASE("exact cover matches backtracking") {
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    auto f = gate_fixture(11, i);
    for (auto s : separate_bsp(f.net, f.selected)) {
      int need = brute::min_gates(f.net, s.demand, s.forced, static_cast<int>(s.demand.size()));
      auto cover = exact_cover(f.net, s);
      REQUIRE(cover);
      CHECK(static_cast<int>(cover->size()) == need);
      for (const auto& p : *cover) CHECK(pattern_violation(f.net, p).empty());
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("subproblem verdicts match backtracking") {
  std::mt19937_64 rng(5);
  int feasible = 0, infeasible = 0;
  for (int i = 0; i < 80; ++i) {
    auto f = gate_fixture(12, i);
    auto subs = separate_bsp(f.net, f.selected);
    for (auto& s : subs) {
      int need = brute::min_gates(f.net, s.demand, s.forced, static_cast<int>(s.demand.size()));
      s.capacity = std::max(0, need + static_cast<int>(rng() % 3) - 1);
      PatternPools pools(f.net.gate_keys().size());
      auto feas = check_feasibility(f.net, {s}, pools, serial(), Clock::time_point::max());
      REQUIRE(feas.size() == 1);
      if (need <= s.capacity) {
        ++feasible;
        CHECK(feas[0].status == SubStatus::Feasible);
        auto opt = solve_optimality(f.net, {s}, pools, serial(), Clock::time_point::max());
        REQUIRE(opt[0].status == SubStatus::Feasible);
        CHECK(opt[0].value == doctest::Approx(s.cost * need));
        CHECK(opt[0].lr_value == doctest::Approx(s.cost * need));
        CHECK(static_cast<int>(opt[0].selected.size()) <= s.capacity);
      } else {
        ++infeasible;
        CHECK(feas[0].status != SubStatus::Feasible);
      }
    }
  }
  CHECK(feasible > 50);
  CHECK(infeasible > 20);
}

TEST_CASE("certificate never fires on a feasible subproblem") {
  std::mt19937_64 rng(9);
  int fired_infeasible = 0, infeasible = 0, feasible = 0;
  for (int i = 0; i < 150; ++i) {
    auto f = gate_fixture(13, i);
    for (auto s : separate_bsp(f.net, f.selected)) {
      int need = brute::min_gates(f.net, s.demand, s.forced, static_cast<int>(s.demand.size()));
      s.capacity = std::max(0, need - static_cast<int>(rng() % 3));
      PatternPools pools(f.net.gate_keys().size());
      auto o = check_feasibility(f.net, {s}, pools, serial(), Clock::time_point::max())[0];
      if (need <= s.capacity) {
        ++feasible;
        CHECK_FALSE(o.certificate_fired);
      } else {
        ++infeasible;
        fired_infeasible += o.certificate_fired;
      }
    }
  }
  MESSAGE("certificate fired on " << fired_infeasible << " of " << infeasible << " infeasible subproblems");
  CHECK(feasible > 50);
  CHECK(infeasible > 50);
}

TEST_CASE("certificate inequality") {
  std::vector<double> lambda{1.0, 1.0, 1.0};
  std::vector<double> b{1.0, 1.0, 1.0};
  CHECK(infeasibility_certificate(lambda, b, 1.0, 1.0, 2));
  CHECK_FALSE(infeasibility_certificate(lambda, b, 1.0, 1.0, 3));
  CHECK_FALSE(infeasibility_certificate(lambda, b, 1.5, 1.0, 2));
  CHECK(infeasibility_certificate(lambda, b, -1.0, -2.0, 0));
  CHECK_FALSE(infeasibility_certificate(lambda, b, -1.0, -2.0, 0, 3.5));
}

TEST_CASE("separation equivalence") {
  for (int i = 0; i < 50; ++i) {
    auto f = gate_fixture(14, i);
    CAPTURE(i);
    SolverOptions sep = serial(), mono = serial();
    mono.separation = false;
    PatternPools p1(f.net.gate_keys().size()), p2(f.net.gate_keys().size());
    BspResult a = solve_bsp(f.net, f.selected, p1, sep, Clock::time_point::max());
    BspResult b = solve_bsp(f.net, f.selected, p2, mono, Clock::time_point::max());
    const bool fa = a.status == BspResult::Status::Feasible;
    const bool fb = b.status == BspResult::Status::Feasible;
    CHECK(fa == fb);
    if (fa && fb) {
      CHECK(a.value == b.value);
      double sum = 0.0;
      for (const auto& s : a.subproblems)
        sum += s.cost * brute::min_gates(f.net, s.demand, s.forced, static_cast<int>(s.demand.size()));
      CHECK(a.value == sum);
    }
  }
}

TEST_CASE("serial and parallel blocks agree") {
  for (int i = 0; i < 40; ++i) {
    auto f = gate_fixture(15, i);
    CAPTURE(i);
    SolverOptions par = serial();
    par.workers = 4;
    PatternPools p1(f.net.gate_keys().size()), p2(f.net.gate_keys().size());
    BspResult a = solve_bsp(f.net, f.selected, p1, serial(), Clock::time_point::max());
    BspResult b = solve_bsp(f.net, f.selected, p2, par, Clock::time_point::max());
    CHECK(a.status == b.status);
    CHECK(a.value == b.value);
    CHECK(a.selected == b.selected);
    CHECK(a.cuts.size() == b.cuts.size());
    CHECK(a.certified == b.certified);
    CHECK(p1 == p2);
  }
}

TEST_CASE("overload fixture") {
  Instance inst = fixtures::t1_overload();
  Network net(inst);
  MasterState st = initial_master(net);
  std::vector<AircraftRoute> planned{st.routes[0][0], st.routes[1][0]};
  REQUIRE(planned[0].delay_minutes == 0);
  REQUIRE(planned[1].delay_minutes == 0);
  PatternPools pools(net.gate_keys().size());
  BspResult bsp = solve_bsp(net, planned, pools, serial(), Clock::time_point::max());
  REQUIRE(bsp.status == BspResult::Status::Infeasible);
  REQUIRE_FALSE(bsp.cuts.empty());
  for (const auto& cut : bsp.cuts) {
    REQUIRE(cut.kind == CutKind::Feasibility);
    CHECK(sum_coef(net, cut, planned) > cut.rhs + 1e-6);
  }

  RunResult r = run_bcg(inst, SolverOptions{});
  RunResult o = solve_exact_oracle(inst);
  // F3 and F4 late by 90 and 60: one gate at B, and A's departures no
  // longer overlap, so two patterns in all.
  CHECK(o.metrics.total_cost == doctest::Approx(158));
  CHECK(r.metrics.total_cost == doctest::Approx(158));
  CHECK(r.metrics.total_delay_minutes == 150);
  CHECK(plan_violations(net, r.plan).empty());
}

TEST_CASE("optimality cut is tight at its point") {
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    auto f = gate_fixture(16, i);
    PatternPools pools(f.net.gate_keys().size());
    BspResult b = solve_bsp(f.net, f.selected, pools, serial(), Clock::time_point::max());
    if (b.status != BspResult::Status::Feasible || b.cuts.empty()) continue;
    const BendersCut& cut = b.cuts[0];
    CHECK(cut.kind == CutKind::Optimality);
    CHECK(sum_coef(f.net, cut, f.selected) - cut.rhs == doctest::Approx(b.lr_value));
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("cuts keep the oracle optimum") {
  int checked = 0;
  for (int i = 0; i < 30; ++i) {
    GeneratorParams p = desk_params(17, i);
    if (p.flights > 8) continue;
    Instance inst = generate_instance(p);
    CAPTURE(i);
    RunResult o = solve_exact_oracle(inst);
    RunResult r = run_bcg(inst, SolverOptions{});
    Network net(apply_disruption(inst));
    const double q = o.metrics.gate_cost;
    for (const auto& cut : r.cut_pool) {
      double lhs = cut.q_coef * q;
      for (const auto& route : o.plan.routes) {
        std::optional<ColumnRef> ref;
        const auto& pool = r.route_pool[route.aircraft];
        for (std::size_t k = 0; k < pool.size(); ++k)
          if (pool[k].same_column(route)) ref = ColumnRef{route.aircraft, static_cast<int>(k)};
        lhs += cut.column_coef(net, route, ref);
      }
      CHECK(lhs <= cut.rhs + 1e-6);
      ++checked;
    }
  }
  MESSAGE(checked << " cuts checked");
}

TEST_CASE("lifted duals price every pattern within its bound") {
  std::mt19937_64 rng(21);
  int rays = 0, points = 0, patterns = 0;
  for (int i = 0; i < 80; ++i) {
    auto f = gate_fixture(18, i);
    for (auto s : separate_bsp(f.net, f.selected)) {
      const auto& acts = f.net.activities_at(s.key);
      if (acts.size() > 16) continue;
      int need = brute::min_gates(f.net, s.demand, s.forced, static_cast<int>(s.demand.size()));
      s.capacity = std::max(0, need - static_cast<int>(rng() % 2));
      PatternPools pools(f.net.gate_keys().size());
      auto feas = check_feasibility(f.net, {s}, pools, serial(), Clock::time_point::max())[0];
      PatternDuals d;
      bool ray = feas.status != SubStatus::Feasible;
      if (ray) {
        d = feas.duals[0];
        ++rays;
      } else {
        auto opt = solve_optimality(f.net, {s}, pools, serial(), Clock::time_point::max())[0];
        REQUIRE(opt.status == SubStatus::Feasible);
        d = opt.duals[0];
        ++points;
      }
      GateDuals g = lift_duals(f.net, {s}, {d}, ray);
      const double bound = (ray ? 0.0 : s.cost) + d.cap;
      double worst = -1e300;
      for (const auto& p : brute::all_patterns(f.net, s.key, acts)) {
        double v = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
          v += g.activity[p[k]];
          int e = -1;
          if (k + 1 < p.size()) brute::can_follow(f.net, p[k], p[k + 1], &e);
          if (e >= 0 && g.pair.count(e)) v += g.pair.at(e);
        }
        worst = std::max(worst, v);
        ++patterns;
      }
      CHECK(worst <= bound + 1e-6);
    }
  }
  MESSAGE(rays << " rays, " << points << " dual points, " << patterns << " patterns");
  CHECK(rays > 10);
  CHECK(points > 10);
}
