// Serial (workers = 1) against OpenMP (workers = hardware threads) for the two
// parallel kernels: per-aircraft route pricing in the master and per-key gate
// subproblems in the Benders subproblem.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "sagr/bcg.hpp"
#include "sagr/gate.hpp"
#include "sagr/generator.hpp"
#include "sagr/instance_io.hpp"
#include "sagr/master.hpp"

using namespace sagr;

namespace {

int workers_for(int arg) { return arg == 1 ? 1 : std::max(1, omp_get_max_threads()); }

Network pricing_network() {
  GeneratorParams p;
  p.flights = 24;
  p.aircraft = 8;
  p.airports = 5;
  p.gate_types = 2;
  p.seed = 5;
  return Network(apply_disruption(generate_instance(p)));
}

void BM_MasterPricing(benchmark::State& state) {
  static const Network net = pricing_network();
  SolverOptions o;
  o.workers = workers_for(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    MasterState st = initial_master(net);
    benchmark::DoNotOptimize(solve_master_cg(net, st, o, Clock::time_point::max()));
  }
  state.counters["workers"] = o.workers;
}

void BM_GateSubproblems(benchmark::State& state) {
  static const Network net(apply_disruption(generate_hub_instance(144)));
  static const std::vector<AircraftRoute> planned = [] {
    std::vector<AircraftRoute> out;
    for (auto& pool : initial_master(net).routes)
      if (!pool.empty()) out.push_back(pool.front());
    return out;
  }();
  SolverOptions o;
  o.workers = workers_for(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    PatternPools pools(net.gate_keys().size());
    benchmark::DoNotOptimize(solve_bsp(net, planned, pools, o, Clock::time_point::max()));
  }
  state.counters["workers"] = o.workers;
}

}  // namespace

BENCHMARK(BM_MasterPricing)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GateSubproblems)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
