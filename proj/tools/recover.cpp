#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "sagr/bcg.hpp"
#include "sagr/errors.hpp"
#include "sagr/instance_io.hpp"
#include "sagr/report.hpp"

using namespace sagr;

namespace {

enum Exit { kSolved = 0, kFailure = 1, kTimeLimit = 2, kGateInfeasible = 3, kInputError = 4 };

std::set<CutFamily> parse_cuts(const std::string& list) {
  std::set<CutFamily> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty() && item != "none") out.insert(cut_family_from_string(item));
  return out;
}

int exit_code(const RunResult& r, double epsilon) {
  switch (r.status) {
    case RunStatus::Solved: return r.metrics.optimality_gap <= epsilon + 1e-12 ? kSolved : kTimeLimit;
    case RunStatus::TimeLimit:
    case RunStatus::Stalled: return kTimeLimit;
    case RunStatus::GateInfeasible: return kGateInfeasible;
  }
  return kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schedule, aircraft and gate recovery"};
  std::string instance_path, method = "bcg", report_path, csv_path, cuts;
  std::optional<double> alpha, gap, time_limit;
  std::optional<int> delay_interval, max_delay, buffer, workers, addini;
  std::uint64_t seed = 0;
  bool no_separation = false, no_certificate = false;

  app.add_option("--instance", instance_path, "instance document")->required();
  app.add_option("--method", method, "bcg, seq-oe or seq-ue")
      ->check(CLI::IsMember({"bcg", "seq-oe", "seq-ue"}));
  app.add_option("--alpha", alpha, "arrival capacity cut for the sequential baseline")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--gap", gap, "relative optimality gap")->check(CLI::NonNegativeNumber);
  app.add_option("--delay-interval", delay_interval, "minutes between delayed copies")->check(CLI::PositiveNumber);
  app.add_option("--max-delay", max_delay, "largest delay in minutes")->check(CLI::NonNegativeNumber);
  app.add_option("--buffer", buffer, "gate buffer in minutes")->check(CLI::NonNegativeNumber);
  app.add_option("--time-limit", time_limit, "seconds")->check(CLI::PositiveNumber);
  app.add_option("--workers", workers, "parallel workers")->check(CLI::PositiveNumber);
  app.add_option("--cuts", cuts, "cut families: bendersopt,llc,global or none");
  app.add_flag("--no-separation", no_separation, "solve the gate problem as one block");
  app.add_flag("--no-certificate", no_certificate, "skip the early infeasibility certificate");
  app.add_option("--addini", addini, "initial patterns per uncovered turnaround")->check(CLI::NonNegativeNumber);
  app.add_option("--report", report_path, "write the JSON report here");
  app.add_option("--csv", csv_path, "append a summary row here");
  app.add_option("--seed", seed, "seed for randomized tie breaks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  Instance inst;
  SolverOptions opts;
  try {
    inst = load_instance(instance_path);
    if (delay_interval) inst.config.delay_interval = *delay_interval;
    if (max_delay) inst.config.max_delay = *max_delay;
    if (buffer) inst.config.buffer_time = *buffer;
    if (gap) inst.config.epsilon = *gap;
    if (time_limit) inst.config.time_limit = *time_limit;
    if (!cuts.empty()) inst.config.cut_families = parse_cuts(cuts);
    auto violations = validate_instance(inst);
    if (!violations.empty()) {
      for (const auto& v : violations) std::cerr << "invalid instance: " << v.code << ": " << v.message << "\n";
      return kInputError;
    }
    opts = SolverOptions::from_config(inst.config);
  } catch (const ParseError& e) {
    std::cerr << instance_path;
    if (e.line() > 0) std::cerr << ":" << e.line();
    std::cerr << ": " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << instance_path << ": " << e.what() << "\n";
    return kInputError;
  }
  if (workers) opts.workers = *workers;
  if (addini) opts.addini = *addini;
  opts.separation = !no_separation;
  opts.certificate = !no_certificate;
  opts.seed = seed;

  RunResult res;
  try {
    if (method == "bcg")
      res = run_bcg(inst, opts);
    else
      res = run_seq(inst, opts, method == "seq-oe" ? SeqMode::OE : SeqMode::UE, alpha);
  } catch (const Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kFailure;
  }

  const Metrics& m = res.metrics;
  std::cout << "method " << res.method << "\nstatus " << to_string(res.status) << "\ncanceled_flights "
            << m.canceled_flights << "\ntotal_delay_minutes " << m.total_delay_minutes
            << "\nswapped_tail_assignments " << m.swapped_tail_assignments << "\nused_gates " << m.used_gates
            << "\nschedule_aircraft_cost " << m.schedule_aircraft_cost << "\ngate_cost " << m.gate_cost
            << "\ntotal_cost " << m.total_cost << "\noptimality_gap_percent " << 100.0 * m.optimality_gap
            << "\ncpu_seconds " << m.cpu_seconds << "\n";
  if (res.status == RunStatus::GateInfeasible) std::cout << "gate_shortfall " << res.gate_shortfall << "\n";

  try {
    if (!report_path.empty() || !csv_path.empty()) {
      Report rep = make_report(Network(apply_disruption(inst)), res,
                               std::filesystem::path(instance_path).stem().string());
      if (!report_path.empty()) save_report(rep, report_path);
      if (!csv_path.empty()) append_csv(rep, csv_path);
    }
  } catch (const IOError& e) {
    std::cerr << e.what() << "\n";
    return kInputError;
  }
  return exit_code(res, opts.epsilon);
}
