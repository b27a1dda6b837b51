#pragma once

#include <cstdint>
#include <set>

#include "sagr/instance.hpp"

namespace sagr {

struct SolverOptions {
  double epsilon = 0.05;
  double time_limit = 60.0;  // seconds
  int workers = 1;
  bool separation = true;
  bool certificate = true;
  int addini = 3;  // customized-init patterns per uncovered turnaround
  std::set<CutFamily> cuts{CutFamily::BendersOpt, CutFamily::Llc, CutFamily::Global};
  int route_columns = 10;   // per aircraft per pricing round
  int pattern_columns = 10; // per subproblem per pricing round
  int max_iterations = 500;
  std::uint64_t seed = 0;

  static SolverOptions from_config(const RecoveryConfig& cfg) {
    SolverOptions o;
    o.epsilon = cfg.epsilon;
    o.time_limit = cfg.time_limit;
    o.cuts = cfg.cut_families;
    o.route_columns = cfg.columns_per_round;
    o.pattern_columns = cfg.columns_per_round;
    return o;
  }
};

}  // namespace sagr
