#include "sagr/gate.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include "sagr/errors.hpp"

namespace sagr {

const char* to_string(SubStatus s) {
  switch (s) {
    case SubStatus::Feasible: return "feasible";
    case SubStatus::InfeasibleCertified: return "infeasible_certified";
    case SubStatus::InfeasibleExhausted: return "infeasible_exhausted";
    case SubStatus::Rejected: return "rejected";
    case SubStatus::Cancelled: return "cancelled";
    case SubStatus::TimeLimit: return "time_limit";
  }
  return "?";
}

std::vector<Subproblem> separate_bsp(const Network& net, const std::vector<AircraftRoute>& selected) {
  const int nk = static_cast<int>(net.gate_keys().size());
  std::vector<Subproblem> by_key(nk);
  for (int k = 0; k < nk; ++k) {
    by_key[k].key = k;
    by_key[k].capacity = net.capacity(k);
    by_key[k].cost = net.pattern_cost(k);
  }
  for (const auto& r : selected) {
    for (int c : r.copies) {
      int d = net.dep_activity(c), a = net.arr_activity(c);
      by_key[net.activity(d).gate_key].demand.push_back(d);
      if (a != d) by_key[net.activity(a).gate_key].demand.push_back(a);
    }
    for (int e : r.connections) {
      const Connection& c = net.connection(e);
      by_key[net.gate_key(c.airport, c.gate_type)].forced.push_back(e);
    }
  }
  std::vector<Subproblem> out;
  for (auto& s : by_key) {
    if (s.demand.empty()) continue;
    std::vector<int> order;
    for (int u : net.activities_at(s.key))
      if (std::find(s.demand.begin(), s.demand.end(), u) != s.demand.end()) order.push_back(u);
    s.demand = std::move(order);
    std::sort(s.forced.begin(), s.forced.end());
    out.push_back(std::move(s));
  }
  return out;
}

std::optional<std::vector<GatePattern>> exact_cover(const Network& net, const Subproblem& sub) {
  const auto& V = sub.demand;
  const int n = static_cast<int>(V.size());
  std::map<int, int> pos;
  for (int i = 0; i < n; ++i) pos[V[i]] = i;
  std::vector<int> fsucc(n, -1), fpred(n, -1);
  for (int e : sub.forced) {
    const Connection& c = net.connection(e);
    auto a = pos.find(net.arr_activity(c.pred));
    auto b = pos.find(net.dep_activity(c.succ));
    if (a == pos.end() || b == pos.end()) return std::nullopt;
    if (!activities_compatible(net, a->first, b->first)) return std::nullopt;
    fsucc[a->second] = b->second;
    fpred[b->second] = a->second;
  }
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i) {
    if (fsucc[i] >= 0) {
      adj[i] = {fsucc[i]};
      continue;
    }
    for (int j = 0; j < n; ++j)
      if (j != i && fpred[j] < 0 && activities_compatible(net, V[i], V[j])) adj[i].push_back(j);
  }
  std::vector<int> match_l(n, -1), match_r(n, -1);
  std::vector<char> seen;
  std::function<bool(int)> augment = [&](int i) {
    for (int j : adj[i]) {
      if (seen[j]) continue;
      seen[j] = 1;
      if (match_r[j] < 0 || augment(match_r[j])) {
        match_l[i] = j;
        match_r[j] = i;
        return true;
      }
    }
    return false;
  };
  for (int i = 0; i < n; ++i) {
    seen.assign(n, 0);
    augment(i);
  }
  for (int i = 0; i < n; ++i)
    if (fsucc[i] >= 0 && match_l[i] != fsucc[i]) return std::nullopt;
  std::vector<GatePattern> out;
  for (int j = 0; j < n; ++j) {
    if (match_r[j] >= 0) continue;
    std::vector<int> acts;
    for (int i = j; i >= 0; i = match_l[i]) acts.push_back(V[i]);
    auto p = make_pattern(net, sub.key, acts);
    if (!p) throw NumericalError("path cover produced an invalid pattern");
    out.push_back(std::move(*p));
  }
  return out;
}

bool infeasibility_certificate(std::span<const double> lambda, std::span<const double> b, double delta_bar,
                               double pricing_max, int capacity, double tol) {
  double lb = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) lb += lambda[i] * b[i];
  double delta_hat = std::max({delta_bar, pricing_max, 0.0});
  return lb - capacity * delta_hat > tol;
}

namespace {

// LP over the pooled patterns of the subproblems of one block.
struct BlockLp {
  LinearProgram lp;
  std::vector<std::pair<int, int>> cols;  // (position in block, pool index) per pattern variable
  std::vector<int> pattern_var;
  std::vector<std::map<int, int>> demand_row;  // activity -> row, per position
  std::vector<std::map<int, int>> forced_row;  // connection -> row
  std::vector<int> cap_row;
  bool integral_costs = true;
};

BlockLp build_block(const std::vector<const Subproblem*>& subs, const PatternPools& pools, bool phase_one) {
  BlockLp B;
  const int ns = static_cast<int>(subs.size());
  B.demand_row.resize(ns);
  B.forced_row.resize(ns);
  std::vector<std::map<int, std::vector<std::pair<int, double>>>> drow(ns), frow(ns);
  std::vector<std::vector<std::pair<int, double>>> cap(ns);
  for (int s = 0; s < ns; ++s) {
    const Subproblem& sub = *subs[s];
    for (int u : sub.demand) drow[s][u];
    for (int e : sub.forced) frow[s][e];
    if (sub.cost != std::floor(sub.cost)) B.integral_costs = false;
    const auto& pool = pools[sub.key];
    for (int p = 0; p < static_cast<int>(pool.size()); ++p) {
      bool inside = true;
      for (int u : pool[p].activities) inside = inside && drow[s].count(u);
      if (!inside) continue;
      int v = B.lp.add_variable(phase_one ? 0.0 : sub.cost, 0.0, kInf);
      B.cols.push_back({s, p});
      B.pattern_var.push_back(v);
      for (int u : pool[p].activities) drow[s][u].push_back({v, 1.0});
      for (int e : pool[p].connections) {
        auto it = frow[s].find(e);
        if (it != frow[s].end()) it->second.push_back({v, 1.0});
      }
      cap[s].push_back({v, 1.0});
    }
  }
  for (int s = 0; s < ns; ++s) {
    for (auto& [u, coefs] : drow[s]) {
      if (phase_one) coefs.push_back({B.lp.add_variable(1.0, 0.0, kInf), 1.0});
      B.demand_row[s][u] = B.lp.add_row(std::move(coefs), Relation::Equal, 1.0);
    }
    for (auto& [e, coefs] : frow[s]) {
      if (phase_one) coefs.push_back({B.lp.add_variable(1.0, 0.0, kInf), 1.0});
      B.forced_row[s][e] = B.lp.add_row(std::move(coefs), Relation::Equal, 1.0);
    }
    B.cap_row.push_back(B.lp.add_row(std::move(cap[s]), Relation::LessEqual, subs[s]->capacity));
  }
  return B;
}

std::vector<PatternDuals> block_duals(const Network& net, const BlockLp& B, const std::vector<double>& y) {
  std::vector<PatternDuals> out;
  for (std::size_t s = 0; s < B.cap_row.size(); ++s) {
    PatternDuals d = PatternDuals::zero(net);
    for (auto [u, row] : B.demand_row[s]) d.activity[u] = y[row];
    for (auto [e, row] : B.forced_row[s]) d.pair[e] = y[row];
    d.cap = -y[B.cap_row[s]];
    out.push_back(std::move(d));
  }
  return out;
}

bool add_to_pool(std::vector<GatePattern>& pool, GatePattern p) {
  for (const auto& q : pool)
    if (q == p) return false;
  pool.push_back(std::move(p));
  return true;
}

struct IntegerResult {
  bool feasible = false;
  bool time_limit = false;
  double value = 0.0;
  std::vector<GatePattern> selected;
};

IntegerResult solve_integer(const std::vector<const Subproblem*>& subs, const PatternPools& pools,
                            Clock::time_point deadline) {
  BlockLp B = build_block(subs, pools, false);
  MipOptions mo;
  mo.deadline = deadline;
  mo.integral_objective = B.integral_costs;
  MipSolution m = solve_mip(B.lp, B.pattern_var, mo);
  IntegerResult r;
  r.time_limit = m.status == MipStatus::TimeLimit;
  if (!m.has_incumbent) return r;
  r.feasible = true;
  r.value = m.objective;
  for (std::size_t k = 0; k < B.cols.size(); ++k) {
    double v = m.values[B.pattern_var[k]];
    int copies = static_cast<int>(std::lround(v));
    auto [s, p] = B.cols[k];
    for (int t = 0; t < copies; ++t) r.selected.push_back(pools[subs[s]->key][p]);
  }
  return r;
}

using Cancel = std::function<bool()>;

// Phase-two column generation on the block relaxation. Returns false when
// the relaxation is infeasible or time ran out.
bool phase_two_cg(const Network& net, const std::vector<const Subproblem*>& subs, PatternPools& pools,
                  const SolverOptions& opts, Clock::time_point deadline, BlockOutcome& out) {
  for (;;) {
    if (Clock::now() >= deadline) {
      out.status = SubStatus::TimeLimit;
      return false;
    }
    BlockLp B = build_block(subs, pools, false);
    LpSolution sol = solve_lp(B.lp);
    ++out.lp_solves;
    if (sol.status != LpStatus::Optimal) return false;
    auto duals = block_duals(net, B, sol.duals);
    int added = 0;
    for (std::size_t s = 0; s < subs.size(); ++s)
      for (auto& p : price_patterns(net, subs[s]->key, duals[s], subs[s]->demand, pools[subs[s]->key],
                                    opts.pattern_columns))
        added += add_to_pool(pools[subs[s]->key], std::move(p));
    out.patterns_added += added;
    if (added == 0) {
      out.lr_value = sol.objective;
      out.duals = std::move(duals);
      return true;
    }
  }
}

// Integer restricted problem, falling back to the exact cover when the pool
// lacks an integer solution the relaxation promises.
bool integer_with_fallback(const Network& net, const std::vector<const Subproblem*>& subs, PatternPools& pools,
                           Clock::time_point deadline, double target, BlockOutcome& out) {
  IntegerResult ir = solve_integer(subs, pools, deadline);
  if (!ir.feasible || ir.value > target + 1e-6) {
    bool extended = false;
    for (const Subproblem* s : subs) {
      auto cover = exact_cover(net, *s);
      if (!cover || static_cast<int>(cover->size()) > s->capacity) continue;
      for (auto& p : *cover) {
        bool added = add_to_pool(pools[s->key], std::move(p));
        out.patterns_added += added;
        extended = extended || added;
      }
    }
    if (extended) ir = solve_integer(subs, pools, deadline);
  }
  if (ir.time_limit && !ir.feasible) {
    out.status = SubStatus::TimeLimit;
    return false;
  }
  if (!ir.feasible) return false;
  out.value = ir.value;
  out.selected = std::move(ir.selected);
  return true;
}

BlockOutcome feasibility_block(const Network& net, const std::vector<const Subproblem*>& subs, PatternPools& pools,
                               const SolverOptions& opts, Clock::time_point deadline, const Cancel& cancelled) {
  BlockOutcome out;
  for (const Subproblem* s : subs)
    for (auto& p : customized_init(net, s->key, s->demand, s->forced, pools[s->key], opts.addini))
      out.patterns_added += add_to_pool(pools[s->key], std::move(p));
  {
    IntegerResult ir = solve_integer(subs, pools, deadline);
    if (ir.feasible) {
      out.value = ir.value;
      out.selected = std::move(ir.selected);
      return out;
    }
  }
  for (;;) {
    if (cancelled()) {
      out.status = SubStatus::Cancelled;
      return out;
    }
    if (Clock::now() >= deadline) {
      out.status = SubStatus::TimeLimit;
      return out;
    }
    BlockLp B = build_block(subs, pools, true);
    LpSolution sol = solve_lp(B.lp);
    ++out.lp_solves;
    if (sol.status != LpStatus::Optimal) throw NumericalError("phase-one subproblem not solved");
    if (sol.objective <= 1e-7) {
      // The restricted relaxation is feasible but its integer version is not.
      if (phase_two_cg(net, subs, pools, opts, deadline, out) &&
          integer_with_fallback(net, subs, pools, deadline, out.lr_value, out)) {
        out.status = SubStatus::Feasible;
        return out;
      }
      if (out.status != SubStatus::TimeLimit) out.status = SubStatus::Rejected;
      return out;
    }
    auto duals = block_duals(net, B, sol.duals);
    if (opts.certificate) {
      for (std::size_t s = 0; s < subs.size(); ++s) {
        const Subproblem& sub = *subs[s];
        std::vector<double> lambda, b;
        for (int u : sub.demand) lambda.push_back(duals[s].activity[u]);
        for (int e : sub.forced) lambda.push_back(duals[s].pair[e]);
        b.assign(lambda.size(), 1.0);
        std::vector<double> w(net.num_activity_ids(), 0.0);
        for (int u : sub.demand) w[u] = duals[s].activity[u];
        auto through = best_through(net, sub.key, net.activities_at(sub.key), w, duals[s].pair);
        double pmax = through.empty() ? 0.0 : *std::max_element(through.begin(), through.end());
        if (infeasibility_certificate(lambda, b, duals[s].cap, pmax, sub.capacity)) {
          out.status = SubStatus::InfeasibleCertified;
          out.certificate_fired = true;
          out.duals.assign(subs.size(), PatternDuals::zero(net));
          out.duals[s] = duals[s];
          out.duals[s].cap = std::max({duals[s].cap, pmax, 0.0});
          out.infeasible = {static_cast<int>(s)};
          return out;
        }
      }
    }
    int added = 0;
    for (std::size_t s = 0; s < subs.size(); ++s) {
      // Phase-one reduced cost has no pattern cost: fold it into cap.
      PatternDuals price = duals[s];
      price.cap = duals[s].cap - subs[s]->cost;
      for (auto& p : price_patterns(net, subs[s]->key, price, subs[s]->demand, pools[subs[s]->key],
                                    opts.pattern_columns))
        added += add_to_pool(pools[subs[s]->key], std::move(p));
    }
    out.patterns_added += added;
    if (added == 0) {
      out.status = SubStatus::InfeasibleExhausted;
      out.duals = std::move(duals);
      for (std::size_t s = 0; s < subs.size(); ++s) out.infeasible.push_back(static_cast<int>(s));
      return out;
    }
  }
}

BlockOutcome optimality_block(const Network& net, const std::vector<const Subproblem*>& subs, PatternPools& pools,
                              const SolverOptions& opts, Clock::time_point deadline) {
  BlockOutcome out;
  if (!phase_two_cg(net, subs, pools, opts, deadline, out)) {
    if (out.status != SubStatus::TimeLimit) out.status = SubStatus::Rejected;
    return out;
  }
  if (!integer_with_fallback(net, subs, pools, deadline, out.lr_value, out)) {
    if (out.status != SubStatus::TimeLimit) out.status = SubStatus::Rejected;
    return out;
  }
  return out;
}

std::vector<std::vector<const Subproblem*>> make_blocks(const std::vector<Subproblem>& subs, bool separation) {
  std::vector<std::vector<const Subproblem*>> blocks;
  if (separation) {
    for (const auto& s : subs) blocks.push_back({&s});
  } else if (!subs.empty()) {
    blocks.emplace_back();
    for (const auto& s : subs) blocks.back().push_back(&s);
  }
  return blocks;
}

// Runs fn on every block. A certified infeasibility at block i cancels blocks
// after i; their pool additions are rolled back so serial and parallel runs
// leave identical state.
template <class Fn>
std::vector<BlockOutcome> run_blocks(const std::vector<std::vector<const Subproblem*>>& blocks, PatternPools& pools,
                                     int workers, Fn fn) {
  const int nb = static_cast<int>(blocks.size());
  std::vector<BlockOutcome> out(nb);
  std::vector<std::vector<std::size_t>> sizes(nb);
  for (int b = 0; b < nb; ++b)
    for (const Subproblem* s : blocks[b]) sizes[b].push_back(pools[s->key].size());
  std::atomic<int> stop{INT_MAX};
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, workers)) if (workers > 1)
  for (int b = 0; b < nb; ++b) {
    if (stop.load() < b) {
      out[b].status = SubStatus::Cancelled;
      continue;
    }
    out[b] = fn(blocks[b], [&stop, b] { return stop.load() < b; });
    if (out[b].status == SubStatus::InfeasibleCertified) {
      int cur = stop.load();
      while (b < cur && !stop.compare_exchange_weak(cur, b)) {
      }
    }
  }
  for (int b = stop.load() == INT_MAX ? nb : stop.load() + 1; b < nb; ++b) {
    out[b] = BlockOutcome{};
    out[b].status = SubStatus::Cancelled;
    for (std::size_t k = 0; k < blocks[b].size(); ++k) pools[blocks[b][k]->key].resize(sizes[b][k]);
  }
  return out;
}

}  // namespace

std::vector<BlockOutcome> check_feasibility(const Network& net, const std::vector<Subproblem>& subs, PatternPools& pools,
                                            const SolverOptions& opts, Clock::time_point deadline) {
  auto blocks = make_blocks(subs, opts.separation);
  return run_blocks(blocks, pools, opts.workers, [&](const auto& block, const Cancel& cancelled) {
    return feasibility_block(net, block, pools, opts, deadline, cancelled);
  });
}

std::vector<BlockOutcome> solve_optimality(const Network& net, const std::vector<Subproblem>& subs, PatternPools& pools,
                                           const SolverOptions& opts, Clock::time_point deadline) {
  auto blocks = make_blocks(subs, opts.separation);
  return run_blocks(blocks, pools, opts.workers, [&](const auto& block, const Cancel&) {
    return optimality_block(net, block, pools, opts, deadline);
  });
}

GateDuals lift_duals(const Network& net, const std::vector<Subproblem>& subs, const std::vector<PatternDuals>& duals,
                     bool ray) {
  GateDuals g;
  g.activity.assign(net.num_activity_ids(), 0.0);
  for (std::size_t s = 0; s < subs.size(); ++s) {
    const Subproblem& sub = subs[s];
    const PatternDuals& d = duals[s];
    std::vector<char> demanded(net.num_activity_ids(), 0);
    for (int u : sub.demand) {
      demanded[u] = 1;
      g.activity[u] = d.activity[u];
    }
    for (int e : sub.forced) {
      auto it = d.pair.find(e);
      double v = it == d.pair.end() ? 0.0 : it->second;
      if (v < 0.0)
        g.activity[net.arr_activity(net.connection(e).pred)] += v;
      else if (v > 0.0)
        g.pair[e] = v;
    }
    g.gate_term += d.cap * sub.capacity;
    // Sequential lifting: each dual outside the subproblem rows gets the
    // largest value that keeps every pattern through it, with the duals
    // lifted so far, priced nonnegative. Connections between demanded
    // activities go first so that tail swaps over the same copies stay cut,
    // then the other activities in time order, then the other connections.
    // Connections whose [arrival, departure] spans share a time point never
    // lie on one pattern, so each such batch is lifted from one sweep.
    const auto& all = net.activities_at(sub.key);
    const double c = ray ? 0.0 : sub.cost;
    std::set<int> forced(sub.forced.begin(), sub.forced.end());
    std::vector<int> outer;
    for (int e : net.connections_at(sub.key)) {
      const Connection& conn = net.connection(e);
      if (forced.count(e)) continue;
      if (!demanded[net.arr_activity(conn.pred)] || !demanded[net.dep_activity(conn.succ)]) {
        outer.push_back(e);
        continue;
      }
      const int one[] = {e};
      double through = best_through_arcs(net, sub.key, all, g.activity, g.pair, one)[0];
      if (std::isfinite(through)) g.pair[e] = std::max(0.0, c + d.cap - through);
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (demanded[all[i]]) continue;
      auto through = best_through(net, sub.key, all, g.activity, g.pair);
      g.activity[all[i]] = c + d.cap - through[i];
    }
    auto arr_time = [&](int e) { return net.activity(net.arr_activity(net.connection(e).pred)).start; };
    auto dep_time = [&](int e) { return net.activity(net.dep_activity(net.connection(e).succ)).start; };
    std::stable_sort(outer.begin(), outer.end(), [&](int a, int b) { return arr_time(a) < arr_time(b); });
    for (std::size_t i = 0; i < outer.size();) {
      const Minutes t = arr_time(outer[i]);
      std::vector<int> batch;
      std::size_t j = i;
      for (; j < outer.size() && arr_time(outer[j]) <= t; ++j) batch.push_back(outer[j]);
      // Later arrivals join while every member still spans t.
      Minutes until = std::numeric_limits<Minutes>::max();
      for (int e : batch) until = std::min(until, dep_time(e));
      for (; j < outer.size() && arr_time(outer[j]) < until && dep_time(outer[j]) > arr_time(outer[j]); ++j) {
        batch.push_back(outer[j]);
        until = std::min(until, dep_time(outer[j]));
      }
      auto through = best_through_arcs(net, sub.key, all, g.activity, g.pair, batch);
      for (std::size_t k = 0; k < batch.size(); ++k)
        if (std::isfinite(through[k])) g.pair[batch[k]] = std::max(0.0, c + d.cap - through[k]);
      i = j;
    }
  }
  return g;
}

BspResult solve_bsp(const Network& net, const std::vector<AircraftRoute>& selected, PatternPools& pools,
                    const SolverOptions& opts, Clock::time_point deadline, bool want_optimality_cut) {
  BspResult res;
  res.subproblems = separate_bsp(net, selected);
  if (pools.size() < net.gate_keys().size()) pools.resize(net.gate_keys().size());
  const auto& subs = res.subproblems;
  auto blocks = make_blocks(subs, opts.separation);
  auto subs_of = [&](std::size_t b) {
    std::vector<Subproblem> out;
    for (const Subproblem* s : blocks[b]) out.push_back(*s);
    return out;
  };
  auto tally = [&](const std::vector<BlockOutcome>& outs) {
    for (const auto& o : outs) {
      res.lp_solves += o.lp_solves;
      res.patterns_added += o.patterns_added;
    }
  };

  auto feas = check_feasibility(net, subs, pools, opts, deadline);
  tally(feas);
  res.blocks = feas;
  bool infeasible = false, rejected = false, timeout = false;
  for (std::size_t b = 0; b < feas.size(); ++b) {
    const auto& o = feas[b];
    if (o.status == SubStatus::TimeLimit) timeout = true;
    if (o.status == SubStatus::Rejected) rejected = true;
    if (o.status != SubStatus::InfeasibleCertified && o.status != SubStatus::InfeasibleExhausted) continue;
    infeasible = true;
    res.certified = res.certified || o.certificate_fired;
    auto bs = subs_of(b);
    std::vector<Subproblem> part;
    std::vector<PatternDuals> pd;
    for (int s : o.infeasible) {
      part.push_back(bs[s]);
      pd.push_back(o.duals[s]);
    }
    if (auto cut = feasibility_cut(lift_duals(net, part, pd, true))) res.cuts.push_back(std::move(*cut));
  }
  if (infeasible) {
    res.status = BspResult::Status::Infeasible;
    return res;
  }
  if (timeout) {
    res.status = BspResult::Status::TimeLimit;
    return res;
  }
  if (rejected) {
    res.status = BspResult::Status::Rejected;
    return res;
  }

  auto opt = solve_optimality(net, subs, pools, opts, deadline);
  tally(opt);
  res.blocks = opt;
  std::vector<Subproblem> all;
  std::vector<PatternDuals> pd;
  for (std::size_t b = 0; b < opt.size(); ++b) {
    const auto& o = opt[b];
    if (o.status == SubStatus::TimeLimit) {
      res.status = BspResult::Status::TimeLimit;
      return res;
    }
    if (o.status != SubStatus::Feasible) {
      res.status = BspResult::Status::Rejected;
      return res;
    }
    res.value += o.value;
    res.lr_value += o.lr_value;
    res.selected.insert(res.selected.end(), o.selected.begin(), o.selected.end());
    auto bs = subs_of(b);
    all.insert(all.end(), bs.begin(), bs.end());
    pd.insert(pd.end(), o.duals.begin(), o.duals.end());
  }
  if (want_optimality_cut)
    if (auto cut = optimality_cut(lift_duals(net, all, pd, false))) res.cuts.push_back(std::move(*cut));
  return res;
}

std::vector<GateAssignment> assemble_gate_assignment(const Network& net, std::vector<GatePattern> selected) {
  std::stable_sort(selected.begin(), selected.end(), [&](const GatePattern& a, const GatePattern& b) {
    if (a.gate_key != b.gate_key) return a.gate_key < b.gate_key;
    const Activity& x = net.activity(a.activities.front());
    const Activity& y = net.activity(b.activities.front());
    if (x.start != y.start) return x.start < y.start;
    return a.activities < b.activities;
  });
  std::vector<GateAssignment> out;
  std::map<int, int> used;
  for (auto& p : selected) {
    int g = ++used[p.gate_key];
    if (g > net.capacity(p.gate_key))
      throw CapacityError("more patterns than gates at " + net.key_label(p.gate_key));
    out.push_back({p.gate_key, g, std::move(p)});
  }
  return out;
}

}  // namespace sagr
