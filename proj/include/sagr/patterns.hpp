#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sagr/columns.hpp"
#include "sagr/network.hpp"

namespace sagr {

// Duals of one (airport, gate type) subproblem in the sign convention of the
// pattern reduced cost  rc = c - sum pi_u a_u - sum pi_e b_e + cap.
struct PatternDuals {
  std::vector<double> activity;          // by activity id
  std::unordered_map<int, double> pair;  // by connection id
  double cap = 0.0;

  static PatternDuals zero(const Network& net);
};

// True when a gate can serve activity u and then activity v.
bool activities_compatible(const Network& net, int u, int v);

// Connection id when u then v are an arrival-departure pair of E^{a,t}, else -1.
int pattern_pair(const Network& net, int u, int v);

std::optional<GatePattern> make_pattern(const Network& net, int key, const std::vector<int>& activities);
std::string pattern_violation(const Network& net, const GatePattern& p);

double pattern_reduced_cost(const Network& net, const GatePattern& p, const PatternDuals& duals);

// Up to k patterns of `key` outside `pool`, built only from `allowed`
// activities, with reduced cost below -tol, most negative first.
std::vector<GatePattern> price_patterns(const Network& net, int key, const PatternDuals& duals,
                                        std::span<const int> allowed, const std::vector<GatePattern>& pool, int k,
                                        double tol = 1e-6);

// Heaviest path weight through each of `allowed` (same order) over the
// activity DAG of `key`, with node weights by activity id and arc weights by
// connection id. Activities outside `allowed` may not be used.
std::vector<double> best_through(const Network& net, int key, std::span<const int> allowed,
                                 const std::vector<double>& node_w, const std::unordered_map<int, double>& arc_w);
// Heaviest path serving each connection of `arcs` back to back.
std::vector<double> best_through_arcs(const Network& net, int key, std::span<const int> allowed,
                                      const std::vector<double>& node_w,
                                      const std::unordered_map<int, double>& arc_w, std::span<const int> arcs);

// Patterns that serve each uncovered connection of `forced` back to back,
// padded greedily with other `demand` activities; at most m per connection.
std::vector<GatePattern> customized_init(const Network& net, int key, std::span<const int> demand,
                                         std::span<const int> forced, const std::vector<GatePattern>& pool, int m);

}  // namespace sagr
