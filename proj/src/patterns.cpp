#include "sagr/patterns.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

namespace sagr {

PatternDuals PatternDuals::zero(const Network& net) {
  PatternDuals d;
  d.activity.assign(net.num_activity_ids(), 0.0);
  return d;
}

int pattern_pair(const Network& net, int u, int v) {
  const Activity& a = net.activity(u);
  const Activity& b = net.activity(v);
  if (!a.incoming() || !b.outgoing()) return -1;
  return net.find_connection(a.copy, b.copy);
}

bool activities_compatible(const Network& net, int u, int v) {
  const Activity& a = net.activity(u);
  const Activity& b = net.activity(v);
  if (!a.valid() || !b.valid() || a.gate_key != b.gate_key || a.copy == b.copy) return false;
  Minutes gap = pattern_pair(net, u, v) >= 0 ? 0 : net.config().buffer_time;
  return a.end + gap <= b.start;
}

std::string pattern_violation(const Network& net, const GatePattern& p) {
  if (p.gate_key < 0 || p.gate_key >= static_cast<int>(net.gate_keys().size())) return "unknown gate key";
  if (p.activities.empty()) return "empty pattern";
  std::vector<int> conns;
  for (std::size_t k = 0; k < p.activities.size(); ++k) {
    int u = p.activities[k];
    if (u < 0 || u >= net.num_activity_ids() || !net.activity(u).valid()) return "unknown activity";
    if (net.activity(u).gate_key != p.gate_key) return "activity at another airport or gate type";
    if (k == 0) continue;
    int prev = p.activities[k - 1];
    if (!activities_compatible(net, prev, u)) return "buffer or order violated";
    int e = pattern_pair(net, prev, u);
    if (e >= 0) conns.push_back(e);
  }
  if (conns != p.connections) return "pair list inconsistent";
  if (p.cost != net.pattern_cost(p.gate_key)) return "cost inconsistent";
  return "";
}

std::optional<GatePattern> make_pattern(const Network& net, int key, const std::vector<int>& activities) {
  GatePattern p;
  p.gate_key = key;
  p.activities = activities;
  if (key < 0 || key >= static_cast<int>(net.gate_keys().size())) return std::nullopt;
  p.cost = net.pattern_cost(key);
  for (std::size_t k = 1; k < activities.size(); ++k) {
    int u = activities[k - 1], v = activities[k];
    if (u < 0 || v < 0 || u >= net.num_activity_ids() || v >= net.num_activity_ids()) return std::nullopt;
    int e = pattern_pair(net, u, v);
    if (e >= 0) p.connections.push_back(e);
  }
  if (!pattern_violation(net, p).empty()) return std::nullopt;
  return p;
}

double pattern_reduced_cost(const Network& net, const GatePattern& p, const PatternDuals& duals) {
  double rc = net.pattern_cost(p.gate_key) + duals.cap;
  for (int u : p.activities) rc -= duals.activity[u];
  for (int e : p.connections) {
    auto it = duals.pair.find(e);
    if (it != duals.pair.end()) rc -= it->second;
  }
  return rc;
}

namespace {

std::vector<int> in_time_order(const Network& net, int key, std::span<const int> allowed) {
  std::vector<char> mark(net.num_activity_ids(), 0);
  for (int u : allowed) mark[u] = 1;
  std::vector<int> out;
  for (int u : net.activities_at(key))
    if (mark[u]) out.push_back(u);
  return out;
}

struct Trie {
  std::vector<std::map<int, int>> next{1};
  std::vector<char> terminal{0};
  void insert(const std::vector<int>& seq) {
    int node = 0;
    for (int c : seq) {
      auto it = next[node].find(c);
      if (it == next[node].end()) {
        next.emplace_back();
        terminal.push_back(0);
        it = next[node].emplace(c, static_cast<int>(next.size()) - 1).first;
      }
      node = it->second;
    }
    terminal[node] = 1;
  }
  int step(int node, int c) const {
    if (node < 0) return -1;
    auto it = next[node].find(c);
    return it == next[node].end() ? -1 : it->second;
  }
};

}  // namespace

std::vector<GatePattern> price_patterns(const Network& net, int key, const PatternDuals& duals,
                                        std::span<const int> allowed, const std::vector<GatePattern>& pool, int k,
                                        double tol) {
  if (k <= 0) return {};
  const std::vector<int> order = in_time_order(net, key, allowed);
  if (order.empty()) return {};
  Trie trie;
  for (const auto& p : pool)
    if (p.gate_key == key) trie.insert(p.activities);

  struct Label {
    double cost;
    int node;
    int parent;
    int trie;
  };
  std::vector<Label> labels;
  std::unordered_map<int, std::vector<int>> at;
  // Cost is the only resource, so k untagged labels at a node suffice.
  auto insert = [&](Label lab) {
    auto& list = at[lab.node];
    int dom = 0;
    for (int idx : list)
      if (labels[idx].trie < 0 && labels[idx].cost <= lab.cost && ++dom >= k) return;
    labels.push_back(lab);
    list.push_back(static_cast<int>(labels.size()) - 1);
    if (lab.trie >= 0) return;
    std::vector<int> drop;
    for (int idx : list) {
      int n = 0;
      for (int o : list)
        if (o != idx && labels[o].trie < 0 && labels[o].cost <= labels[idx].cost &&
            (labels[o].cost < labels[idx].cost || o < idx))
          ++n;
      if (n >= k) drop.push_back(idx);
    }
    std::erase_if(list, [&](int idx) { return std::find(drop.begin(), drop.end(), idx) != drop.end(); });
  };

  const double base = net.pattern_cost(key) + duals.cap;
  struct Found {
    double rc;
    std::vector<int> acts;
  };
  std::vector<Found> found;
  for (std::size_t i = 0; i < order.size(); ++i) {
    int v = order[i];
    insert({base - duals.activity[v], v, -1, trie.step(0, v)});
    const std::vector<int> here = at[v];
    for (int li : here) {
      const Label cur = labels[li];
      if (cur.cost < -tol && !(cur.trie >= 0 && trie.terminal[cur.trie])) {
        std::vector<int> seq;
        for (int x = li; x >= 0; x = labels[x].parent) seq.push_back(labels[x].node);
        std::reverse(seq.begin(), seq.end());
        found.push_back({cur.cost, std::move(seq)});
      }
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        int w = order[j];
        if (!activities_compatible(net, v, w)) continue;
        double c = cur.cost - duals.activity[w];
        int e = pattern_pair(net, v, w);
        if (e >= 0) {
          auto it = duals.pair.find(e);
          if (it != duals.pair.end()) c -= it->second;
        }
        insert({c, w, li, trie.step(cur.trie, w)});
      }
    }
  }
  std::sort(found.begin(), found.end(),
            [](const Found& a, const Found& b) { return a.rc != b.rc ? a.rc < b.rc : a.acts < b.acts; });
  std::vector<GatePattern> out;
  for (const auto& f : found) {
    if (static_cast<int>(out.size()) >= k) break;
    auto p = make_pattern(net, key, f.acts);
    if (p) out.push_back(std::move(*p));
  }
  return out;
}

namespace {

struct PathSweep {
  std::vector<int> order;
  std::unordered_map<int, int> pos;  // activity id -> index in order
  std::vector<double> fwd, bwd;      // heaviest path ending / starting at order[i]
};

PathSweep sweep_paths(const Network& net, int key, std::span<const int> allowed, const std::vector<double>& node_w,
                      const std::unordered_map<int, double>& arc_w) {
  PathSweep ps;
  ps.order = in_time_order(net, key, allowed);
  const int n = static_cast<int>(ps.order.size());
  const auto& order = ps.order;
  auto arc = [&](int u, int v) {
    int e = pattern_pair(net, u, v);
    if (e < 0) return 0.0;
    auto it = arc_w.find(e);
    return it == arc_w.end() ? 0.0 : it->second;
  };
  ps.fwd.resize(n);
  ps.bwd.resize(n);
  for (int i = 0; i < n; ++i) {
    ps.pos[order[i]] = i;
    double best = 0.0;
    for (int h = 0; h < i; ++h)
      if (activities_compatible(net, order[h], order[i])) best = std::max(best, ps.fwd[h] + arc(order[h], order[i]));
    ps.fwd[i] = node_w[order[i]] + best;
  }
  for (int i = n - 1; i >= 0; --i) {
    double best = 0.0;
    for (int j = i + 1; j < n; ++j)
      if (activities_compatible(net, order[i], order[j])) best = std::max(best, ps.bwd[j] + arc(order[i], order[j]));
    ps.bwd[i] = node_w[order[i]] + best;
  }
  return ps;
}

}  // namespace

std::vector<double> best_through(const Network& net, int key, std::span<const int> allowed,
                                 const std::vector<double>& node_w, const std::unordered_map<int, double>& arc_w) {
  PathSweep ps = sweep_paths(net, key, allowed, node_w, arc_w);
  std::vector<double> out;
  out.reserve(allowed.size());
  for (int u : allowed) {
    auto it = ps.pos.find(u);
    out.push_back(it == ps.pos.end() ? -std::numeric_limits<double>::infinity()
                                     : ps.fwd[it->second] + ps.bwd[it->second] - node_w[u]);
  }
  return out;
}

std::vector<double> best_through_arcs(const Network& net, int key, std::span<const int> allowed,
                                      const std::vector<double>& node_w,
                                      const std::unordered_map<int, double>& arc_w, std::span<const int> arcs) {
  PathSweep ps = sweep_paths(net, key, allowed, node_w, arc_w);
  std::vector<double> out;
  out.reserve(arcs.size());
  for (int e : arcs) {
    const Connection& c = net.connection(e);
    auto u = ps.pos.find(net.arr_activity(c.pred));
    auto v = ps.pos.find(net.dep_activity(c.succ));
    if (u == ps.pos.end() || v == ps.pos.end()) {
      out.push_back(-std::numeric_limits<double>::infinity());
      continue;
    }
    auto it = arc_w.find(e);
    out.push_back(ps.fwd[u->second] + ps.bwd[v->second] + (it == arc_w.end() ? 0.0 : it->second));
  }
  return out;
}

std::vector<GatePattern> customized_init(const Network& net, int key, std::span<const int> demand,
                                         std::span<const int> forced, const std::vector<GatePattern>& pool, int m) {
  std::vector<GatePattern> out;
  if (m <= 0 || forced.empty()) return out;
  const std::vector<int> order = in_time_order(net, key, demand);

  // Blocks: maximal chains of activities joined by forced connections.
  std::unordered_map<int, int> forced_next, forced_prev;
  for (int e : forced) {
    const Connection& c = net.connection(e);
    int u = net.arr_activity(c.pred), v = net.dep_activity(c.succ);
    forced_next[u] = v;
    forced_prev[v] = u;
  }
  auto block_of = [&](int u) {
    while (forced_prev.count(u)) u = forced_prev[u];
    std::vector<int> b{u};
    while (forced_next.count(b.back())) b.push_back(forced_next[b.back()]);
    return b;
  };
  std::vector<std::vector<int>> blocks;
  std::unordered_map<int, int> block_id;
  for (int u : order) {
    if (block_id.count(u)) continue;
    auto b = block_of(u);
    for (int x : b) block_id[x] = static_cast<int>(blocks.size());
    blocks.push_back(std::move(b));
  }
  auto fits = [&](const std::vector<int>& a, const std::vector<int>& b) {
    return activities_compatible(net, a.back(), b.front());
  };

  std::set<int> covered;
  for (const auto& p : pool)
    if (p.gate_key == key) covered.insert(p.connections.begin(), p.connections.end());
  for (const auto& p : out) covered.insert(p.connections.begin(), p.connections.end());

  std::set<std::vector<int>> emitted;
  for (int e : forced) {
    if (covered.count(e)) continue;
    int u = net.arr_activity(net.connection(e).pred);
    if (!block_id.count(u)) continue;
    const int home = block_id[u];
    for (int variant = 0; variant < m; ++variant) {
      std::vector<int> chosen{home};
      if (variant > 0) {
        int skip = variant - 1;
        for (int b = home + 1; b < static_cast<int>(blocks.size()); ++b) {
          if (!fits(blocks[chosen.back()], blocks[b])) continue;
          if (skip > 0) {
            --skip;
            continue;
          }
          chosen.push_back(b);
        }
        for (int b = home - 1; b >= 0; --b)
          if (fits(blocks[b], blocks[chosen.front()])) chosen.insert(chosen.begin(), b);
      }
      std::vector<int> acts;
      for (int b : chosen) acts.insert(acts.end(), blocks[b].begin(), blocks[b].end());
      if (!emitted.insert(acts).second) continue;
      auto p = make_pattern(net, key, acts);
      if (p) out.push_back(std::move(*p));
    }
  }
  return out;
}

}  // namespace sagr
