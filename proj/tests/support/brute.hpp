#pragma once

// Slow reference implementations used to cross-check the library.

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include "prio/instance.hpp"

namespace brute {

using prio::EdgeId;
using prio::Level;
using prio::Vertex;

inline std::vector<std::vector<std::pair<Vertex, EdgeId>>> adjacency(const prio::PriorityGraph& g) {
  std::vector<std::vector<std::pair<Vertex, EdgeId>>> adj(g.num_vertices());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    adj[g.edge(e).u].push_back({g.edge(e).v, e});
    adj[g.edge(e).v].push_back({g.edge(e).u, e});
  }
  return adj;
}

// Cheapest simple path by exhaustive DFS. cost(x, e) is charged when
// leaving interior vertex x through edge e; leaving the start is charged edge cost only.
inline double cheapest_simple_path(const prio::PriorityGraph& g, Vertex from, Vertex to,
                                   const std::function<double(EdgeId)>& edge_cost,
                                   const std::function<double(Vertex)>& interior_cost) {
  auto adj = adjacency(g);
  std::vector<char> on(g.num_vertices(), 0);
  double best = prio::kInfinity;
  std::function<void(Vertex, double)> go = [&](Vertex x, double acc) {
    if (acc >= best) return;
    if (x == to) {
      best = acc;
      return;
    }
    on[x] = 1;
    double leave = x == from ? 0.0 : interior_cost(x);
    for (auto [y, e] : adj[x]) {
      if (!on[y]) go(y, acc + leave + edge_cost(e));
    }
    on[x] = 0;
  };
  go(from, 0.0);
  return best;
}

// Parent arrays of an edge set that must be a tree containing root; empty when not.
struct Rooted {
  std::vector<Vertex> parent;
  std::vector<EdgeId> via;
  std::vector<Vertex> order;
};

inline bool root_edges(const prio::PriorityGraph& g, const std::vector<EdgeId>& edges, Vertex root, Rooted& out) {
  const int n = g.num_vertices();
  out.parent.assign(n, -1);
  out.via.assign(n, -1);
  out.order.assign(1, root);
  std::vector<std::vector<std::pair<Vertex, EdgeId>>> adj(n);
  for (EdgeId e : edges) {
    adj[g.edge(e).u].push_back({g.edge(e).v, e});
    adj[g.edge(e).v].push_back({g.edge(e).u, e});
  }
  std::vector<char> seen(n, 0);
  seen[root] = 1;
  for (size_t i = 0; i < out.order.size(); ++i) {
    Vertex x = out.order[i];
    for (auto [y, e] : adj[x]) {
      if (e == out.via[x]) continue;
      if (seen[y]) return false;  // cycle
      seen[y] = 1;
      out.parent[y] = x;
      out.via[y] = e;
      out.order.push_back(y);
    }
  }
  return out.order.size() == edges.size() + 1;
}

// Subtree maxima of terminal priorities; root gets `root_level`.
inline std::vector<Level> subtree_need(const Rooted& r, const prio::Demand& d, Level root_level) {
  std::vector<Level> need(d.priority.size(), 0);
  for (Vertex v : r.order) need[v] = d.is_terminal(v) ? d.priority[v] : 0;
  for (auto it = r.order.rbegin(); it != r.order.rend(); ++it) {
    if (r.parent[*it] >= 0) need[r.parent[*it]] = std::max(need[r.parent[*it]], need[*it]);
  }
  need[r.order.front()] = root_level;
  return need;
}

inline bool covers_terminals(const Rooted& r, const prio::Demand& d) {
  std::vector<char> in(d.priority.size(), 0);
  for (Vertex v : r.order) in[v] = 1;
  for (Vertex t : d.terminals()) {
    if (!in[t]) return false;
  }
  return true;
}

// Minimum over every edge subset forming a tree through s and all terminals,
// charged with forced rates. Exponential in m.
inline double opt_by_subsets(const prio::PriorityGraph& g, const prio::Demand& d,
                             const std::function<double(EdgeId, Level)>& edge_w,
                             const std::function<double(Vertex, Level)>& vertex_w) {
  const int m = g.num_edges();
  double best = prio::kInfinity;
  for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
    std::vector<EdgeId> edges;
    for (EdgeId e = 0; e < m; ++e) {
      if (mask >> e & 1) edges.push_back(e);
    }
    Rooted r;
    if (!root_edges(g, edges, d.source, r) || !covers_terminals(r, d)) continue;
    auto need = subtree_need(r, d, g.levels());
    double w = 0.0;
    for (Vertex v : r.order) {
      w += vertex_w(v, need[v]);
      if (r.parent[v] >= 0) w += edge_w(r.via[v], need[v]);
    }
    best = std::min(best, w);
  }
  return best;
}

inline double opt_pst(const prio::PstInstance& inst) {
  return opt_by_subsets(
      inst.graph, inst.demand, [&](EdgeId e, Level r) { return inst.weight(e, r); }, [](Vertex, Level) { return 0.0; });
}

inline double opt_pnwst(const prio::PnwstInstance& inst) {
  return opt_by_subsets(
      inst.graph, inst.demand, [](EdgeId, Level) { return 0.0; }, [&](Vertex v, Level r) { return inst.weight(v, r); });
}

// Smallest weight over every feasible rate assignment on a fixed tree (k^|tree| choices).
inline double best_rates_on_tree(const prio::PstInstance& inst, const std::vector<EdgeId>& tree) {
  const int k = inst.graph.levels();
  std::vector<Level> pick(tree.size(), 1);
  double best = prio::kInfinity;
  while (true) {
    prio::EdgeRateSolution sol;
    sol.rates.assign(inst.graph.num_edges(), 0);
    for (size_t i = 0; i < tree.size(); ++i) sol.rates[tree[i]] = pick[i];
    if (prio::check_feasible(inst, sol)) best = std::min(best, prio::solution_weight(inst, sol));
    size_t i = 0;
    while (i < pick.size() && pick[i] == k) pick[i++] = 1;
    if (i == pick.size()) break;
    ++pick[i];
  }
  return best;
}

}  // namespace brute
