#include "prio/pst_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "prio/detail/union_find.hpp"
#include "prio/rate_paths.hpp"

namespace prio {

namespace {

// Runs body(i) for i in [0, count) on up to `threads` workers with a static split.
template <class Body>
void parallel_for(int count, int threads, Body body) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < count; i += threads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

std::vector<EdgeId> prune_to_terminals(const PriorityGraph& g, std::vector<EdgeId> edges,
                                       const std::vector<char>& keep) {
  std::vector<int> deg(g.num_vertices(), 0);
  std::vector<char> alive(g.num_edges(), 0);
  for (EdgeId e : edges) {
    alive[e] = 1;
    ++deg[g.edge(e).u];
    ++deg[g.edge(e).v];
  }
  std::vector<Vertex> leaves;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (deg[v] == 1 && !keep[v]) leaves.push_back(v);
  }
  while (!leaves.empty()) {
    Vertex v = leaves.back();
    leaves.pop_back();
    if (deg[v] != 1) continue;
    for (const Incidence& inc : g.neighbors(v)) {
      if (!alive[inc.edge]) continue;
      alive[inc.edge] = 0;
      --deg[v];
      if (--deg[inc.to] == 1 && !keep[inc.to]) leaves.push_back(inc.to);
      break;
    }
  }
  std::vector<EdgeId> out;
  for (EdgeId e : edges) {
    if (alive[e]) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

int log_bound_factor(int terminal_count) {
  if (terminal_count <= 1) return 1;
  int bits = 0;
  while ((1 << bits) < terminal_count) ++bits;
  return bits + 1;
}

EdgeRateSolution remove_cycles(const PstInstance& inst, std::span<const Level> rates) {
  const auto& g = inst.graph;
  std::vector<EdgeId> order;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (rates[e] > 0) order.push_back(e);
  }
  std::sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
    if (rates[a] != rates[b]) return rates[a] > rates[b];
    double wa = inst.weight(a, rates[a]), wb = inst.weight(b, rates[b]);
    if (wa != wb) return wa < wb;
    return a < b;
  });
  detail::UnionFind uf(g.num_vertices());
  std::vector<EdgeId> forest;
  for (EdgeId e : order) {
    if (uf.unite(g.edge(e).u, g.edge(e).v)) forest.push_back(e);
  }
  const int root = uf.find(inst.demand.source);
  std::vector<EdgeId> component;
  for (EdgeId e : forest) {
    if (uf.find(g.edge(e).u) == root) component.push_back(e);
  }
  std::sort(component.begin(), component.end());
  return forced_rates(inst, component);
}

PstRunReport alg1_qosmt(const PstInstance& inst) {
  const auto& g = inst.graph;
  const auto& d = inst.demand;
  auto terminals = d.terminals();
  std::stable_sort(terminals.begin(), terminals.end(),
                   [&](Vertex a, Vertex b) { return d.priority[a] > d.priority[b]; });

  PstRunReport report;
  report.solver = "alg1";
  std::vector<Level> rates(g.num_edges(), 0);
  std::vector<char> in_tree(g.num_vertices(), 0);
  in_tree[d.source] = 1;
  for (Vertex t : terminals) {
    Level p = d.priority[t];
    Vertex from[] = {t};
    auto res = edge_rate_search(inst, from, p, [&](Vertex x) { return in_tree[x] != 0; });
    if (res.stopped_at == kNoVertex) throw std::runtime_error("alg1: terminal cannot reach the tree");
    for (EdgeId e : res.edges_to(res.stopped_at)) rates[e] = std::max(rates[e], p);
    for (Vertex x : res.path_to(res.stopped_at)) in_tree[x] = 1;
    report.connection_costs[t] = res.dist[res.stopped_at];
    report.order.push_back(t);
  }
  report.solution = remove_cycles(inst, rates);
  return report;
}

PstRunReport alg2_parallel(const PstInstance& inst, int threads) {
  const auto& g = inst.graph;
  const auto& d = inst.demand;
  auto terminals = d.terminals();
  // Effective priority: (priority, id); the source outranks every terminal.
  auto outranks = [&](Vertex u, Vertex v) {
    if (u == d.source) return true;
    if (!d.is_terminal(u)) return false;
    if (d.priority[u] != d.priority[v]) return d.priority[u] > d.priority[v];
    return u > v;
  };

  struct Attachment {
    Vertex parent = kNoVertex;
    double cost = 0.0;
    std::vector<EdgeId> path;
  };
  std::vector<Attachment> found(terminals.size());
  parallel_for(static_cast<int>(terminals.size()), threads, [&](int i) {
    Vertex v = terminals[i];
    Vertex from[] = {v};
    auto res = edge_rate_search(inst, from, d.priority[v], [&](Vertex x) { return x != v && outranks(x, v); });
    if (res.stopped_at == kNoVertex) return;
    found[i] = {res.stopped_at, res.dist[res.stopped_at], res.edges_to(res.stopped_at)};
  });

  PstRunReport report;
  report.solver = "alg2";
  std::vector<Level> rates(g.num_edges(), 0);
  for (size_t i = 0; i < terminals.size(); ++i) {
    Vertex v = terminals[i];
    if (found[i].parent == kNoVertex) throw std::runtime_error("alg2: terminal cannot reach a higher-priority vertex");
    for (EdgeId e : found[i].path) rates[e] = std::max(rates[e], d.priority[v]);
    report.connection_costs[v] = found[i].cost;
    report.parent_choice[v] = found[i].parent;
  }
  report.solution = remove_cycles(inst, rates);
  return report;
}

std::vector<EdgeId> steiner_2approx(const PriorityGraph& g, std::span<const Vertex> terminals,
                                    std::span<const double> weights) {
  std::vector<Vertex> terms(terminals.begin(), terminals.end());
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  if (terms.empty()) throw std::invalid_argument("steiner_2approx: empty terminal set");
  if (terms.size() == 1) return {};

  const int t = static_cast<int>(terms.size());
  std::vector<PathResult> searches;
  searches.reserve(t);
  for (Vertex s : terms) {
    Vertex from[] = {s};
    searches.push_back(rate_search(g, from, [&](EdgeId e) { return weights[e]; }, [](Vertex) { return 0.0; }));
  }

  // Prim on the metric closure.
  std::vector<double> key(t, kInfinity);
  std::vector<int> link(t, -1);
  std::vector<char> done(t, 0);
  key[0] = 0.0;
  std::vector<char> union_edge(g.num_edges(), 0);
  for (int step = 0; step < t; ++step) {
    int best = -1;
    for (int i = 0; i < t; ++i) {
      if (!done[i] && (best < 0 || key[i] < key[best])) best = i;
    }
    if (key[best] == kInfinity) throw std::runtime_error("steiner_2approx: terminals are disconnected");
    done[best] = 1;
    if (link[best] >= 0) {
      for (EdgeId e : searches[link[best]].edges_to(terms[best])) union_edge[e] = 1;
    }
    for (int i = 0; i < t; ++i) {
      double dd = searches[best].dist[terms[i]];
      if (!done[i] && dd < key[i]) {
        key[i] = dd;
        link[i] = best;
      }
    }
  }

  // Spanning tree of the expanded paths, then drop non-terminal leaves.
  std::vector<EdgeId> candidates;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (union_edge[e]) candidates.push_back(e);
  }
  std::sort(candidates.begin(), candidates.end(), [&](EdgeId a, EdgeId b) {
    if (weights[a] != weights[b]) return weights[a] < weights[b];
    return a < b;
  });
  detail::UnionFind uf(g.num_vertices());
  std::vector<EdgeId> tree;
  for (EdgeId e : candidates) {
    if (uf.unite(g.edge(e).u, g.edge(e).v)) tree.push_back(e);
  }
  std::vector<char> keep(g.num_vertices(), 0);
  for (Vertex v : terms) keep[v] = 1;
  return prune_to_terminals(g, std::move(tree), keep);
}

PstRunReport k_rho_solver(const PstInstance& inst, int threads) {
  const auto& g = inst.graph;
  const auto& d = inst.demand;
  const int k = g.levels();
  std::vector<std::vector<EdgeId>> trees(k + 1);
  parallel_for(k, threads, [&](int idx) {
    Level level = idx + 1;
    std::vector<Vertex> group{d.source};
    for (Vertex v : d.terminals()) {
      if (d.priority[v] == level) group.push_back(v);
    }
    if (group.size() < 2) return;
    std::vector<double> w(g.num_edges());
    for (EdgeId e = 0; e < g.num_edges(); ++e) w[e] = inst.weight(e, level);
    trees[level] = steiner_2approx(g, group, w);
  });
  std::vector<Level> rates(g.num_edges(), 0);
  for (Level level = 1; level <= k; ++level) {
    for (EdgeId e : trees[level]) rates[e] = std::max(rates[e], level);
  }
  PstRunReport report;
  report.solver = "krho";
  report.solution = remove_cycles(inst, rates);
  return report;
}

PstRunReport best_of(const PstInstance& inst, int threads) {
  PstRunReport runs[] = {alg1_qosmt(inst), alg2_parallel(inst, threads), k_rho_solver(inst, threads)};
  int best = -1;
  double best_weight = kInfinity;
  for (int i = 0; i < 3; ++i) {
    if (!check_feasible(inst, runs[i].solution)) continue;
    double w = solution_weight(inst, runs[i].solution);
    if (best < 0 || w < best_weight) {
      best = i;
      best_weight = w;
    }
  }
  if (best < 0) throw std::runtime_error("best_of: no feasible solution");
  PstRunReport out = std::move(runs[best]);
  out.solver = "best:" + out.solver;
  return out;
}

}  // namespace prio
