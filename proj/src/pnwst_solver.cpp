#include "prio/pnwst_solver.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "prio/detail/union_find.hpp"

namespace prio {

namespace {

template <class T>
std::vector<T> sorted_union(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

template <class T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Scan-time candidate; the full MergeCandidate is rebuilt for the winner only.
struct Key {
  double gamma = kInfinity;
  int h = 0;
  Vertex center = kNoVertex;
  Vertex root = kNoVertex;
  Level rate = 0;
  int root_tree = -1;
  double cost = kInfinity;
};

// Strict total order on candidates; the smaller one wins.
bool better(const Key& a, const Key& b, bool prefer_larger_h) {
  if (b.root_tree < 0) return true;
  if (a.gamma != b.gamma) return a.gamma < b.gamma;
  if (a.h != b.h) return prefer_larger_h ? a.h > b.h : a.h < b.h;
  return std::tie(a.center, a.root, a.rate) < std::tie(b.center, b.root, b.rate);
}

double center_cost(const PnwstInstance& inst, Vertex v, Level b, ChargeMode mode, std::span<const Level> rates) {
  if (mode == ChargeMode::Full) return inst.weight(v, b);
  return std::max(0.0, inst.weight(v, b) - inst.weight(v, rates[v]));
}

}  // namespace

Level root_priority(const PnwstInstance& inst, Vertex root) {
  return root == inst.demand.source ? inst.graph.levels() : inst.demand.priority[root];
}

RateForest initial_forest(const PnwstInstance& inst) {
  const auto& d = inst.demand;
  RateForest state;
  state.rates.assign(inst.graph.num_vertices(), 0);
  for (Vertex v = 0; v < inst.graph.num_vertices(); ++v) {
    if (v != d.source && !d.is_terminal(v)) continue;
    state.rates[v] = root_priority(inst, v);
    state.trees.push_back({v, {v}, {v}, {}});
  }
  return state;
}

MergeCandidate minimize_gamma(const RateForest& state, const PnwstInstance& inst, const PnwstOptions& options) {
  const int forest = static_cast<int>(state.trees.size());
  if (forest < 2) throw std::invalid_argument("minimize_gamma: need at least two trees");
  const int n = inst.graph.num_vertices();
  const std::span<const Level> rates(state.rates);
  const int threads = std::max(1, options.threads);

  std::vector<Level> prio(forest);
  for (int i = 0; i < forest; ++i) prio[i] = root_priority(inst, state.trees[i].root);

  // searches[i][b] holds sigma_b(root_i, .) for b = 1..P(root_i).
  std::vector<std::vector<PathResult>> searches(forest);
  auto run_searches = [&](int i) {
    searches[i].resize(prio[i] + 1);
    for (Level b = 1; b <= prio[i]; ++b)
      searches[i][b] = node_rate_search(inst, state.trees[i].root, b, options.charge, rates);
  };

  // For each center, all trees ordered by (sigma_{P(r_j)}(v, r_j), root id).
  std::vector<std::vector<int>> by_distance(n);
  auto sort_center = [&](Vertex v) {
    auto& order = by_distance[v];
    order.resize(forest);
    for (int j = 0; j < forest; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      double da = searches[a][prio[a]].dist[v], db = searches[b][prio[b]].dist[v];
      if (da != db) return da < db;
      return state.trees[a].root < state.trees[b].root;
    });
  };

  auto scan_root_tree = [&](int i, Key& best) {
    const Vertex r = state.trees[i].root;
    for (Vertex v = 0; v < n; ++v) {
      for (Level b = 1; b <= prio[i]; ++b) {
        double to_center = searches[i][b].dist[v];
        if (to_center == kInfinity) continue;
        const double base = to_center + center_cost(inst, v, b, options.charge, rates);
        double prefix = 0.0;
        int taken = 0;
        for (int j : by_distance[v]) {
          if (j == i || prio[j] > b) continue;
          double leg = searches[j][prio[j]].dist[v];
          if (leg == kInfinity) break;
          prefix += leg;
          ++taken;
          Key c{(base + prefix) / (taken + 1), taken + 1, v, r, b, i, base + prefix};
          if (better(c, best, options.prefer_larger_h)) best = c;
        }
      }
    }
  };

  auto parallel = [&](int count, auto body) {
    int workers = std::min(threads, count);
    if (workers <= 1) {
      for (int i = 0; i < count; ++i) body(i);
      return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        for (int i = t; i < count; i += workers) body(i);
      });
    }
    for (auto& th : pool) th.join();
  };

  parallel(forest, run_searches);
  parallel(n, sort_center);

  std::vector<Key> local(forest);
  parallel(forest, [&](int i) { scan_root_tree(i, local[i]); });
  Key win;
  for (const Key& c : local) {
    if (c.root_tree >= 0 && better(c, win, options.prefer_larger_h)) win = c;
  }
  if (win.root_tree < 0 || win.gamma == kInfinity) throw std::runtime_error("minimize_gamma: no finite candidate");

  MergeCandidate best;
  best.root_tree = win.root_tree;
  best.root = win.root;
  best.center = win.center;
  best.rate = win.rate;
  best.cost = win.cost;
  best.gamma = win.gamma;
  const int want = win.h - 1;
  for (int j : by_distance[best.center]) {
    if (static_cast<int>(best.subset.size()) == want) break;
    if (j == best.root_tree || prio[j] > best.rate) continue;
    best.subset.push_back(j);
  }
  const PathResult& rs = searches[best.root_tree][best.rate];
  best.root_path = rs.path_to(best.center);
  best.root_path_edges = rs.edges_to(best.center);
  for (int j : best.subset) {
    const PathResult& leg = searches[j][prio[j]];
    auto path = leg.path_to(best.center);
    auto edges = leg.edges_to(best.center);
    std::reverse(path.begin(), path.end());
    std::reverse(edges.begin(), edges.end());
    best.leg_paths.push_back(std::move(path));
    best.leg_path_edges.push_back(std::move(edges));
  }
  return best;
}

double apply_merge(RateForest& state, const MergeCandidate& cand, const PnwstInstance& inst) {
  std::vector<Level> before = state.rates;
  auto raise = [&](Vertex x, Level r) { state.rates[x] = std::max(state.rates[x], r); };
  for (Vertex x : cand.root_path) raise(x, cand.rate);
  raise(cand.center, cand.rate);
  for (size_t j = 0; j < cand.subset.size(); ++j) {
    Level p = root_priority(inst, state.trees[cand.subset[j]].root);
    for (Vertex x : cand.leg_paths[j]) raise(x, p);
  }
  double delta = 0.0;
  for (Vertex x = 0; x < inst.graph.num_vertices(); ++x) {
    if (state.rates[x] != before[x]) delta += inst.weight(x, state.rates[x]) - inst.weight(x, before[x]);
  }

  RateTreeState merged = state.trees[cand.root_tree];
  std::vector<Vertex> path_vertices(cand.root_path.begin(), cand.root_path.end());
  std::vector<EdgeId> path_edges(cand.root_path_edges.begin(), cand.root_path_edges.end());
  for (size_t j = 0; j < cand.subset.size(); ++j) {
    const RateTreeState& other = state.trees[cand.subset[j]];
    merged.members = sorted_union(merged.members, other.members);
    merged.vertices = sorted_union(merged.vertices, other.vertices);
    merged.edges = sorted_union(merged.edges, other.edges);
    path_vertices.insert(path_vertices.end(), cand.leg_paths[j].begin(), cand.leg_paths[j].end());
    path_edges.insert(path_edges.end(), cand.leg_path_edges[j].begin(), cand.leg_path_edges[j].end());
  }
  merged.vertices = sorted_union(merged.vertices, sorted_unique(std::move(path_vertices)));
  merged.edges = sorted_union(merged.edges, sorted_unique(std::move(path_edges)));

  std::vector<char> drop(state.trees.size(), 0);
  for (int j : cand.subset) drop[j] = 1;
  std::vector<RateTreeState> next;
  next.reserve(state.trees.size() - cand.subset.size());
  for (size_t i = 0; i < state.trees.size(); ++i) {
    if (static_cast<int>(i) == cand.root_tree) {
      next.push_back(std::move(merged));
    } else if (!drop[i]) {
      next.push_back(std::move(state.trees[i]));
    }
  }
  state.trees = std::move(next);
  ++state.iteration;
  return delta;
}

std::vector<EdgeId> extract_tree(const RateTreeState& tree, std::span<const Level> rates, const PriorityGraph& g) {
  std::vector<EdgeId> order = tree.edges;
  auto key = [&](EdgeId e) { return std::min(rates[g.edge(e).u], rates[g.edge(e).v]); };
  std::sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
    if (key(a) != key(b)) return key(a) > key(b);
    return a < b;
  });
  detail::UnionFind uf(g.num_vertices());
  std::vector<EdgeId> out;
  for (EdgeId e : order) {
    if (uf.unite(g.edge(e).u, g.edge(e).v)) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool dominates_rate_tree(const RateTreeState& tree, const RateForest& state, const PnwstInstance& inst) {
  auto edges = extract_tree(tree, state.rates, inst.graph);
  auto rooted = root_tree(inst.graph, edges, tree.root);
  if (!rooted) return false;
  std::vector<Level> need(inst.graph.num_vertices(), 0);
  for (Vertex m : tree.members) {
    if (!rooted->contains(m)) return false;
    need[m] = root_priority(inst, m);
  }
  for (auto it = rooted->order.rbegin(); it != rooted->order.rend(); ++it) {
    Vertex x = *it;
    if (need[x] > state.rates[x]) return false;
    if (x != rooted->root) need[rooted->parent[x]] = std::max(need[rooted->parent[x]], need[x]);
  }
  return true;
}

PnwstRunReport alg3_pnwst(const PnwstInstance& inst, const PnwstOptions& options) {
  RateForest state = initial_forest(inst);
  PnwstRunReport report;
  while (state.trees.size() > 1) {
    const int forest = static_cast<int>(state.trees.size());
    MergeCandidate cand = minimize_gamma(state, inst, options);
    IterationRecord rec{cand.gamma, cand.h(), forest, 0.0, cand.root, cand.center, cand.rate};
    rec.delta_cost = apply_merge(state, cand, inst);
    report.iterations.push_back(rec);
    if (options.check_invariants) {
      for (const auto& t : state.trees) {
        if (!dominates_rate_tree(t, state, inst))
          throw std::logic_error("alg3_pnwst: tree rooted at " + std::to_string(t.root + 1) + " lost the rate-tree property");
      }
    }
  }
  report.raw_rates = state.rates;
  auto edges = extract_tree(state.trees.front(), state.rates, inst.graph);
  report.solution = forced_rates(inst, edges);
  if (options.charge == ChargeMode::Residual) report.solver = "pnwst-residual";
  return report;
}

}  // namespace prio
