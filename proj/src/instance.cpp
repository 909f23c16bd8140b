#include "prio/instance.hpp"

#include <algorithm>
#include <stdexcept>

namespace prio {

namespace {

std::string vid(Vertex v) { return std::to_string(v + 1); }

std::string edge_name(const PriorityGraph& g, EdgeId e) {
  return "(" + vid(g.edge(e).u) + "," + vid(g.edge(e).v) + ")";
}

void check_demand(const PriorityGraph& g, const Demand& d, std::vector<Violation>& out) {
  if (d.source < 0 || d.source >= g.num_vertices()) {
    out.push_back({"source", "source " + vid(d.source) + " out of range"});
    return;
  }
  if (static_cast<int>(d.priority.size()) != g.num_vertices()) {
    out.push_back({"terminals", "priority table has wrong size"});
    return;
  }
  if (d.priority[d.source] != 0) out.push_back({"terminals", "source is a terminal"});
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (d.priority[v] < 0 || d.priority[v] > g.levels())
      out.push_back({"terminals", "terminal " + vid(v) + " has undeclared level " + std::to_string(d.priority[v])});
  }
  if (!g.connected()) out.push_back({"connectivity", "graph is not connected"});
}

bool check_table(const WeightTable& w, int rows, int levels, const std::string& what, std::vector<Violation>& out) {
  if (w.rows() != rows || w.levels() != levels) {
    out.push_back({"weights", what + " weight table has wrong shape"});
    return false;
  }
  return true;
}

bool demand_usable(const PriorityGraph& g, const Demand& d) {
  return d.source >= 0 && d.source < g.num_vertices() && static_cast<int>(d.priority.size()) == g.num_vertices();
}

void check_vertex_weights(const PriorityGraph& g, const Demand& d, const WeightTable& w,
                          std::vector<Violation>& out) {
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    for (Level r = 1; r <= g.levels(); ++r) {
      if (!(w.at(v, r) >= 0.0) || w.at(v, r) == kInfinity) {
        out.push_back({"weights", "vertex " + vid(v) + " has invalid weight at level " + std::to_string(r)});
      } else if (w.at(v, r) < w.at(v, r - 1)) {
        out.push_back({"monotonicity", "monotonicity at vertex " + vid(v)});
        break;
      }
    }
    if (v == d.source) {
      for (Level r = 1; r <= g.levels(); ++r) {
        if (w.at(v, r) != 0.0) {
          out.push_back({"source-zero-weight", "source nonzero weight at vertex " + vid(v)});
          break;
        }
      }
    } else if (d.is_terminal(v)) {
      for (Level r = 1; r <= d.priority[v]; ++r) {
        if (w.at(v, r) != 0.0) {
          out.push_back({"terminal-zero-weight", "terminal nonzero weight at vertex " + vid(v)});
          break;
        }
      }
    }
  }
}

void check_edge_weights(const PriorityGraph& g, const WeightTable& w, std::vector<Violation>& out) {
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    for (Level r = 1; r <= g.levels(); ++r) {
      if (!(w.at(e, r) >= 0.0) || w.at(e, r) == kInfinity) {
        out.push_back({"weights", "edge " + edge_name(g, e) + " has invalid weight at level " + std::to_string(r)});
      } else if (w.at(e, r) < w.at(e, r - 1)) {
        out.push_back({"monotonicity", "monotonicity at edge " + edge_name(g, e)});
        break;
      }
    }
  }
}

// Post-order accumulation of the largest terminal priority in each subtree.
std::vector<Level> subtree_max_priority(const RootedTree& t, const Demand& d) {
  std::vector<Level> best(d.priority.size(), 0);
  for (Vertex v : t.order) best[v] = d.is_terminal(v) ? d.priority[v] : 0;
  for (auto it = t.order.rbegin(); it != t.order.rend(); ++it) {
    Vertex v = *it;
    if (v != t.root) best[t.parent[v]] = std::max(best[t.parent[v]], best[v]);
  }
  return best;
}

RootedTree spanning_tree_or_throw(const PriorityGraph& g, std::span<const EdgeId> tree, const Demand& d) {
  auto rooted = root_tree(g, tree, d.source);
  if (!rooted) throw std::invalid_argument("forced_rates: edges do not form a tree containing the source");
  for (Vertex t : d.terminals()) {
    if (!rooted->contains(t)) throw std::invalid_argument("forced_rates: terminal " + vid(t) + " missing from tree");
  }
  return *rooted;
}

}  // namespace

PriorityGraph::PriorityGraph(int n, std::vector<Edge> edges, int k, std::vector<double> level_values)
    : n_(n), k_(k), edges_(std::move(edges)), adjacency_(n), level_values_(std::move(level_values)) {
  if (n < 1) throw std::invalid_argument("graph needs at least one vertex");
  if (k < 1) throw std::invalid_argument("need at least one priority level");
  if (level_values_.empty()) {
    for (int i = 1; i <= k; ++i) level_values_.push_back(i);
  }
  if (static_cast<int>(level_values_.size()) != k) throw std::invalid_argument("level table size differs from k");
  for (int i = 1; i < k; ++i) {
    if (!(level_values_[i - 1] < level_values_[i])) throw std::invalid_argument("priority levels must be strictly increasing");
  }
  for (EdgeId e = 0; e < num_edges(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.u < 0 || ed.u >= n || ed.v < 0 || ed.v >= n) throw std::invalid_argument("edge endpoint out of range");
    if (ed.u == ed.v) throw std::invalid_argument("self-loop at vertex " + vid(ed.u));
    adjacency_[ed.u].push_back({ed.v, e});
    adjacency_[ed.v].push_back({ed.u, e});
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end(), [](const Incidence& a, const Incidence& b) { return a.to < b.to; });
    for (size_t i = 1; i < adj.size(); ++i) {
      if (adj[i].to == adj[i - 1].to) {
        const Edge& ed = edges_[adj[i].edge];
        throw std::invalid_argument("duplicate edge (" + vid(ed.u) + "," + vid(ed.v) + ")");
      }
    }
  }
}

bool PriorityGraph::default_level_values() const {
  for (int i = 0; i < k_; ++i) {
    if (level_values_[i] != i + 1) return false;
  }
  return true;
}

std::optional<EdgeId> PriorityGraph::find_edge(Vertex u, Vertex v) const {
  auto adj = neighbors(u);
  auto it = std::lower_bound(adj.begin(), adj.end(), v, [](const Incidence& a, Vertex x) { return a.to < x; });
  if (it != adj.end() && it->to == v) return it->edge;
  return std::nullopt;
}

bool PriorityGraph::connected() const {
  std::vector<char> seen(n_, 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    Vertex x = stack.back();
    stack.pop_back();
    for (const Incidence& inc : adjacency_[x]) {
      if (!seen[inc.to]) {
        seen[inc.to] = 1;
        ++count;
        stack.push_back(inc.to);
      }
    }
  }
  return count == n_;
}

void WeightTable::set_row(int row, std::span<const double> values) {
  if (static_cast<int>(values.size()) != levels_) throw std::invalid_argument("weight row has wrong length");
  std::copy(values.begin(), values.end(), data_.begin() + static_cast<std::ptrdiff_t>(row) * levels_);
}

std::vector<Vertex> Demand::terminals() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < static_cast<Vertex>(priority.size()); ++v) {
    if (is_terminal(v)) out.push_back(v);
  }
  return out;
}

int Demand::terminal_count() const {
  int c = 0;
  for (Vertex v = 0; v < static_cast<Vertex>(priority.size()); ++v) c += is_terminal(v);
  return c;
}

std::vector<EdgeId> EdgeRateSolution::selected() const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < static_cast<EdgeId>(rates.size()); ++e) {
    if (rates[e] > 0) out.push_back(e);
  }
  return out;
}

std::vector<Violation> validate_instance(const PstInstance& inst) {
  std::vector<Violation> out;
  check_demand(inst.graph, inst.demand, out);
  if (check_table(inst.edge_weights, inst.graph.num_edges(), inst.graph.levels(), "edge", out))
    check_edge_weights(inst.graph, inst.edge_weights, out);
  return out;
}

std::vector<Violation> validate_instance(const PnwstInstance& inst) {
  std::vector<Violation> out;
  check_demand(inst.graph, inst.demand, out);
  if (check_table(inst.vertex_weights, inst.graph.num_vertices(), inst.graph.levels(), "vertex", out) &&
      demand_usable(inst.graph, inst.demand))
    check_vertex_weights(inst.graph, inst.demand, inst.vertex_weights, out);
  return out;
}

std::vector<Violation> validate_instance(const CombinedInstance& inst) {
  std::vector<Violation> out;
  check_demand(inst.graph, inst.demand, out);
  if (check_table(inst.edge_weights, inst.graph.num_edges(), inst.graph.levels(), "edge", out))
    check_edge_weights(inst.graph, inst.edge_weights, out);
  if (check_table(inst.vertex_weights, inst.graph.num_vertices(), inst.graph.levels(), "vertex", out) &&
      demand_usable(inst.graph, inst.demand))
    check_vertex_weights(inst.graph, inst.demand, inst.vertex_weights, out);
  return out;
}

double solution_weight(const PstInstance& inst, const EdgeRateSolution& sol) {
  if (static_cast<int>(sol.rates.size()) != inst.graph.num_edges())
    throw std::out_of_range("solution references unknown edges");
  double total = 0.0;
  for (EdgeId e = 0; e < inst.graph.num_edges(); ++e) {
    Level r = sol.rates[e];
    if (r < 0 || r > inst.graph.levels()) throw std::out_of_range("rate out of range on edge " + edge_name(inst.graph, e));
    total += inst.weight(e, r);
  }
  return total;
}

double solution_weight(const PnwstInstance& inst, std::span<const Level> vertex_rates) {
  if (static_cast<int>(vertex_rates.size()) != inst.graph.num_vertices())
    throw std::out_of_range("solution references unknown vertices");
  double total = 0.0;
  for (Vertex v = 0; v < inst.graph.num_vertices(); ++v) {
    Level r = vertex_rates[v];
    if (r < 0 || r > inst.graph.levels()) throw std::out_of_range("rate out of range at vertex " + vid(v));
    total += inst.weight(v, r);
  }
  return total;
}

double solution_weight(const PnwstInstance& inst, const VertexRateSolution& sol) {
  return solution_weight(inst, std::span<const Level>(sol.rates));
}

namespace {

struct Exploration {
  RootedTree tree;
  bool acyclic = true;
  bool spans_all = true;  // every listed edge lies in the root's component
};

// BFS over `edges` from `root`; records the first-found parent of each reached vertex.
std::optional<Exploration> explore(const PriorityGraph& g, std::span<const EdgeId> edges, Vertex root) {
  const int n = g.num_vertices();
  std::vector<std::vector<Incidence>> adj(n);
  for (EdgeId e : edges) {
    if (e < 0 || e >= g.num_edges()) return std::nullopt;
    adj[g.edge(e).u].push_back({g.edge(e).v, e});
    adj[g.edge(e).v].push_back({g.edge(e).u, e});
  }
  Exploration ex;
  RootedTree& t = ex.tree;
  t.root = root;
  t.parent.assign(n, kNoVertex);
  t.parent_edge.assign(n, kNoEdge);
  std::vector<char> seen(n, 0);
  seen[root] = 1;
  t.order.push_back(root);
  size_t edge_ends = 0;
  for (size_t head = 0; head < t.order.size(); ++head) {
    Vertex x = t.order[head];
    edge_ends += adj[x].size();
    for (const Incidence& inc : adj[x]) {
      if (inc.edge == t.parent_edge[x]) continue;
      if (seen[inc.to]) {
        ex.acyclic = false;
        continue;
      }
      seen[inc.to] = 1;
      t.parent[inc.to] = x;
      t.parent_edge[inc.to] = inc.edge;
      t.order.push_back(inc.to);
    }
  }
  ex.spans_all = edge_ends == 2 * edges.size();
  if (ex.acyclic && ex.spans_all && t.order.size() != edges.size() + 1) ex.acyclic = false;  // repeated edge ids
  return ex;
}

}  // namespace

std::optional<RootedTree> root_tree(const PriorityGraph& g, std::span<const EdgeId> edges, Vertex root) {
  auto ex = explore(g, edges, root);
  if (!ex || !ex->acyclic || !ex->spans_all) return std::nullopt;
  return std::move(ex->tree);
}

Feasibility check_feasible(const PstInstance& inst, const EdgeRateSolution& sol) {
  const auto& g = inst.graph;
  if (static_cast<int>(sol.rates.size()) != g.num_edges()) return {false, "solution has wrong number of edges", kNoVertex};
  auto edges = sol.selected();
  auto ex = explore(g, edges, inst.demand.source);
  if (!ex) return {false, "rate map references unknown edges", kNoVertex};
  const RootedTree& tree = ex->tree;
  for (Vertex t : inst.demand.terminals()) {
    if (!tree.contains(t)) return {false, "terminal " + vid(t) + " unreachable", t};
  }
  if (!ex->acyclic) return {false, "selected edges contain a cycle", kNoVertex};
  if (!ex->spans_all) return {false, "selected edges are not connected to the source", kNoVertex};
  for (Vertex t : inst.demand.terminals()) {
    Level need = inst.demand.priority[t];
    for (Vertex x = t; x != tree.root; x = tree.parent[x]) {
      EdgeId e = tree.parent_edge[x];
      if (sol.rates[e] < need) {
        return {false, "edge " + edge_name(g, e) + " rate " + std::to_string(sol.rates[e]) + " < required " + std::to_string(need), t};
      }
    }
  }
  return {};
}

Feasibility check_feasible(const PnwstInstance& inst, const VertexRateSolution& sol) {
  const auto& g = inst.graph;
  const auto& d = inst.demand;
  if (static_cast<int>(sol.rates.size()) != g.num_vertices()) return {false, "solution has wrong number of vertices", kNoVertex};
  for (EdgeId e : sol.tree_edges) {
    if (e < 0 || e >= g.num_edges()) return {false, "tree edge out of range", kNoVertex};
    if (sol.rates[g.edge(e).u] == 0 || sol.rates[g.edge(e).v] == 0)
      return {false, "tree edge " + edge_name(g, e) + " touches an unselected vertex", kNoVertex};
  }
  if (sol.rates[d.source] == 0) return {false, "source not selected", kNoVertex};
  auto ex = explore(g, sol.tree_edges, d.source);
  if (!ex) return {false, "tree edges out of range", kNoVertex};
  const RootedTree* tree = &ex->tree;
  for (Vertex t : d.terminals()) {
    if (!tree->contains(t)) return {false, "terminal " + vid(t) + " unreachable", t};
  }
  if (!ex->acyclic) return {false, "tree edges contain a cycle", kNoVertex};
  if (!ex->spans_all) return {false, "tree edges are not connected to the source", kNoVertex};
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (sol.rates[v] > 0 && !tree->contains(v)) return {false, "selected vertex " + vid(v) + " not connected to the tree", kNoVertex};
  }
  for (Vertex t : d.terminals()) {
    Level need = d.priority[t];
    for (Vertex x = t;; x = tree->parent[x]) {
      if (sol.rates[x] < need) {
        return {false, "vertex " + vid(x) + " rate " + std::to_string(sol.rates[x]) + " < required " + std::to_string(need), t};
      }
      if (x == tree->root) break;
    }
  }
  return {};
}

EdgeRateSolution forced_rates(const PstInstance& inst, std::span<const EdgeId> tree) {
  RootedTree t = spanning_tree_or_throw(inst.graph, tree, inst.demand);
  auto best = subtree_max_priority(t, inst.demand);
  EdgeRateSolution sol;
  sol.rates.assign(inst.graph.num_edges(), 0);
  for (Vertex v : t.order) {
    if (v != t.root) sol.rates[t.parent_edge[v]] = best[v];
  }
  return sol;
}

VertexRateSolution forced_rates(const PnwstInstance& inst, std::span<const EdgeId> tree) {
  RootedTree t = spanning_tree_or_throw(inst.graph, tree, inst.demand);
  auto best = subtree_max_priority(t, inst.demand);
  VertexRateSolution sol;
  sol.rates.assign(inst.graph.num_vertices(), 0);
  for (Vertex v : t.order) sol.rates[v] = best[v];
  sol.rates[t.root] = inst.graph.levels();
  for (Vertex v : t.order) {
    if (v != t.root && sol.rates[v] > 0) sol.tree_edges.push_back(t.parent_edge[v]);
  }
  std::sort(sol.tree_edges.begin(), sol.tree_edges.end());
  return sol;
}

PnwstInstance subdivide_to_node_weighted(const CombinedInstance& inst) {
  const auto& g = inst.graph;
  const int n = g.num_vertices();
  const int m = g.num_edges();
  const int k = g.levels();
  std::vector<Edge> edges;
  edges.reserve(2 * static_cast<size_t>(m));
  for (EdgeId e = 0; e < m; ++e) {
    edges.push_back({g.edge(e).u, n + e});
    edges.push_back({n + e, g.edge(e).v});
  }
  PnwstInstance out{PriorityGraph(n + m, std::move(edges), k, g.level_values()), inst.demand, WeightTable(n + m, k)};
  out.demand.priority.resize(n + m, 0);
  for (Vertex v = 0; v < n; ++v) out.vertex_weights.set_row(v, inst.vertex_weights.row(v));
  for (EdgeId e = 0; e < m; ++e) out.vertex_weights.set_row(n + e, inst.edge_weights.row(e));
  return out;
}

CombinedInstance as_combined(const PstInstance& inst) {
  return {inst.graph, inst.demand, inst.edge_weights, WeightTable(inst.graph.num_vertices(), inst.graph.levels())};
}

}  // namespace prio
