#include "prio/exact.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace prio {

OracleTooLarge::OracleTooLarge(int edges, int limit)
    : std::runtime_error("instance has " + std::to_string(edges) + " edges; the exact oracle accepts at most " +
                         std::to_string(limit)),
      edges_(edges),
      limit_(limit) {}

namespace {

using EdgeCost = std::function<double(EdgeId, Level)>;
using VertexCost = std::function<double(Vertex, Level)>;

// Enumerates every subtree containing the root exactly once by branching on
// the smallest undecided frontier edge: take it, or forbid it for good.
class SubtreeSearch {
 public:
  SubtreeSearch(const PriorityGraph& g, Vertex root, Level root_level, std::vector<Level> priority,
                EdgeCost edge_cost, VertexCost vertex_cost)
      : g_(g),
        root_(root),
        root_level_(root_level),
        priority_(std::move(priority)),
        edge_cost_(std::move(edge_cost)),
        vertex_cost_(std::move(vertex_cost)),
        in_tree_(g.num_vertices(), 0),
        children_(g.num_vertices(), 0),
        parent_(g.num_vertices(), kNoVertex),
        parent_edge_(g.num_vertices(), kNoEdge),
        forbidden_(g.num_edges(), 0),
        need_(g.num_vertices(), 0) {
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      if (v != root && priority_[v] > 0) required_.push_back(v);
    }
    in_tree_[root] = 1;
    added_.push_back(root);
  }

  void run() { recurse(); }

  double best() const { return best_; }
  const std::vector<EdgeId>& best_tree() const { return best_tree_; }
  long long enumerated() const { return enumerated_; }

 private:
  double partial_weight() {
    for (Vertex v : added_) need_[v] = v == root_ ? root_level_ : priority_[v];
    for (auto it = added_.rbegin(); it != added_.rend(); ++it) {
      Vertex v = *it;
      if (v != root_) need_[parent_[v]] = std::max(need_[parent_[v]], need_[v]);
    }
    double w = vertex_cost_(root_, root_level_);
    for (Vertex v : added_) {
      if (v == root_) continue;
      w += edge_cost_(parent_edge_[v], need_[v]) + vertex_cost_(v, need_[v]);
    }
    return w;
  }

  bool complete() const {
    for (Vertex t : required_) {
      if (!in_tree_[t]) return false;
    }
    return true;
  }

  bool required_reachable() {
    std::vector<char> seen(in_tree_);
    std::vector<Vertex> stack(added_);
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      for (const Incidence& inc : g_.neighbors(x)) {
        if (forbidden_[inc.edge] || seen[inc.to]) continue;
        seen[inc.to] = 1;
        stack.push_back(inc.to);
      }
    }
    for (Vertex t : required_) {
      if (!seen[t]) return false;
    }
    return true;
  }

  // A childless non-terminal that can no longer grow is a dead leaf; the
  // same tree without it is enumerated in the branch that forbade its edge.
  bool has_dead_leaf() const {
    for (Vertex v : added_) {
      if (v == root_ || priority_[v] > 0 || children_[v] > 0) continue;
      bool can_grow = false;
      for (const Incidence& inc : g_.neighbors(v)) {
        if (!forbidden_[inc.edge] && !in_tree_[inc.to]) {
          can_grow = true;
          break;
        }
      }
      if (!can_grow) return true;
    }
    return false;
  }

  EdgeId next_frontier_edge() const {
    for (EdgeId e = 0; e < g_.num_edges(); ++e) {
      if (forbidden_[e]) continue;
      const Edge& ed = g_.edge(e);
      if (in_tree_[ed.u] != in_tree_[ed.v]) return e;
    }
    return kNoEdge;
  }

  void recurse() {
    if (has_dead_leaf()) return;
    double w = partial_weight();
    bool done = complete();
    if (done) ++enumerated_;
    if (w >= best_) return;
    if (done) {
      best_ = w;
      best_tree_.clear();
      for (Vertex v : added_) {
        if (v != root_ && need_[v] > 0) best_tree_.push_back(parent_edge_[v]);
      }
      std::sort(best_tree_.begin(), best_tree_.end());
      return;
    }
    if (!required_reachable()) return;
    EdgeId e = next_frontier_edge();
    if (e == kNoEdge) return;
    const Edge& ed = g_.edge(e);
    Vertex inside = in_tree_[ed.u] ? ed.u : ed.v;
    Vertex outside = ed.other(inside);

    in_tree_[outside] = 1;
    parent_[outside] = inside;
    parent_edge_[outside] = e;
    ++children_[inside];
    added_.push_back(outside);
    recurse();
    added_.pop_back();
    --children_[inside];
    parent_[outside] = kNoVertex;
    parent_edge_[outside] = kNoEdge;
    in_tree_[outside] = 0;

    forbidden_[e] = 1;
    recurse();
    forbidden_[e] = 0;
  }

  const PriorityGraph& g_;
  Vertex root_;
  Level root_level_;
  std::vector<Level> priority_;
  EdgeCost edge_cost_;
  VertexCost vertex_cost_;
  std::vector<Vertex> required_;

  std::vector<char> in_tree_;
  std::vector<int> children_;
  std::vector<Vertex> parent_;
  std::vector<EdgeId> parent_edge_;
  std::vector<char> forbidden_;
  std::vector<Vertex> added_;
  std::vector<Level> need_;

  double best_ = kInfinity;
  std::vector<EdgeId> best_tree_;
  long long enumerated_ = 0;
};

void guard(const PriorityGraph& g, const OracleOptions& options) {
  if (g.num_edges() > options.max_edges) throw OracleTooLarge(g.num_edges(), options.max_edges);
}

std::vector<Level> terminal_priorities(const Demand& d) {
  std::vector<Level> p(d.priority.size(), 0);
  for (Vertex t : d.terminals()) p[t] = d.priority[t];
  return p;
}

std::vector<EdgeId> search_tree(const PriorityGraph& g, const Demand& d, EdgeCost ec, VertexCost vc,
                                long long& enumerated) {
  SubtreeSearch search(g, d.source, g.levels(), terminal_priorities(d), std::move(ec), std::move(vc));
  search.run();
  enumerated = search.enumerated();
  if (search.best() == kInfinity) throw std::runtime_error("exact oracle: terminals are not connected to the source");
  return search.best_tree();
}

}  // namespace

OracleResult<EdgeRateSolution> exact_pst(const PstInstance& inst, const OracleOptions& options) {
  guard(inst.graph, options);
  OracleResult<EdgeRateSolution> out;
  auto tree = search_tree(
      inst.graph, inst.demand, [&](EdgeId e, Level r) { return inst.weight(e, r); },
      [](Vertex, Level) { return 0.0; }, out.enumerated);
  out.witness = forced_rates(inst, tree);
  out.opt = solution_weight(inst, out.witness);
  return out;
}

OracleResult<VertexRateSolution> exact_pnwst(const PnwstInstance& inst, const OracleOptions& options) {
  guard(inst.graph, options);
  OracleResult<VertexRateSolution> out;
  auto tree = search_tree(
      inst.graph, inst.demand, [](EdgeId, Level) { return 0.0; },
      [&](Vertex v, Level r) { return inst.weight(v, r); }, out.enumerated);
  out.witness = forced_rates(inst, tree);
  out.opt = solution_weight(inst, out.witness);
  return out;
}

double combined_weight(const CombinedInstance& inst, const CombinedWitness& w) {
  double total = 0.0;
  for (EdgeId e = 0; e < inst.graph.num_edges(); ++e) total += inst.edge_weights.at(e, w.edge_rates[e]);
  for (Vertex v = 0; v < inst.graph.num_vertices(); ++v) total += inst.vertex_weights.at(v, w.vertex_rates[v]);
  return total;
}

OracleResult<CombinedWitness> exact_combined(const CombinedInstance& inst, const OracleOptions& options) {
  guard(inst.graph, options);
  OracleResult<CombinedWitness> out;
  auto tree = search_tree(
      inst.graph, inst.demand, [&](EdgeId e, Level r) { return inst.edge_weights.at(e, r); },
      [&](Vertex v, Level r) { return inst.vertex_weights.at(v, r); }, out.enumerated);

  const auto& g = inst.graph;
  auto rooted = root_tree(g, tree, inst.demand.source);
  std::vector<Level> need(g.num_vertices(), 0);
  for (Vertex t : inst.demand.terminals()) need[t] = inst.demand.priority[t];
  need[inst.demand.source] = g.levels();
  for (auto it = rooted->order.rbegin(); it != rooted->order.rend(); ++it) {
    Vertex v = *it;
    if (v != rooted->root) need[rooted->parent[v]] = std::max(need[rooted->parent[v]], need[v]);
  }
  out.witness.tree = tree;
  out.witness.edge_rates.assign(g.num_edges(), 0);
  out.witness.vertex_rates.assign(g.num_vertices(), 0);
  for (Vertex v : rooted->order) {
    out.witness.vertex_rates[v] = need[v];
    if (v != rooted->root) out.witness.edge_rates[rooted->parent_edge[v]] = need[v];
  }
  out.witness.vertex_rates[inst.demand.source] = g.levels();
  out.opt = combined_weight(inst, out.witness);
  return out;
}

OracleResult<std::vector<EdgeId>> exact_steiner(const PriorityGraph& g, std::span<const Vertex> terminals,
                                                std::span<const double> weights, const OracleOptions& options) {
  guard(g, options);
  if (terminals.empty()) throw std::invalid_argument("exact_steiner: empty terminal set");
  if (static_cast<int>(weights.size()) != g.num_edges()) throw std::invalid_argument("exact_steiner: weight size");
  std::vector<Level> priority(g.num_vertices(), 0);
  for (Vertex t : terminals) priority[t] = 1;
  Vertex root = *std::min_element(terminals.begin(), terminals.end());
  priority[root] = 0;
  SubtreeSearch search(
      g, root, 1, priority, [&](EdgeId e, Level r) { return r == 0 ? 0.0 : weights[e]; },
      [](Vertex, Level) { return 0.0; });
  search.run();
  if (search.best() == kInfinity) throw std::runtime_error("exact_steiner: terminals are disconnected");
  OracleResult<std::vector<EdgeId>> out;
  out.witness = search.best_tree();
  out.enumerated = search.enumerated();
  out.opt = 0.0;
  for (EdgeId e : out.witness) out.opt += weights[e];
  return out;
}

}  // namespace prio
