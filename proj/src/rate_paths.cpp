#include "prio/rate_paths.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <utility>

namespace prio {

std::vector<Vertex> PathResult::path_to(Vertex target) const {
  std::vector<Vertex> path;
  if (!reached(target)) return path;
  for (Vertex x = target; x != kNoVertex; x = parent[x]) path.push_back(x);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<EdgeId> PathResult::edges_to(Vertex target) const {
  std::vector<EdgeId> edges;
  if (!reached(target)) return edges;
  for (Vertex x = target; parent[x] != kNoVertex; x = parent[x]) edges.push_back(parent_edge[x]);
  std::reverse(edges.begin(), edges.end());
  return edges;
}

PathResult rate_search(const PriorityGraph& g, std::span<const Vertex> sources,
                       const std::function<double(EdgeId)>& edge_cost,
                       const std::function<double(Vertex)>& vertex_cost, const StopPredicate& stop) {
  const int n = g.num_vertices();
  PathResult res;
  res.dist.assign(n, kInfinity);
  res.parent.assign(n, kNoVertex);
  res.parent_edge.assign(n, kNoEdge);

  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  std::vector<char> is_source(n, 0), settled(n, 0);
  for (Vertex s : sources) {
    is_source[s] = 1;
    if (res.dist[s] != 0.0) {
      res.dist[s] = 0.0;
      heap.push({0.0, s});
    }
  }
  while (!heap.empty()) {
    auto [d, x] = heap.top();
    heap.pop();
    if (settled[x] || d > res.dist[x]) continue;
    settled[x] = 1;
    if (stop && stop(x)) {
      res.stopped_at = x;
      break;
    }
    double leave = is_source[x] ? 0.0 : vertex_cost(x);
    for (const Incidence& inc : g.neighbors(x)) {
      if (settled[inc.to]) continue;
      double nd = d + leave + edge_cost(inc.edge);
      if (nd < res.dist[inc.to]) {
        res.dist[inc.to] = nd;
        res.parent[inc.to] = x;
        res.parent_edge[inc.to] = inc.edge;
        heap.push({nd, inc.to});
      }
    }
  }
  return res;
}

PathResult edge_rate_search(const PstInstance& inst, std::span<const Vertex> sources, Level b,
                            const StopPredicate& stop) {
  if (b < 1 || b > inst.graph.levels()) throw std::invalid_argument("edge_rate_search: invalid level");
  if (sources.empty()) throw std::invalid_argument("edge_rate_search: empty source set");
  auto res = rate_search(
      inst.graph, sources, [&](EdgeId e) { return inst.weight(e, b); }, [](Vertex) { return 0.0; }, stop);
  res.rate = b;
  return res;
}

PathResult node_rate_search(const PnwstInstance& inst, Vertex source, Level b, ChargeMode mode,
                            std::span<const Level> current) {
  if (b < 1 || b > inst.graph.levels()) throw std::invalid_argument("node_rate_search: invalid level");
  std::function<double(Vertex)> cost;
  if (mode == ChargeMode::Full) {
    cost = [&](Vertex y) { return inst.weight(y, b); };
  } else {
    if (static_cast<int>(current.size()) != inst.graph.num_vertices())
      throw std::invalid_argument("node_rate_search: residual mode needs current rates");
    cost = [&](Vertex y) { return std::max(0.0, inst.weight(y, b) - inst.weight(y, current[y])); };
  }
  Vertex src[] = {source};
  auto res = rate_search(inst.graph, src, [](EdgeId) { return 0.0; }, cost);
  res.rate = b;
  return res;
}

}  // namespace prio
