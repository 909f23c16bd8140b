#pragma once

#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "prio/instance.hpp"

namespace fx {

using prio::Level;
using prio::Vertex;

struct WEdge {
  Vertex u, v;
  std::vector<double> w;
};

inline prio::Demand demand(int n, Vertex s, const std::vector<std::pair<Vertex, Level>>& terms) {
  prio::Demand d;
  d.source = s;
  d.priority.assign(n, 0);
  for (auto [v, p] : terms) d.priority[v] = p;
  return d;
}

inline prio::PstInstance pst(int n, int k, Vertex s, const std::vector<std::pair<Vertex, Level>>& terms,
                             const std::vector<WEdge>& edges) {
  std::vector<prio::Edge> es;
  for (const auto& e : edges) es.push_back({e.u, e.v});
  prio::PstInstance inst{prio::PriorityGraph(n, es, k), demand(n, s, terms),
                         prio::WeightTable(static_cast<int>(edges.size()), k)};
  for (size_t i = 0; i < edges.size(); ++i) inst.edge_weights.set_row(static_cast<int>(i), edges[i].w);
  return inst;
}

inline prio::PnwstInstance pnwst(int n, int k, Vertex s, const std::vector<std::pair<Vertex, Level>>& terms,
                                 const std::vector<prio::Edge>& edges,
                                 const std::map<Vertex, std::vector<double>>& weights) {
  prio::PnwstInstance inst{prio::PriorityGraph(n, edges, k), demand(n, s, terms), prio::WeightTable(n, k)};
  for (const auto& [v, row] : weights) inst.vertex_weights.set_row(v, row);
  return inst;
}

inline prio::EdgeRateSolution edge_rates(const prio::PstInstance& inst, const std::vector<Level>& rates) {
  prio::EdgeRateSolution sol;
  sol.rates = rates;
  sol.rates.resize(inst.graph.num_edges(), 0);
  return sol;
}

}  // namespace fx
