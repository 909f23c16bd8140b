#pragma once

#include <functional>
#include <span>
#include <vector>

#include "prio/instance.hpp"

namespace prio {

/// Shortest-path tree from a source set under a fixed rate restriction.
/// After an early exit, only vertices settled before the stop carry final distances.
struct PathResult {
  std::vector<double> dist;        // kInfinity when unreached
  std::vector<Vertex> parent;      // kNoVertex for sources and unreached vertices
  std::vector<EdgeId> parent_edge;
  Level rate = 0;
  Vertex stopped_at = kNoVertex;   // first settled vertex matching the stop predicate

  bool reached(Vertex v) const { return dist[v] != kInfinity; }
  /// Vertices from the originating source to `target`, inclusive.
  std::vector<Vertex> path_to(Vertex target) const;
  std::vector<EdgeId> edges_to(Vertex target) const;
};

using StopPredicate = std::function<bool(Vertex)>;

/// Multi-source Dijkstra with nonnegative edge costs plus interior-vertex costs:
/// a path's length is the sum of its edge costs and the costs of every vertex
/// other than its two endpoints. Sources have distance 0. Ties are settled by
/// smaller vertex id, so the parent tree is deterministic.
PathResult rate_search(const PriorityGraph& g, std::span<const Vertex> sources,
                       const std::function<double(EdgeId)>& edge_cost,
                       const std::function<double(Vertex)>& vertex_cost,
                       const StopPredicate& stop = {});

/// sigma_b over edge weights w(., b).
PathResult edge_rate_search(const PstInstance& inst, std::span<const Vertex> sources, Level b,
                            const StopPredicate& stop = {});

enum class ChargeMode {
  Full,      // interior vertex y costs w(y, b)
  Residual,  // interior vertex y costs max(0, w(y, b) - w(y, current(y)))
};

/// sigma_b over interior vertex weights; endpoints are never charged.
/// `current` is required in residual mode and ignored otherwise.
PathResult node_rate_search(const PnwstInstance& inst, Vertex source, Level b,
                            ChargeMode mode = ChargeMode::Full,
                            std::span<const Level> current = {});

}  // namespace prio
