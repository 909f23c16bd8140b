#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "prio/instance.hpp"

namespace prio {

/// Rooted tree over a subset of 0..n-1 with a rate per vertex.
struct RateTree {
  Vertex root = 0;
  std::vector<Vertex> parent;  // kNoVertex for the root and for absent vertices
  std::vector<Level> rate;     // 0 for absent vertices

  int capacity() const { return static_cast<int>(parent.size()); }
  bool contains(Vertex v) const { return v == root || parent[v] != kNoVertex; }
  std::vector<Vertex> vertices() const;  // ascending
  std::vector<std::vector<Vertex>> children() const;
  int size() const;

  /// Builds from undirected (u, v) pairs; throws std::invalid_argument unless they form a tree containing root.
  static RateTree from_edges(int n, Vertex root, std::span<const std::pair<Vertex, Vertex>> edges,
                             std::vector<Level> rates);
};

/// Rates never increase along a root-to-vertex path, and every present vertex has rate >= 1.
bool is_rate_tree(const RateTree& t);

/// Every leaf is in M and every vertex outside M carries the largest rate of the M-vertices below it.
bool is_m_optimized(const RateTree& t, std::span<const Vertex> members);

/// Strips non-member leaves until none remain, then lowers each non-member's
/// rate to the largest member rate in its subtree. Member rates are kept.
RateTree m_optimize(const RateTree& t, std::span<const Vertex> members);

struct RateSpider {
  Vertex root = kNoVertex;
  Vertex center = kNoVertex;
  std::vector<Vertex> vertices;                    // ascending
  std::vector<Level> rates;                        // aligned with vertices
  std::vector<std::pair<Vertex, Vertex>> edges;    // (parent, child) in the source tree

  Level rate_of(Vertex v) const;
  bool contains(Vertex v) const;
};

struct SpiderDecomposition {
  std::vector<RateSpider> spiders;
  std::vector<Vertex> members;  // ascending
};

/// |S_j| + 1 for one spider: member vertices other than its root, plus one.
int spider_count(const RateSpider& x, std::span<const Vertex> members);

/// Peels spiders off an M-optimized rate tree, deepest branching vertex first.
/// Throws std::invalid_argument when the tree is not an M-optimized rate tree or |M| < 2.
SpiderDecomposition decompose_rate_spiders(const RateTree& t, std::span<const Vertex> members);

/// Empty when the spider is well formed.
std::vector<std::string> verify_spider(const RateSpider& x, std::span<const Vertex> members);

/// Checks every spider, disjointness, coverage of M, agreement with the
/// tree's edges and rates, and the counting identity.
std::vector<std::string> verify_decomposition(const RateTree& t, const SpiderDecomposition& d);

/// Indented text rendering, one spider per block. Ids are printed 1-based.
std::string render_decomposition(const SpiderDecomposition& d);

}  // namespace prio
