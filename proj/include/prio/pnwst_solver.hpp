#pragma once

#include <string>
#include <vector>

#include "prio/instance.hpp"
#include "prio/rate_paths.hpp"

namespace prio {

/// One member of the working set. Trees may share non-root vertices, and the
/// edge set is the union of every path used to build the tree, so it can hold
/// cycles until the final extraction.
struct RateTreeState {
  Vertex root = kNoVertex;
  std::vector<Vertex> members;   // sources/terminals merged into this tree, sorted
  std::vector<Vertex> vertices;  // sorted
  std::vector<EdgeId> edges;     // sorted
};

struct RateForest {
  std::vector<RateTreeState> trees;  // ordered by root id
  std::vector<Level> rates;          // current vertex rates
  int iteration = 0;
};

struct MergeCandidate {
  int root_tree = -1;  // index into RateForest::trees
  Vertex root = kNoVertex;
  Vertex center = kNoVertex;
  Level rate = 0;               // b
  std::vector<int> subset;      // indices of the other merged trees, in sorted-distance order
  double cost = kInfinity;
  double gamma = kInfinity;

  // Filled for the returned winner: root->center path, then center->root_j per subset entry.
  std::vector<Vertex> root_path;
  std::vector<EdgeId> root_path_edges;
  std::vector<std::vector<Vertex>> leg_paths;
  std::vector<std::vector<EdgeId>> leg_path_edges;

  int h() const { return static_cast<int>(subset.size()) + 1; }
};

struct PnwstOptions {
  ChargeMode charge = ChargeMode::Full;
  // Among equal gamma, prefer merging more trees instead of fewer.
  bool prefer_larger_h = false;
  int threads = 1;
  // Re-verify the rate-tree property of every tree after each merge.
  bool check_invariants = false;
};

struct IterationRecord {
  double gamma = 0.0;
  int h = 0;
  int forest_size = 0;  // |F_i| before the merge
  double delta_cost = 0.0;
  Vertex root = kNoVertex;
  Vertex center = kNoVertex;
  Level rate = 0;
};

struct PnwstRunReport {
  VertexRateSolution solution;
  std::vector<IterationRecord> iterations;
  // Rates at termination, before canonicalisation. Their weight equals the sum of delta costs.
  std::vector<Level> raw_rates;
  std::string solver = "pnwst";
};

/// Priority of a tree root; the source counts as the top level.
Level root_priority(const PnwstInstance& inst, Vertex root);

RateForest initial_forest(const PnwstInstance& inst);

/// Global gamma minimiser over (root tree, center, level, sorted prefix).
/// Ties: smaller h (larger with prefer_larger_h), then smaller center id,
/// smaller root id, smaller level.
MergeCandidate minimize_gamma(const RateForest& state, const PnwstInstance& inst, const PnwstOptions& options = {});

/// Upgrades rates along the winner's paths and replaces the merged trees.
/// Returns the weight increase.
double apply_merge(RateForest& state, const MergeCandidate& cand, const PnwstInstance& inst);

/// True when the tree's members can be served by a rate tree rooted at its
/// root whose rates never exceed the current ones.
bool dominates_rate_tree(const RateTreeState& tree, const RateForest& state, const PnwstInstance& inst);

/// Maximum-bottleneck spanning tree of the union edges (key: smaller endpoint rate).
std::vector<EdgeId> extract_tree(const RateTreeState& tree, std::span<const Level> rates, const PriorityGraph& g);

PnwstRunReport alg3_pnwst(const PnwstInstance& inst, const PnwstOptions& options = {});

}  // namespace prio
