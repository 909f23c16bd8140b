#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace prio {

// Vertices and edges are 0-based internally; files and reports use 1-based ids.
using Vertex = int;
using EdgeId = int;
// Priority levels are indices 1..k into the graph's level table. 0 means "absent".
using Level = int;

inline constexpr Vertex kNoVertex = -1;
inline constexpr EdgeId kNoEdge = -1;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Edge {
  Vertex u;
  Vertex v;

  Vertex other(Vertex x) const { return x == u ? v : u; }
};

struct Incidence {
  Vertex to;
  EdgeId edge;
};

class PriorityGraph {
 public:
  PriorityGraph() = default;

  /// Throws std::invalid_argument on self-loops, duplicate edges, out-of-range
  /// endpoints, k < 1, or level values that are not strictly increasing.
  /// An empty `level_values` means the integers 1..k.
  PriorityGraph(int n, std::vector<Edge> edges, int k,
                std::vector<double> level_values = {});

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int levels() const { return k_; }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  // Sorted by neighbour id.
  std::span<const Incidence> neighbors(Vertex v) const { return adjacency_[v]; }
  int degree(Vertex v) const { return static_cast<int>(adjacency_[v].size()); }

  double level_value(Level r) const { return r == 0 ? 0.0 : level_values_[r - 1]; }
  const std::vector<double>& level_values() const { return level_values_; }
  bool default_level_values() const;

  std::optional<EdgeId> find_edge(Vertex u, Vertex v) const;
  bool connected() const;

 private:
  int n_ = 0;
  int k_ = 1;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::vector<double> level_values_;
};

/// Dense (row, level) table with the implicit column w(row, 0) = 0.
class WeightTable {
 public:
  WeightTable() = default;
  WeightTable(int rows, int levels) : rows_(rows), levels_(levels), data_(static_cast<size_t>(rows) * levels, 0.0) {}

  int rows() const { return rows_; }
  int levels() const { return levels_; }

  double at(int row, Level r) const { return r == 0 ? 0.0 : data_[index(row, r)]; }
  void set(int row, Level r, double w) { data_[index(row, r)] = w; }
  std::span<const double> row(int row) const {
    return {data_.data() + static_cast<size_t>(row) * levels_, static_cast<size_t>(levels_)};
  }
  void set_row(int row, std::span<const double> values);

  bool operator==(const WeightTable&) const = default;

 private:
  size_t index(int row, Level r) const { return static_cast<size_t>(row) * levels_ + (r - 1); }

  int rows_ = 0;
  int levels_ = 0;
  std::vector<double> data_;
};

/// Source and terminal priorities shared by every instance kind.
struct Demand {
  Vertex source = 0;
  // priority[v] is v's required level, 0 for non-terminals. The source is never a terminal.
  std::vector<Level> priority;

  bool is_terminal(Vertex v) const { return v != source && priority[v] > 0; }
  std::vector<Vertex> terminals() const;
  int terminal_count() const;
};

struct PstInstance {
  PriorityGraph graph;
  Demand demand;
  WeightTable edge_weights;  // m x k

  double weight(EdgeId e, Level r) const { return edge_weights.at(e, r); }
};

struct PnwstInstance {
  PriorityGraph graph;
  Demand demand;
  WeightTable vertex_weights;  // n x k

  double weight(Vertex v, Level r) const { return vertex_weights.at(v, r); }
};

/// Edge- and vertex-weighted instance; input to the subdivision reduction.
struct CombinedInstance {
  PriorityGraph graph;
  Demand demand;
  WeightTable edge_weights;
  WeightTable vertex_weights;
};

struct EdgeRateSolution {
  std::vector<Level> rates;  // per edge, 0 = not selected

  std::vector<EdgeId> selected() const;
  bool operator==(const EdgeRateSolution&) const = default;
};

struct VertexRateSolution {
  std::vector<Level> rates;         // per vertex, 0 = not selected
  std::vector<EdgeId> tree_edges;   // sorted ascending

  bool operator==(const VertexRateSolution&) const = default;
};

struct Violation {
  std::string kind;
  std::string detail;
};

std::vector<Violation> validate_instance(const PstInstance& inst);
std::vector<Violation> validate_instance(const PnwstInstance& inst);
std::vector<Violation> validate_instance(const CombinedInstance& inst);

/// Throws std::out_of_range when the solution does not match the instance size.
double solution_weight(const PstInstance& inst, const EdgeRateSolution& sol);
double solution_weight(const PnwstInstance& inst, const VertexRateSolution& sol);
double solution_weight(const PnwstInstance& inst, std::span<const Level> vertex_rates);

struct Feasibility {
  bool ok = true;
  std::string message;
  Vertex terminal = kNoVertex;  // first failing terminal, if any

  explicit operator bool() const { return ok; }
};

Feasibility check_feasible(const PstInstance& inst, const EdgeRateSolution& sol);
Feasibility check_feasible(const PnwstInstance& inst, const VertexRateSolution& sol);

/// Minimum rates implied by the path constraints on a tree that spans the
/// source and every terminal. Edges (vertices) with no terminal beyond them get 0.
/// Throws std::invalid_argument if `tree` is not a tree or misses a terminal.
EdgeRateSolution forced_rates(const PstInstance& inst, std::span<const EdgeId> tree);
VertexRateSolution forced_rates(const PnwstInstance& inst, std::span<const EdgeId> tree);

/// Edge e = uv becomes u - x_e - v, where x_e = n + e carries e's weight table.
PnwstInstance subdivide_to_node_weighted(const CombinedInstance& inst);

CombinedInstance as_combined(const PstInstance& inst);

/// The s-rooted parent structure of an edge set that forms a tree containing `root`.
/// parent_edge[root] == kNoEdge; vertices outside the tree get kNoVertex parents.
/// Returns nullopt when the edges contain a cycle or are not connected.
struct RootedTree {
  Vertex root = 0;
  std::vector<Vertex> parent;
  std::vector<EdgeId> parent_edge;
  std::vector<Vertex> order;  // BFS order from the root

  bool contains(Vertex v) const { return v == root || parent[v] != kNoVertex; }
};

std::optional<RootedTree> root_tree(const PriorityGraph& g, std::span<const EdgeId> edges, Vertex root);

}  // namespace prio
