#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "prio/instance.hpp"

namespace prio {

/// Raised when an instance exceeds the oracle's edge budget.
class OracleTooLarge : public std::runtime_error {
 public:
  OracleTooLarge(int edges, int limit);
  int edges() const { return edges_; }
  int limit() const { return limit_; }

 private:
  int edges_;
  int limit_;
};

inline constexpr int kDefaultOracleEdgeLimit = 24;

struct OracleOptions {
  int max_edges = kDefaultOracleEdgeLimit;
};

template <class Witness>
struct OracleResult {
  double opt = kInfinity;
  Witness witness;
  long long enumerated = 0;  // complete candidate trees examined
};

struct CombinedWitness {
  std::vector<EdgeId> tree;       // sorted
  std::vector<Level> edge_rates;  // forced, per edge
  std::vector<Level> vertex_rates;  // forced, per vertex; the source carries the top level
};

OracleResult<EdgeRateSolution> exact_pst(const PstInstance& inst, const OracleOptions& options = {});
OracleResult<VertexRateSolution> exact_pnwst(const PnwstInstance& inst, const OracleOptions& options = {});
OracleResult<CombinedWitness> exact_combined(const CombinedInstance& inst, const OracleOptions& options = {});

/// Minimum-weight tree spanning `terminals` under single-rate edge weights.
OracleResult<std::vector<EdgeId>> exact_steiner(const PriorityGraph& g, std::span<const Vertex> terminals,
                                                std::span<const double> weights,
                                                const OracleOptions& options = {});

/// Total weight of a combined solution.
double combined_weight(const CombinedInstance& inst, const CombinedWitness& w);

}  // namespace prio
