#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "prio/instance.hpp"

namespace prio {

struct PstRunReport {
  EdgeRateSolution solution;
  // Weight of the path that attached each terminal. Empty for the per-level solver.
  std::map<Vertex, double> connection_costs;
  // alg1: attachment sequence. alg2: empty (see parent_choice).
  std::vector<Vertex> order;
  // alg2: the higher-priority vertex each terminal connected to.
  std::map<Vertex, Vertex> parent_choice;
  std::string solver;
};

/// Sequential greedy: terminals by non-increasing priority (ties by id), each
/// joined to the grown tree by a cheapest path at its own rate.
PstRunReport alg1_qosmt(const PstInstance& inst);

/// Each terminal independently connects to its nearest vertex of strictly
/// higher effective priority, where (priority, id) breaks ties and the source
/// ranks above everything. `threads` > 1 runs the searches concurrently; the
/// result does not depend on it.
PstRunReport alg2_parallel(const PstInstance& inst, int threads = 1);

/// Keeps a maximum-rate spanning forest (ties: lighter at its rate, then
/// smaller edge id), drops everything outside the source's component and
/// replaces the rates with the forced ones. Dead branches therefore vanish.
EdgeRateSolution remove_cycles(const PstInstance& inst, std::span<const Level> rates);

/// MST-of-metric-closure Steiner tree with single-rate edge weights.
/// Returns the selected edge ids in ascending order.
std::vector<EdgeId> steiner_2approx(const PriorityGraph& g, std::span<const Vertex> terminals,
                                    std::span<const double> weights);

/// One Steiner 2-approximation per priority level, merged by maximum rate.
PstRunReport k_rho_solver(const PstInstance& inst, int threads = 1);

/// Runs the three solvers and keeps the lightest feasible result.
/// The tag reads "best:<winner>"; ties favour alg1, then alg2, then krho.
PstRunReport best_of(const PstInstance& inst, int threads = 1);

int log_bound_factor(int terminal_count);  // ceil(log2 |T|) + 1

}  // namespace prio
