#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "prio/exact.hpp"
#include "prio/generators.hpp"
#include "prio/pst_solvers.hpp"
#include "support/brute.hpp"
#include "support/fixtures.hpp"

using namespace prio;

TEST(LogBound, Values) {
  EXPECT_EQ(log_bound_factor(0), 1);
  EXPECT_EQ(log_bound_factor(1), 1);
  EXPECT_EQ(log_bound_factor(2), 2);
  EXPECT_EQ(log_bound_factor(3), 3);
  EXPECT_EQ(log_bound_factor(4), 3);
  EXPECT_EQ(log_bound_factor(5), 4);
  EXPECT_EQ(log_bound_factor(500), 10);
}

TEST(Alg1, SingleEdge) {
  auto inst = fx::pst(2, 2, 0, {{1, 2}}, {{0, 1, {1, 3}}});
  auto run = alg1_qosmt(inst);
  EXPECT_EQ(solution_weight(inst, run.solution), 3.0);
  EXPECT_EQ(run.connection_costs.at(1), 3.0);
  EXPECT_EQ(run.solver, "alg1");
}

TEST(Alg1, TakesTheCheaperDetour) {
  // s=0, a=1, t=2: direct s-t costs 3, s-a-t costs 2.
  auto inst = fx::pst(3, 1, 0, {{2, 1}}, {{0, 1, {1}}, {1, 2, {1}}, {0, 2, {3}}});
  auto run = alg1_qosmt(inst);
  EXPECT_EQ(solution_weight(inst, run.solution), 2.0);
  EXPECT_EQ(run.solution.rates, (std::vector<Level>{1, 1, 0}));
}

TEST(Alg1, OrderIsPriorityThenId) {
  auto inst = fx::pst(5, 3, 0, {{1, 1}, {2, 3}, {3, 1}, {4, 3}},
                      {{0, 1, {1, 1, 1}}, {0, 2, {1, 1, 1}}, {0, 3, {1, 1, 1}}, {0, 4, {1, 1, 1}}});
  auto run = alg1_qosmt(inst);
  EXPECT_EQ(run.order, (std::vector<Vertex>{2, 4, 1, 3}));
}

TEST(Alg1, LaterTerminalsReuseTheTree) {
  // t1 (level 2) builds s-a-t1; t2 (level 1) hangs off a for free at cost 1.
  auto inst = fx::pst(4, 2, 0, {{2, 2}, {3, 1}},
                      {{0, 1, {1, 2}}, {1, 2, {1, 2}}, {1, 3, {1, 1}}, {0, 3, {5, 5}}});
  auto run = alg1_qosmt(inst);
  EXPECT_EQ(run.connection_costs.at(2), 4.0);
  EXPECT_EQ(run.connection_costs.at(3), 1.0);
  EXPECT_EQ(solution_weight(inst, run.solution), 5.0);
}

TEST(Alg2, ConnectsToNearestHigherPriority) {
  // t=3 (level 1) is next to t=2 (level 2); t=2 must go to s.
  auto inst = fx::pst(4, 2, 0, {{2, 2}, {3, 1}},
                      {{0, 1, {1, 2}}, {1, 2, {1, 2}}, {2, 3, {1, 1}}, {0, 3, {1, 9}}});
  auto run = alg2_parallel(inst);
  EXPECT_EQ(run.parent_choice.at(2), 0);
  EXPECT_EQ(run.parent_choice.at(3), 0);  // cost 1 to s ties cost 1 to vertex 2; s settles first
  EXPECT_TRUE(check_feasible(inst, run.solution));
}

TEST(Alg2, EqualPriorityUsesIds) {
  // Terminals 1 and 2 share a level; 1 may attach to 2 but not the reverse.
  auto inst = fx::pst(3, 1, 0, {{1, 1}, {2, 1}}, {{0, 2, {5}}, {1, 2, {1}}, {0, 1, {7}}});
  auto run = alg2_parallel(inst);
  EXPECT_EQ(run.parent_choice.at(1), 2);
  EXPECT_EQ(run.parent_choice.at(2), 0);
  EXPECT_EQ(solution_weight(inst, run.solution), 6.0);
}

TEST(Alg2, ThreadCountDoesNotMatter) {
  RandomSpec spec{60, 0.08, 3, 0.4, 11};
  auto inst = gen_random_pst(spec);
  auto base = alg2_parallel(inst, 1);
  for (int threads : {2, 3, 8}) {
    auto other = alg2_parallel(inst, threads);
    EXPECT_EQ(other.solution, base.solution);
    EXPECT_EQ(other.connection_costs, base.connection_costs);
    EXPECT_EQ(other.parent_choice, base.parent_choice);
  }
}

TEST(RemoveCycles, KeepsHighRateEdges) {
  // Triangle s-a-t with everything selected; t needs level 2.
  auto inst = fx::pst(3, 2, 0, {{2, 2}}, {{0, 1, {1, 2}}, {1, 2, {1, 2}}, {0, 2, {1, 3}}});
  std::vector<Level> rates{2, 2, 1};
  auto sol = remove_cycles(inst, rates);
  EXPECT_TRUE(check_feasible(inst, sol));
  EXPECT_EQ(sol.rates, (std::vector<Level>{2, 2, 0}));
}

TEST(RemoveCycles, DropsDeadBranchesAndStrayParts) {
  auto inst = fx::pst(5, 1, 0, {{1, 1}}, {{0, 1, {1}}, {0, 2, {1}}, {3, 4, {1}}, {2, 3, {1}}});
  std::vector<Level> rates{1, 1, 1, 0};
  auto sol = remove_cycles(inst, rates);
  EXPECT_EQ(sol.rates, (std::vector<Level>{1, 0, 0, 0}));
}

TEST(Steiner, TwoTerminalsIsShortestPath) {
  PriorityGraph g(4, {{0, 1}, {1, 2}, {0, 3}, {3, 2}}, 1);
  std::vector<double> w{1, 1, 1, 3};
  std::vector<Vertex> terms{0, 2};
  auto tree = steiner_2approx(g, terms, w);
  EXPECT_EQ(tree, (std::vector<EdgeId>{0, 1}));
}

TEST(Steiner, WithinTwiceTheOptimum) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    RandomSpec spec{9, 0.4, 1, 0.5, seed};
    auto inst = gen_random_pst(spec);
    std::vector<Vertex> terms = inst.demand.terminals();
    terms.push_back(inst.demand.source);
    std::vector<double> w(inst.graph.num_edges());
    for (EdgeId e = 0; e < inst.graph.num_edges(); ++e) w[e] = inst.weight(e, 1);
    auto tree = steiner_2approx(inst.graph, terms, w);
    double got = 0;
    for (EdgeId e : tree) got += w[e];
    auto opt = exact_steiner(inst.graph, terms, w, {64});
    const double t = static_cast<double>(terms.size());
    EXPECT_LE(got, 2.0 * (1.0 - 1.0 / t) * opt.opt + 1e-9) << "seed " << seed;
    EXPECT_GE(got, opt.opt);
  }
}

TEST(KRho, UnionOfLevelTrees) {
  auto inst = fx::pst(3, 2, 0, {{1, 1}, {2, 2}}, {{0, 1, {1, 1}}, {1, 2, {1, 1}}, {0, 2, {1, 1}}});
  auto run = k_rho_solver(inst);
  EXPECT_TRUE(check_feasible(inst, run.solution));
  EXPECT_EQ(run.solver, "krho");
  EXPECT_EQ(solution_weight(inst, run.solution), 2.0);
}

TEST(BestOf, PicksLightestAndTagsIt) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    RandomSpec spec{9, 0.35, 3, 0.5, seed};
    auto inst = gen_random_pst(spec);
    double w1 = solution_weight(inst, alg1_qosmt(inst).solution);
    double w2 = solution_weight(inst, alg2_parallel(inst).solution);
    double w3 = solution_weight(inst, k_rho_solver(inst).solution);
    auto best = best_of(inst);
    double wb = solution_weight(inst, best.solution);
    EXPECT_EQ(wb, std::min({w1, w2, w3}));
    std::string want = wb == w1 ? "best:alg1" : wb == w2 ? "best:alg2" : "best:krho";
    EXPECT_EQ(best.solver, want);
  }
}

// Every solver is feasible, never beats the optimum, and respects its factor.
TEST(Solvers, FeasibleAndBoundedOnSmallInstances) {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    Rng pick(seed * 7919);
    RandomSpec spec;
    spec.n = static_cast<int>(pick.uniform(3, 8));
    spec.k = static_cast<int>(pick.uniform(1, 3));
    spec.density = 0.45;
    spec.terminal_fraction = 0.6;
    spec.seed = seed;
    auto inst = gen_random_pst(spec);
    if (inst.graph.num_edges() > 16) continue;
    const double opt = brute::opt_pst(inst);
    const int t = inst.demand.terminal_count();
    for (auto run : {alg1_qosmt(inst), alg2_parallel(inst), k_rho_solver(inst), best_of(inst)}) {
      ASSERT_TRUE(check_feasible(inst, run.solution)) << run.solver << " seed " << seed;
      double w = solution_weight(inst, run.solution);
      EXPECT_GE(w, opt) << run.solver << " seed " << seed;
      double factor = run.solver == "krho" ? 2.0 * spec.k : log_bound_factor(t);
      if (run.solver.rfind("best:", 0) == 0) factor = std::min<double>(factor, 2.0 * spec.k);
      EXPECT_LE(w, factor * opt + 1e-9) << run.solver << " seed " << seed;
    }
  }
}

TEST(Solvers, NoTerminalsGivesEmptyTree) {
  auto inst = fx::pst(2, 1, 0, {}, {{0, 1, {1}}});
  EXPECT_EQ(solution_weight(inst, alg1_qosmt(inst).solution), 0.0);
  EXPECT_EQ(solution_weight(inst, alg2_parallel(inst).solution), 0.0);
  EXPECT_EQ(solution_weight(inst, k_rho_solver(inst).solution), 0.0);
}
