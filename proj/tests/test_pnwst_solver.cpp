#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "prio/generators.hpp"
#include "prio/pnwst_solver.hpp"
#include "support/brute.hpp"
#include "support/fixtures.hpp"

using namespace prio;

namespace {

double harmonic(int n) {
  double h = 0;
  for (int i = 1; i <= n; ++i) h += 1.0 / i;
  return h;
}

// Smallest gamma over every (root tree, center, level, subset of eligible
// trees), with sigma from exhaustive simple paths.
double brute_min_gamma(const RateForest& state, const PnwstInstance& inst) {
  const int f = static_cast<int>(state.trees.size());
  const int n = inst.graph.num_vertices();
  auto sigma = [&](Vertex a, Vertex b, Level r) {
    if (a == b) return 0.0;
    return brute::cheapest_simple_path(
        inst.graph, a, b, [](EdgeId) { return 0.0; }, [&](Vertex x) { return inst.weight(x, r); });
  };
  double best = kInfinity;
  for (int i = 0; i < f; ++i) {
    Vertex r = state.trees[i].root;
    for (Vertex v = 0; v < n; ++v) {
      for (Level b = 1; b <= root_priority(inst, r); ++b) {
        double base = sigma(r, v, b) + inst.weight(v, b);
        std::vector<int> eligible;
        std::vector<double> leg;
        for (int j = 0; j < f; ++j) {
          Vertex rj = state.trees[j].root;
          if (j == i || root_priority(inst, rj) > b) continue;
          eligible.push_back(j);
          leg.push_back(sigma(v, rj, root_priority(inst, rj)));
        }
        for (unsigned mask = 1; mask < (1u << eligible.size()); ++mask) {
          double cost = base;
          int h = 1;
          for (size_t j = 0; j < eligible.size(); ++j) {
            if (mask >> j & 1) {
              cost += leg[j];
              ++h;
            }
          }
          best = std::min(best, cost / h);
        }
      }
    }
  }
  return best;
}

}  // namespace

TEST(Forest, StartsWithSingletons) {
  auto inst = gen_tightness_pnwst(3);
  auto state = initial_forest(inst);
  ASSERT_EQ(state.trees.size(), 4u);
  for (size_t i = 0; i < state.trees.size(); ++i) {
    EXPECT_EQ(state.trees[i].root, static_cast<Vertex>(i));
    EXPECT_EQ(state.trees[i].members, std::vector<Vertex>{static_cast<Vertex>(i)});
    EXPECT_TRUE(state.trees[i].edges.empty());
  }
  EXPECT_EQ(state.rates[3], 1);  // source at the top level
  EXPECT_EQ(state.rates[4], 0);
}

TEST(Tightness, ThreeTerminals) {
  auto inst = gen_tightness_pnwst(3);
  auto run = alg3_pnwst(inst);
  EXPECT_NEAR(solution_weight(inst, run.solution), 13.0 / 6.0, 1e-12);
  EXPECT_TRUE(check_feasible(inst, run.solution));
  ASSERT_EQ(run.iterations.size(), 3u);
  // Each round ties the hub with the cheapest top vertex.
  EXPECT_NEAR(run.iterations[0].gamma, 1.0 / 4.0, 1e-12);
  EXPECT_NEAR(run.iterations[1].gamma, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(run.iterations[2].gamma, 1.0 / 2.0, 1e-12);
  for (const auto& it : run.iterations) EXPECT_EQ(it.h, 2);
}

TEST(Tightness, WholeFamily) {
  for (int t = 2; t <= 10; ++t) {
    auto inst = gen_tightness_pnwst(t);
    auto run = alg3_pnwst(inst);
    EXPECT_NEAR(solution_weight(inst, run.solution), 2.0 * (harmonic(t + 1) - 1.0), 1e-9) << "|T| = " << t;
  }
}

TEST(Gamma, MatchesExhaustiveCandidates) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    RandomSpec spec{7, 0.45, 2, 0.5, seed};
    auto inst = gen_random_pnwst(spec);
    auto state = initial_forest(inst);
    while (state.trees.size() > 1) {
      auto cand = minimize_gamma(state, inst);
      EXPECT_NEAR(cand.gamma, brute_min_gamma(state, inst), 1e-9) << "seed " << seed;
      EXPECT_NEAR(cand.gamma * cand.h(), cand.cost, 1e-9);
      apply_merge(state, cand, inst);
    }
  }
}

TEST(Merge, DeltaIsTheWeightIncrease) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RandomSpec spec{10, 0.35, 3, 0.5, seed};
    auto inst = gen_random_pnwst(spec);
    auto state = initial_forest(inst);
    while (state.trees.size() > 1) {
      double before = solution_weight(inst, state.rates);
      const size_t f = state.trees.size();
      auto cand = minimize_gamma(state, inst);
      double delta = apply_merge(state, cand, inst);
      EXPECT_NEAR(solution_weight(inst, state.rates) - before, delta, 1e-9);
      EXPECT_EQ(state.trees.size(), f - cand.subset.size());
      EXPECT_TRUE(std::is_sorted(state.trees.begin(), state.trees.end(),
                                 [](const auto& a, const auto& b) { return a.root < b.root; }));
      for (const auto& tree : state.trees) EXPECT_TRUE(dominates_rate_tree(tree, state, inst));
    }
    ASSERT_EQ(state.trees.front().root, inst.demand.source);
  }
}

TEST(Run, TotalDeltaEqualsRawWeightAndBoundsFinal) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    RandomSpec spec{12, 0.3, 3, 0.5, seed};
    auto inst = gen_random_pnwst(spec);
    PnwstOptions opts;
    opts.check_invariants = true;
    auto run = alg3_pnwst(inst, opts);
    double total = 0;
    for (const auto& it : run.iterations) total += it.delta_cost;
    EXPECT_NEAR(total, solution_weight(inst, run.raw_rates), 1e-9);
    EXPECT_LE(solution_weight(inst, run.solution), total + 1e-9);
    EXPECT_TRUE(check_feasible(inst, run.solution)) << "seed " << seed;
  }
}

TEST(Run, ForestShrinksEachRound) {
  RandomSpec spec{15, 0.3, 3, 0.6, 5};
  auto inst = gen_random_pnwst(spec);
  auto run = alg3_pnwst(inst);
  int expected = inst.demand.terminal_count() + 1;
  for (const auto& it : run.iterations) {
    EXPECT_EQ(it.forest_size, expected);
    EXPECT_GE(it.h, 2);
    expected -= it.h - 1;
  }
  EXPECT_EQ(expected, 1);
}

TEST(Run, ThreadsDoNotChangeTheResult) {
  RandomSpec spec{40, 0.15, 3, 0.4, 9};
  auto inst = gen_random_pnwst(spec);
  auto base = alg3_pnwst(inst);
  for (int threads : {2, 4, 7}) {
    PnwstOptions opts;
    opts.threads = threads;
    auto other = alg3_pnwst(inst, opts);
    EXPECT_EQ(other.solution, base.solution);
    ASSERT_EQ(other.iterations.size(), base.iterations.size());
    for (size_t i = 0; i < base.iterations.size(); ++i) {
      EXPECT_EQ(other.iterations[i].gamma, base.iterations[i].gamma);
      EXPECT_EQ(other.iterations[i].center, base.iterations[i].center);
    }
  }
}

TEST(Run, VariantsStayFeasible) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RandomSpec spec{10, 0.35, 3, 0.5, seed};
    auto inst = gen_random_pnwst(spec);
    PnwstOptions larger;
    larger.prefer_larger_h = true;
    PnwstOptions residual;
    residual.charge = ChargeMode::Residual;
    auto a = alg3_pnwst(inst, larger);
    auto b = alg3_pnwst(inst, residual);
    EXPECT_TRUE(check_feasible(inst, a.solution));
    EXPECT_TRUE(check_feasible(inst, b.solution));
    EXPECT_EQ(b.solver, "pnwst-residual");
  }
}

TEST(Run, MergeBoundOnSmallInstances) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    RandomSpec spec{7, 0.45, 2, 0.6, seed};
    auto inst = gen_random_pnwst(spec);
    if (inst.graph.num_edges() > 16) continue;
    double opt = brute::opt_pnwst(inst);
    auto run = alg3_pnwst(inst);
    EXPECT_GE(solution_weight(inst, run.solution), opt);
    for (const auto& it : run.iterations) EXPECT_LE(it.delta_cost * it.forest_size, it.h * opt + 1e-9);
  }
}

TEST(Extract, PrefersHighRateEdges) {
  // Square 0-1-2-3-0 where vertex 3 is low rate.
  PriorityGraph g(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, 2);
  RateTreeState tree{0, {0, 2}, {0, 1, 2, 3}, {0, 1, 2, 3}};
  std::vector<Level> rates{2, 2, 2, 1};
  EXPECT_EQ(extract_tree(tree, rates, g), (std::vector<EdgeId>{0, 1, 2}));
}

TEST(Run, SingleTreeNeedsNoIterations) {
  auto inst = fx::pnwst(2, 2, 0, {}, {{0, 1}}, {{1, {1, 1}}});
  auto run = alg3_pnwst(inst);
  EXPECT_TRUE(run.iterations.empty());
  EXPECT_EQ(solution_weight(inst, run.solution), 0.0);
  EXPECT_TRUE(check_feasible(inst, run.solution));
}
