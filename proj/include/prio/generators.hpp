#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "prio/instance.hpp"
#include "prio/spider.hpp"

namespace prio {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// std::mt19937_64 with draws that do not depend on the standard library's
/// distribution implementations, so a seed means the same instance everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  // Uniform real in [0, 1).
  double unit();
  bool bernoulli(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

struct RandomSpec {
  int n = 8;
  double density = 0.4;
  int k = 2;
  double terminal_fraction = 0.5;
  std::uint64_t seed = 1;
  int max_weight = 10;  // integer weights are drawn from [1, max_weight]
  int attempts = 1000;  // graph redraws before giving up on connectivity
};

/// Bottom row s, t_1..t_|T| (priority 1, weight 0); a weight-1 hub joined to the
/// whole row; u_j of weight 2/(|T|+2-j) joined to bottom vertices j-1 and j.
/// Ids: t_j = |T|-j, s = |T|, hub = |T|+1, u_j = |T|+1+j.
PnwstInstance gen_tightness_pnwst(int terminal_count);

PstInstance gen_random_pst(const RandomSpec& spec);
PnwstInstance gen_random_pnwst(const RandomSpec& spec);
/// w(e, r) = level_value(r) * base(e); with k = 1 it equals gen_random_pst.
PstInstance gen_proportional_pst(const RandomSpec& spec);
/// Edge and vertex weight tables; used for the subdivision cross-check.
CombinedInstance gen_random_combined(const RandomSpec& spec);

struct RateTreeSample {
  RateTree tree;  // M-optimized
  std::vector<Vertex> members;
};

/// Random recursive tree on n vertices rooted at 0, non-increasing random
/// rates in 1..k, each non-root vertex a member with the given probability
/// (at least one is forced in), then m_optimize.
RateTreeSample gen_random_rate_tree(int n, int k, double member_fraction, std::uint64_t seed);

}  // namespace prio
