#include "prio/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace prio {

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("Rng::uniform: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next());
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

namespace {

void check_spec(const RandomSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("generator: n must be at least 2");
  if (spec.k < 1) throw std::invalid_argument("generator: k must be at least 1");
  if (!(spec.density > 0.0 && spec.density <= 1.0)) throw std::invalid_argument("generator: density must lie in (0, 1]");
  if (spec.terminal_fraction < 0.0 || spec.terminal_fraction > 1.0)
    throw std::invalid_argument("generator: terminal fraction must lie in [0, 1]");
  if (spec.max_weight < 1) throw std::invalid_argument("generator: max weight must be at least 1");
}

PriorityGraph random_graph(const RandomSpec& spec, Rng& rng) {
  for (int attempt = 0; attempt < spec.attempts; ++attempt) {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < spec.n; ++u) {
      for (Vertex v = u + 1; v < spec.n; ++v) {
        if (rng.bernoulli(spec.density)) edges.push_back({u, v});
      }
    }
    PriorityGraph g(spec.n, std::move(edges), spec.k);
    if (g.connected()) return g;
  }
  throw GenerationError("generator: no connected graph within " + std::to_string(spec.attempts) + " attempts");
}

void fill_monotone(WeightTable& table, int row, int k, int max_weight, Rng& rng) {
  double running = 0.0;
  for (Level r = 1; r <= k; ++r) {
    running = std::max(running, static_cast<double>(rng.uniform(1, max_weight)));
    table.set(row, r, running);
  }
}

Demand random_demand(const RandomSpec& spec, Rng& rng) {
  Demand d;
  d.source = 0;
  d.priority.assign(spec.n, 0);
  int count = std::max(1, static_cast<int>(std::lround(spec.terminal_fraction * (spec.n - 1))));
  count = std::min(count, spec.n - 1);
  std::vector<Vertex> pool(spec.n - 1);
  std::iota(pool.begin(), pool.end(), 1);
  for (int i = 0; i < count; ++i) {
    auto j = rng.uniform(i, static_cast<std::int64_t>(pool.size()) - 1);
    std::swap(pool[i], pool[j]);
    d.priority[pool[i]] = static_cast<Level>(rng.uniform(1, spec.k));
  }
  return d;
}

// Terminals are free up to their priority and the source is free everywhere.
void zero_demand_rows(WeightTable& table, const Demand& d, int k) {
  for (Level r = 1; r <= k; ++r) table.set(d.source, r, 0.0);
  for (Vertex t : d.terminals()) {
    for (Level r = 1; r <= d.priority[t]; ++r) table.set(t, r, 0.0);
  }
}

}  // namespace

PnwstInstance gen_tightness_pnwst(int terminal_count) {
  if (terminal_count < 2) throw std::invalid_argument("gen_tightness_pnwst: need at least two terminals");
  const int t = terminal_count;
  const Vertex s = t;
  const Vertex hub = t + 1;
  auto bottom = [&](int j) { return j == 0 ? s : t - j; };
  auto top = [&](int j) { return t + 1 + j; };
  const int n = 2 * t + 2;

  std::vector<Edge> edges;
  for (int j = 0; j <= t; ++j) edges.push_back({hub, bottom(j)});
  for (int j = 1; j <= t; ++j) {
    edges.push_back({bottom(j - 1), top(j)});
    edges.push_back({top(j), bottom(j)});
  }
  PnwstInstance inst{PriorityGraph(n, std::move(edges), 1), Demand{}, WeightTable(n, 1)};
  inst.demand.source = s;
  inst.demand.priority.assign(n, 0);
  for (int j = 1; j <= t; ++j) inst.demand.priority[bottom(j)] = 1;
  inst.vertex_weights.set(hub, 1, 1.0);
  for (int j = 1; j <= t; ++j) inst.vertex_weights.set(top(j), 1, 2.0 / (t + 2 - j));
  return inst;
}

PstInstance gen_random_pst(const RandomSpec& spec) {
  check_spec(spec);
  Rng rng(spec.seed);
  PstInstance inst{random_graph(spec, rng), Demand{}, WeightTable()};
  inst.edge_weights = WeightTable(inst.graph.num_edges(), spec.k);
  for (EdgeId e = 0; e < inst.graph.num_edges(); ++e) fill_monotone(inst.edge_weights, e, spec.k, spec.max_weight, rng);
  inst.demand = random_demand(spec, rng);
  return inst;
}

PnwstInstance gen_random_pnwst(const RandomSpec& spec) {
  check_spec(spec);
  Rng rng(spec.seed);
  PnwstInstance inst{random_graph(spec, rng), Demand{}, WeightTable(spec.n, spec.k)};
  for (Vertex v = 0; v < spec.n; ++v) fill_monotone(inst.vertex_weights, v, spec.k, spec.max_weight, rng);
  inst.demand = random_demand(spec, rng);
  zero_demand_rows(inst.vertex_weights, inst.demand, spec.k);
  return inst;
}

PstInstance gen_proportional_pst(const RandomSpec& spec) {
  check_spec(spec);
  Rng rng(spec.seed);
  PstInstance inst{random_graph(spec, rng), Demand{}, WeightTable()};
  inst.edge_weights = WeightTable(inst.graph.num_edges(), spec.k);
  for (EdgeId e = 0; e < inst.graph.num_edges(); ++e) {
    double base = static_cast<double>(rng.uniform(1, spec.max_weight));
    for (Level r = 1; r <= spec.k; ++r) inst.edge_weights.set(e, r, inst.graph.level_value(r) * base);
  }
  inst.demand = random_demand(spec, rng);
  return inst;
}

CombinedInstance gen_random_combined(const RandomSpec& spec) {
  check_spec(spec);
  Rng rng(spec.seed);
  CombinedInstance inst{random_graph(spec, rng), Demand{}, WeightTable(), WeightTable(spec.n, spec.k)};
  inst.edge_weights = WeightTable(inst.graph.num_edges(), spec.k);
  for (EdgeId e = 0; e < inst.graph.num_edges(); ++e) fill_monotone(inst.edge_weights, e, spec.k, spec.max_weight, rng);
  for (Vertex v = 0; v < spec.n; ++v) fill_monotone(inst.vertex_weights, v, spec.k, spec.max_weight, rng);
  inst.demand = random_demand(spec, rng);
  zero_demand_rows(inst.vertex_weights, inst.demand, spec.k);
  return inst;
}

RateTreeSample gen_random_rate_tree(int n, int k, double member_fraction, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_random_rate_tree: n must be at least 2");
  if (k < 1) throw std::invalid_argument("gen_random_rate_tree: k must be at least 1");
  Rng rng(seed);
  RateTree t;
  t.root = 0;
  t.parent.assign(n, kNoVertex);
  t.rate.assign(n, 0);
  t.rate[0] = static_cast<Level>(rng.uniform(1, k));
  for (Vertex v = 1; v < n; ++v) {
    t.parent[v] = static_cast<Vertex>(rng.uniform(0, v - 1));
    t.rate[v] = static_cast<Level>(rng.uniform(1, t.rate[t.parent[v]]));
  }
  std::vector<Vertex> members{0};
  for (Vertex v = 1; v < n; ++v) {
    if (rng.bernoulli(member_fraction)) members.push_back(v);
  }
  if (members.size() < 2) members.push_back(static_cast<Vertex>(rng.uniform(1, n - 1)));
  return {m_optimize(t, members), members};
}

}  // namespace prio
