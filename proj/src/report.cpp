#include "prio/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace prio {

double round_sig(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

double bound_factor(const std::string& solver, int terminal_count, int levels) {
  if (solver == "alg1" || solver == "alg2") return log_bound_factor(terminal_count);
  if (solver == "krho") return 2.0 * levels;
  if (solver.rfind("best:", 0) == 0) return std::min<double>(log_bound_factor(terminal_count), 2.0 * levels);
  if (solver.rfind("pnwst", 0) == 0) return 2.0 * std::log(terminal_count + 1.0) + 2.0;
  return kInfinity;
}

namespace {

Json instance_digest(const char* kind, const PriorityGraph& g, const Demand& d) {
  Json j;
  j["kind"] = kind;
  j["n"] = g.num_vertices();
  j["m"] = g.num_edges();
  j["k"] = g.levels();
  j["terminals"] = d.terminal_count();
  return j;
}

void add_oracle(Json& j, double weight, const std::string& solver, int terminals, int levels, const ReportExtras& extras) {
  if (!extras.opt) return;
  double opt = *extras.opt;
  j["opt"] = round_sig(opt);
  if (opt > 0.0) {
    j["ratio"] = round_sig(weight / opt);
  } else {
    j["ratio"] = weight == 0.0 ? Json(1.0) : Json(nullptr);
  }
  j["bound"] = round_sig(bound_factor(solver, terminals, levels) * opt);
}

}  // namespace

Json make_report(const PstInstance& inst, const PstRunReport& run, const ReportExtras& extras) {
  const auto& g = inst.graph;
  Json j;
  j["schema"] = kReportSchema;
  j["instance"] = instance_digest("PST", g, inst.demand);
  j["solver"] = run.solver;
  const double weight = solution_weight(inst, run.solution);
  j["weight"] = round_sig(weight);
  auto feasible = check_feasible(inst, run.solution);
  j["feasible"] = feasible.ok;
  if (!feasible.ok) j["violation"] = feasible.message;
  Json rates = Json::array();
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (run.solution.rates[e] == 0) continue;
    rates.push_back({{"edge", e + 1}, {"u", g.edge(e).u + 1}, {"v", g.edge(e).v + 1}, {"rate", run.solution.rates[e]}});
  }
  j["rates"] = std::move(rates);
  if (!run.connection_costs.empty()) {
    Json costs = Json::array();
    auto emit = [&](Vertex t) {
      Json c{{"terminal", t + 1}, {"cost", round_sig(run.connection_costs.at(t))}};
      if (auto it = run.parent_choice.find(t); it != run.parent_choice.end()) c["parent"] = it->second + 1;
      costs.push_back(std::move(c));
    };
    if (!run.order.empty()) {
      for (Vertex t : run.order) emit(t);
    } else {
      for (const auto& [t, cost] : run.connection_costs) emit(t);
    }
    j["connection_costs"] = std::move(costs);
  }
  add_oracle(j, weight, run.solver, inst.demand.terminal_count(), g.levels(), extras);
  if (extras.time_ms) j["time_ms"] = round_sig(*extras.time_ms);
  return j;
}

Json make_report(const PnwstInstance& inst, const PnwstRunReport& run, const ReportExtras& extras) {
  const auto& g = inst.graph;
  Json j;
  j["schema"] = kReportSchema;
  j["instance"] = instance_digest("PNWST", g, inst.demand);
  j["solver"] = run.solver;
  const double weight = solution_weight(inst, run.solution);
  j["weight"] = round_sig(weight);
  auto feasible = check_feasible(inst, run.solution);
  j["feasible"] = feasible.ok;
  if (!feasible.ok) j["violation"] = feasible.message;
  Json rates = Json::array();
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (run.solution.rates[v] > 0) rates.push_back({{"vertex", v + 1}, {"rate", run.solution.rates[v]}});
  }
  j["rates"] = std::move(rates);
  Json tree = Json::array();
  for (EdgeId e : run.solution.tree_edges) tree.push_back({g.edge(e).u + 1, g.edge(e).v + 1});
  j["tree"] = std::move(tree);
  Json iters = Json::array();
  for (const auto& it : run.iterations) {
    iters.push_back({{"gamma", round_sig(it.gamma)},
                     {"h", it.h},
                     {"forest", it.forest_size},
                     {"delta_cost", round_sig(it.delta_cost)},
                     {"root", it.root + 1},
                     {"center", it.center + 1},
                     {"rate", it.rate}});
  }
  j["iterations"] = std::move(iters);
  add_oracle(j, weight, run.solver, inst.demand.terminal_count(), g.levels(), extras);
  if (extras.time_ms) j["time_ms"] = round_sig(*extras.time_ms);
  return j;
}

std::string dump_report(const Json& report) { return report.dump(2) + "\n"; }

std::string csv_header() { return "instance,solver,weight,opt,ratio,bound,time_ms"; }

std::string csv_row(const BenchRow& row) {
  auto num = [](double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::string(buf);
  };
  std::ostringstream os;
  os << row.instance << ',' << row.solver << ',' << num(row.weight) << ',';
  if (row.opt) {
    os << num(*row.opt) << ',';
    os << (*row.opt > 0.0 ? num(row.weight / *row.opt) : (row.weight == 0.0 ? "1" : "")) << ',';
    os << num(row.bound_factor * *row.opt);
  } else {
    os << ",,";
  }
  os << ',' << num(row.time_ms);
  return os.str();
}

}  // namespace prio
