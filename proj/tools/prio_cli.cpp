// prio: solve, generate, check and benchmark priority Steiner tree instances.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prio/exact.hpp"
#include "prio/generators.hpp"
#include "prio/instance_io.hpp"
#include "prio/pnwst_solver.hpp"
#include "prio/pst_solvers.hpp"
#include "prio/report.hpp"
#include "prio/spider.hpp"

namespace {

using namespace prio;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;

// Thrown to leave a subcommand with a specific exit code.
struct Exit {
  int code;
  std::string message;
};

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

template <class Inst>
void require_valid(const Inst& inst) {
  auto problems = validate_instance(inst);
  if (problems.empty()) return;
  std::ostringstream os;
  os << "invalid instance:";
  for (const auto& v : problems) os << "\n  " << v.kind << ": " << v.detail;
  throw Exit{kExitUsage, os.str()};
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Exit{kExitUsage, "cannot write " + path};
  out << text;
}

PstRunReport run_pst(const PstInstance& inst, const std::string& solver, int threads) {
  if (solver == "alg1") return alg1_qosmt(inst);
  if (solver == "alg2") return alg2_parallel(inst, threads);
  if (solver == "krho") return k_rho_solver(inst, threads);
  if (solver == "best") return best_of(inst, threads);
  throw Exit{kExitUsage, "solver '" + solver + "' does not accept PST instances"};
}

PnwstRunReport run_pnwst(const PnwstInstance& inst, const std::string& solver, int threads) {
  if (solver != "pnwst" && solver != "pnwst-residual")
    throw Exit{kExitUsage, "solver '" + solver + "' does not accept PNWST instances"};
  PnwstOptions opts;
  opts.threads = threads;
  if (solver == "pnwst-residual") opts.charge = ChargeMode::Residual;
  return alg3_pnwst(inst, opts);
}

std::string text_report(const Json& j) {
  std::ostringstream os;
  os << "solver   " << j["solver"].get<std::string>() << "\n";
  os << "weight   " << j["weight"].dump() << "\n";
  os << "feasible " << (j["feasible"].get<bool>() ? "yes" : "no") << "\n";
  if (j.contains("violation")) os << "problem  " << j["violation"].get<std::string>() << "\n";
  if (j.contains("opt")) {
    os << "opt      " << j["opt"].dump() << "\n";
    os << "ratio    " << j["ratio"].dump() << "\n";
    os << "bound    " << j["bound"].dump() << "\n";
  }
  if (j.contains("time_ms")) os << "time_ms  " << j["time_ms"].dump() << "\n";
  for (const auto& r : j["rates"]) {
    if (r.contains("edge")) {
      os << "rate edge " << r["edge"].dump() << " (" << r["u"].dump() << "," << r["v"].dump() << ") "
         << r["rate"].dump() << "\n";
    } else {
      os << "rate vertex " << r["vertex"].dump() << " " << r["rate"].dump() << "\n";
    }
  }
  return os.str();
}

struct SolveArgs {
  std::string file;
  std::string solver = "best";
  bool exact = false;
  bool json = false;
  bool timing = false;
  int threads = 1;
  int max_edges = kDefaultOracleEdgeLimit;
  std::string write_solution;
  std::string out;
};

int cmd_solve(const SolveArgs& a) {
  AnyInstance any = read_instance_file(a.file);
  ReportExtras extras;
  Json report;
  std::string solution_text;
  OracleOptions oracle{a.max_edges};
  if (auto* pst = std::get_if<PstInstance>(&any)) {
    require_valid(*pst);
    auto start = Clock::now();
    auto run = run_pst(*pst, a.solver, a.threads);
    if (a.timing) extras.time_ms = elapsed_ms(start);
    if (a.exact) extras.opt = exact_pst(*pst, oracle).opt;
    report = make_report(*pst, run, extras);
    std::ostringstream os;
    write_solution(os, run.solution);
    solution_text = os.str();
  } else if (auto* pn = std::get_if<PnwstInstance>(&any)) {
    require_valid(*pn);
    auto start = Clock::now();
    auto run = run_pnwst(*pn, a.solver, a.threads);
    if (a.timing) extras.time_ms = elapsed_ms(start);
    if (a.exact) extras.opt = exact_pnwst(*pn, oracle).opt;
    report = make_report(*pn, run, extras);
    std::ostringstream os;
    write_solution(os, run.solution, pn->graph);
    solution_text = os.str();
  } else {
    throw Exit{kExitUsage, "solve does not accept COMBINED instances; use exact"};
  }
  if (!a.write_solution.empty()) emit(solution_text, a.write_solution);
  emit(a.json ? dump_report(report) : text_report(report), a.out);
  return report["feasible"].get<bool>() ? kExitOk : kExitInfeasible;
}

struct GenArgs {
  std::string family;
  int n = 8;
  int k = 2;
  int t = 3;
  double density = 0.4;
  double terminals = 0.5;
  double members = 0.3;
  std::uint64_t seed = 1;
  int max_weight = 10;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  RandomSpec spec;
  spec.n = a.n;
  spec.k = a.k;
  spec.density = a.density;
  spec.terminal_fraction = a.terminals;
  spec.seed = a.seed;
  spec.max_weight = a.max_weight;
  std::ostringstream os;
  auto tag = [&](const std::string& family) {
    std::ostringstream c;
    c << "gen " << family << " n=" << a.n << " k=" << a.k << " density=" << a.density
      << " terminals=" << a.terminals << " seed=" << a.seed << " max-weight=" << a.max_weight;
    return std::vector<std::string>{c.str()};
  };
  if (a.family == "tightness") {
    write_instance(os, gen_tightness_pnwst(a.t), {"gen tightness t=" + std::to_string(a.t)});
  } else if (a.family == "random-pst") {
    write_instance(os, gen_random_pst(spec), tag(a.family));
  } else if (a.family == "random-pnwst") {
    write_instance(os, gen_random_pnwst(spec), tag(a.family));
  } else if (a.family == "proportional") {
    write_instance(os, gen_proportional_pst(spec), tag(a.family));
  } else if (a.family == "combined") {
    write_instance(os, gen_random_combined(spec), tag(a.family));
  } else if (a.family == "rate-tree") {
    auto sample = gen_random_rate_tree(a.n, a.k, a.members, a.seed);
    write_rate_tree(os, sample.tree, sample.members);
  } else {
    throw Exit{kExitUsage, "unknown family '" + a.family + "'"};
  }
  emit(os.str(), a.out);
  return kExitOk;
}

struct ExactArgs {
  std::string file;
  bool json = false;
  int max_edges = kDefaultOracleEdgeLimit;
};

int cmd_exact(const ExactArgs& a) {
  AnyInstance any = read_instance_file(a.file);
  OracleOptions oracle{a.max_edges};
  Json j;
  j["schema"] = kReportSchema;
  std::string witness;
  if (auto* pst = std::get_if<PstInstance>(&any)) {
    require_valid(*pst);
    auto res = exact_pst(*pst, oracle);
    j["kind"] = "PST";
    j["opt"] = round_sig(res.opt);
    j["enumerated"] = res.enumerated;
    std::ostringstream os;
    write_solution(os, res.witness);
    witness = os.str();
  } else if (auto* pn = std::get_if<PnwstInstance>(&any)) {
    require_valid(*pn);
    auto res = exact_pnwst(*pn, oracle);
    j["kind"] = "PNWST";
    j["opt"] = round_sig(res.opt);
    j["enumerated"] = res.enumerated;
    std::ostringstream os;
    write_solution(os, res.witness, pn->graph);
    witness = os.str();
  } else {
    auto& c = std::get<CombinedInstance>(any);
    require_valid(c);
    auto res = exact_combined(c, oracle);
    j["kind"] = "COMBINED";
    j["opt"] = round_sig(res.opt);
    j["enumerated"] = res.enumerated;
    std::ostringstream os;
    for (EdgeId e : res.witness.tree) os << "tree " << c.graph.edge(e).u + 1 << ' ' << c.graph.edge(e).v + 1 << "\n";
    witness = os.str();
  }
  if (a.json) {
    std::cout << dump_report(j);
  } else {
    std::cout << "opt " << j["opt"].dump() << "\n" << "enumerated " << j["enumerated"].dump() << "\n" << witness;
  }
  return kExitOk;
}

int cmd_check(const std::string& file, const std::string& solution) {
  AnyInstance any = read_instance_file(file);
  std::ifstream in(solution);
  if (!in) throw Exit{kExitUsage, "cannot open " + solution};
  Feasibility f;
  double weight = 0.0;
  if (auto* pst = std::get_if<PstInstance>(&any)) {
    auto sol = read_edge_solution(in, *pst);
    f = check_feasible(*pst, sol);
    weight = solution_weight(*pst, sol);
  } else if (auto* pn = std::get_if<PnwstInstance>(&any)) {
    auto sol = read_vertex_solution(in, *pn);
    f = check_feasible(*pn, sol);
    weight = solution_weight(*pn, sol);
  } else {
    throw Exit{kExitUsage, "check does not accept COMBINED instances"};
  }
  if (f.ok) {
    std::cout << "ok weight " << format_number(round_sig(weight)) << "\n";
    return kExitOk;
  }
  std::cout << "infeasible: " << f.message << "\n";
  return kExitInfeasible;
}

std::vector<Vertex> parse_members(const std::string& text, int n) {
  std::vector<Vertex> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    int v = 0;
    try {
      size_t used = 0;
      v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Exit{kExitUsage, "bad member id '" + item + "'"};
    }
    if (v < 1 || v > n) throw Exit{kExitUsage, "member id " + item + " out of range"};
    out.push_back(v - 1);
  }
  return out;
}

int cmd_decompose(const std::string& file, const std::string& members_text, bool optimize) {
  std::ifstream in(file);
  if (!in) throw Exit{kExitUsage, "cannot open " + file};
  RateTreeFile rt = read_rate_tree(in);
  std::vector<Vertex> members = rt.members;
  if (!members_text.empty()) members = parse_members(members_text, rt.tree.capacity());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  RateTree tree = rt.tree;
  if (optimize) tree = m_optimize(tree, members);
  auto d = decompose_rate_spiders(tree, members);
  std::cout << render_decomposition(d);
  auto problems = verify_decomposition(tree, d);
  for (const auto& p : problems) std::cout << "problem: " << p << "\n";
  return problems.empty() ? kExitOk : kExitInfeasible;
}

struct BenchArgs {
  std::string family = "tightness";
  std::vector<std::string> solvers;
  int from = 2;
  int to = 8;
  int seeds = 1;
  int k = 2;
  double density = 0.4;
  double terminals = 0.5;
  std::uint64_t seed = 1;
  bool exact = false;
  int max_edges = kDefaultOracleEdgeLimit;
  int threads = 1;
  std::string csv;
};

int cmd_bench(const BenchArgs& a) {
  std::vector<std::string> solvers = a.solvers;
  const bool node_family = a.family == "tightness" || a.family == "random-pnwst";
  if (a.family != "tightness" && a.family != "random-pnwst" && a.family != "random-pst" && a.family != "proportional")
    throw Exit{kExitUsage, "unknown family '" + a.family + "'"};
  if (solvers.empty()) solvers = node_family ? std::vector<std::string>{"pnwst"} : std::vector<std::string>{"alg1", "alg2", "krho", "best"};
  std::ostringstream os;
  os << csv_header() << "\n";
  OracleOptions oracle{a.max_edges};
  const int seeds = a.family == "tightness" ? 1 : a.seeds;
  for (int size = a.from; size <= a.to; ++size) {
    for (int s = 0; s < seeds; ++s) {
      RandomSpec spec;
      spec.n = size;
      spec.k = a.k;
      spec.density = a.density;
      spec.terminal_fraction = a.terminals;
      spec.seed = a.seed + static_cast<std::uint64_t>(s);
      std::string name = a.family == "tightness" ? "tightness-" + std::to_string(size)
                                                  : a.family + "-n" + std::to_string(size) + "-s" + std::to_string(spec.seed);
      if (node_family) {
        PnwstInstance inst = a.family == "tightness" ? gen_tightness_pnwst(size) : gen_random_pnwst(spec);
        std::optional<double> opt;
        if (a.exact) opt = exact_pnwst(inst, oracle).opt;
        for (const auto& solver : solvers) {
          auto start = Clock::now();
          auto run = run_pnwst(inst, solver, a.threads);
          double ms = elapsed_ms(start);
          os << csv_row({name, run.solver, solution_weight(inst, run.solution), opt,
                         bound_factor(run.solver, inst.demand.terminal_count(), inst.graph.levels()), ms})
             << "\n";
        }
      } else {
        PstInstance inst = a.family == "proportional" ? gen_proportional_pst(spec) : gen_random_pst(spec);
        std::optional<double> opt;
        if (a.exact) opt = exact_pst(inst, oracle).opt;
        for (const auto& solver : solvers) {
          auto start = Clock::now();
          auto run = run_pst(inst, solver, a.threads);
          double ms = elapsed_ms(start);
          os << csv_row({name, run.solver, solution_weight(inst, run.solution), opt,
                         bound_factor(run.solver, inst.demand.terminal_count(), inst.graph.levels()), ms})
             << "\n";
        }
      }
    }
  }
  emit(os.str(), a.csv);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Priority Steiner tree solvers, oracles and generators"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Run a solver on an instance file");
  s->add_option("file", solve.file, "Instance file")->required()->check(CLI::ExistingFile);
  s->add_option("--solver", solve.solver, "alg1 | alg2 | krho | best | pnwst | pnwst-residual")
      ->check(CLI::IsMember({"alg1", "alg2", "krho", "best", "pnwst", "pnwst-residual"}));
  s->add_flag("--exact", solve.exact, "Also run the exact oracle and report the ratio");
  s->add_flag("--json", solve.json, "Emit a JSON report");
  s->add_flag("--timing", solve.timing, "Include wall time in the report");
  s->add_option("--threads", solve.threads, "Worker threads")->check(CLI::Range(1, 256));
  s->add_option("--max-edges", solve.max_edges, "Oracle edge limit");
  s->add_option("--write-solution", solve.write_solution, "Write the solution file here");
  s->add_option("-o,--out", solve.out, "Report destination (default stdout)");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate an instance");
  g->add_option("family", gen.family, "tightness | random-pst | random-pnwst | proportional | combined | rate-tree")
      ->required();
  g->add_option("--n", gen.n, "Vertex count")->check(CLI::Range(2, 1000000));
  g->add_option("--k", gen.k, "Priority levels")->check(CLI::Range(1, 1000));
  g->add_option("--t", gen.t, "Terminal count for the tightness family")->check(CLI::Range(2, 100000));
  g->add_option("--density", gen.density, "Edge probability");
  g->add_option("--terminals", gen.terminals, "Fraction of non-source vertices that are terminals");
  g->add_option("--members", gen.members, "Member probability for rate trees");
  g->add_option("--seed", gen.seed, "PRNG seed");
  g->add_option("--max-weight", gen.max_weight, "Largest integer weight");
  g->add_option("-o,--out", gen.out, "Output file (default stdout)");

  ExactArgs exact;
  auto* e = app.add_subcommand("exact", "Compute the exact optimum by enumeration");
  e->add_option("file", exact.file, "Instance file")->required()->check(CLI::ExistingFile);
  e->add_flag("--json", exact.json, "Emit JSON");
  e->add_option("--max-edges", exact.max_edges, "Edge limit");

  std::string check_file, check_solution;
  auto* c = app.add_subcommand("check", "Check a solution file against an instance");
  c->add_option("file", check_file, "Instance file")->required()->check(CLI::ExistingFile);
  c->add_option("solution", check_solution, "Solution file")->required()->check(CLI::ExistingFile);

  std::string dec_file, dec_members;
  bool dec_optimize = false;
  auto* d = app.add_subcommand("decompose", "Print a rate spider decomposition");
  d->add_option("file", dec_file, "Rate tree file")->required()->check(CLI::ExistingFile);
  d->add_option("--members", dec_members, "Comma-separated member ids (overrides member lines)");
  d->add_flag("--optimize", dec_optimize, "Apply M-optimization first");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run solvers over a generated family and print CSV");
  b->add_option("family", bench.family, "tightness | random-pst | random-pnwst | proportional")->required();
  b->add_option("--solver", bench.solvers, "Solvers to run (repeatable)");
  b->add_option("--from", bench.from, "Smallest size (|T| for tightness, n otherwise)");
  b->add_option("--to", bench.to, "Largest size");
  b->add_option("--seeds", bench.seeds, "Instances per size")->check(CLI::Range(1, 100000));
  b->add_option("--seed", bench.seed, "First seed");
  b->add_option("--k", bench.k, "Priority levels")->check(CLI::Range(1, 1000));
  b->add_option("--density", bench.density, "Edge probability");
  b->add_option("--terminals", bench.terminals, "Terminal fraction");
  b->add_flag("--exact", bench.exact, "Run the exact oracle for ratios");
  b->add_option("--max-edges", bench.max_edges, "Oracle edge limit");
  b->add_option("--threads", bench.threads, "Worker threads")->check(CLI::Range(1, 256));
  b->add_option("--csv", bench.csv, "CSV destination (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (s->parsed()) return cmd_solve(solve);
    if (g->parsed()) return cmd_gen(gen);
    if (e->parsed()) return cmd_exact(exact);
    if (c->parsed()) return cmd_check(check_file, check_solution);
    if (d->parsed()) return cmd_decompose(dec_file, dec_members, dec_optimize);
    if (b->parsed()) return cmd_bench(bench);
  } catch (const Exit& x) {
    if (!x.message.empty()) std::cerr << "prio: " << x.message << "\n";
    return x.code;
  } catch (const ParseError& err) {
    std::cerr << "prio: " << err.what() << "\n";
    return kExitUsage;
  } catch (const OracleTooLarge& err) {
    std::cerr << "prio: " << err.what() << "\n";
    return kExitGuard;
  } catch (const std::invalid_argument& err) {
    std::cerr << "prio: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "prio: " << err.what() << "\n";
    return kExitInfeasible;
  }
  return kExitUsage;
}
