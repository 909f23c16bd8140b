#include <gtest/gtest.h>

#include <sstream>

#include "prio/generators.hpp"
#include "prio/instance_io.hpp"
#include "prio/report.hpp"

using namespace prio;

namespace {

int parse_error_line(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Parse, PstInstance) {
  auto any = parse_instance(
      "PST 1\n"
      "# comment\n"
      "k 2\n"
      "nodes 3\n"
      "source 1\n"
      "terminal 3 2   # trailing comment\n"
      "edge 1 2 1 2\n"
      "edge 2 3 0.5 4\n");
  auto& inst = std::get<PstInstance>(any);
  EXPECT_EQ(inst.graph.num_vertices(), 3);
  EXPECT_EQ(inst.graph.num_edges(), 2);
  EXPECT_EQ(inst.demand.source, 0);
  EXPECT_EQ(inst.demand.priority[2], 2);
  EXPECT_EQ(inst.weight(1, 1), 0.5);
  EXPECT_EQ(inst.weight(1, 2), 4.0);
}

TEST(Parse, PnwstInstance) {
  auto any = parse_instance("PNWST 1\nk 1\nnodes 3\nsource 2\nterminal 1 1\nedge 1 3\nedge 3 2\nnode 3 7\n");
  auto& inst = std::get<PnwstInstance>(any);
  EXPECT_EQ(inst.weight(2, 1), 7.0);
  EXPECT_EQ(inst.weight(0, 1), 0.0);
  EXPECT_EQ(inst.demand.source, 1);
}

TEST(Parse, LevelsLine) {
  auto any = parse_instance("PST 1\nk 2\nlevels 10 20\nnodes 2\nsource 1\nterminal 2 1\nedge 1 2 1 1\n");
  EXPECT_EQ(std::get<PstInstance>(any).graph.level_value(2), 20.0);
}

TEST(Parse, ErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line("PST 2\n"), 1);
  EXPECT_EQ(parse_error_line("FOO 1\n"), 1);
  EXPECT_EQ(parse_error_line("PST 1\nk 2\nnodes 3\nsource 1\nedge 1 2 1\n"), 5);
  EXPECT_EQ(parse_error_line("PST 1\nk 2\nnodes 3\nsource 1\nterminal 4 1\n"), 5);
  EXPECT_EQ(parse_error_line("PST 1\nk 1\nnodes 3\nsource 1\n\nterminal 2 5\n"), 6);
  EXPECT_EQ(parse_error_line("PST 1\nk 1\nnodes 3\nsource 1\nedge 1 1 1\n"), 5);
  EXPECT_EQ(parse_error_line("PST 1\nk 1\nnodes 3\nsource 1\nedge 1 2 1\nedge 2 1 1\n"), 6);
  EXPECT_EQ(parse_error_line("PST 1\nk 1\nnodes 3\nsource 1\nedge 1 2 x\n"), 5);
  EXPECT_EQ(parse_error_line("PST 1\nk 1\nnodes 3\nsource 1\nnode 2 1\n"), 5);
  EXPECT_EQ(parse_error_line("PNWST 1\nk 1\nnodes 3\nsource 1\nedge 1 2 4\n"), 5);
  EXPECT_EQ(parse_error_line("PST 1\nk 1\nnodes 3\nedge 1 2 1\n"), 4);  // missing source
  EXPECT_EQ(parse_error_line("PST 1\nk 1\nnodes 3\nsource 1\nwhat 1\n"), 5);
}

TEST(Parse, RoundTrip) {
  RandomSpec spec{9, 0.4, 3, 0.5, 21};
  auto pst = gen_random_pst(spec);
  std::ostringstream a;
  write_instance(a, pst, {"seed 21"});
  auto back = std::get<PstInstance>(parse_instance(a.str()));
  EXPECT_EQ(back.edge_weights, pst.edge_weights);
  EXPECT_EQ(back.demand.priority, pst.demand.priority);
  std::ostringstream b;
  write_instance(b, back, {"seed 21"});
  EXPECT_EQ(a.str(), b.str());

  auto fig = gen_tightness_pnwst(5);
  std::ostringstream c;
  write_instance(c, fig);
  auto fig_back = std::get<PnwstInstance>(parse_instance(c.str()));
  EXPECT_EQ(fig_back.vertex_weights, fig.vertex_weights);

  auto combined = gen_random_combined(spec);
  std::ostringstream d;
  write_instance(d, combined);
  auto combined_back = std::get<CombinedInstance>(parse_instance(d.str()));
  EXPECT_EQ(combined_back.edge_weights, combined.edge_weights);
  EXPECT_EQ(combined_back.vertex_weights, combined.vertex_weights);
}

TEST(Solutions, RoundTrip) {
  RandomSpec spec{12, 0.3, 3, 0.5, 2};
  auto pst = gen_random_pst(spec);
  auto run = alg1_qosmt(pst);
  std::stringstream ss;
  write_solution(ss, run.solution);
  EXPECT_EQ(read_edge_solution(ss, pst), run.solution);

  auto pn = gen_random_pnwst(spec);
  auto prun = alg3_pnwst(pn);
  std::stringstream st;
  write_solution(st, prun.solution, pn.graph);
  EXPECT_EQ(read_vertex_solution(st, pn), prun.solution);
}

TEST(Solutions, TreeIsRebuiltWhenOmitted) {
  auto pn = gen_tightness_pnwst(3);
  std::istringstream in("rate 1 1\nrate 2 1\nrate 3 1\nrate 4 1\nrate 5 1\n");
  auto sol = read_vertex_solution(in, pn);
  EXPECT_EQ(sol.tree_edges.size(), 4u);
  EXPECT_TRUE(check_feasible(pn, sol));
  EXPECT_EQ(solution_weight(pn, sol), 1.0);
}

TEST(Solutions, BadRecords) {
  auto pn = gen_tightness_pnwst(3);
  std::istringstream unknown("rate 1 1\nbogus\n");
  EXPECT_THROW(read_vertex_solution(unknown, pn), ParseError);
  std::istringstream no_edge("tree 1 2\n");
  EXPECT_THROW(read_vertex_solution(no_edge, pn), ParseError);
}

TEST(RateTreeFiles, RoundTrip) {
  auto sample = gen_random_rate_tree(15, 3, 0.3, 4);
  std::stringstream ss;
  write_rate_tree(ss, sample.tree, sample.members);
  auto back = read_rate_tree(ss);
  EXPECT_EQ(back.tree.parent, sample.tree.parent);
  EXPECT_EQ(back.tree.rate, sample.tree.rate);
  EXPECT_EQ(back.members, sample.members);
}

TEST(Report, RoundsToTwelveDigits) {
  EXPECT_EQ(round_sig(13.0 / 6.0), 2.16666666667);
  EXPECT_EQ(round_sig(0.0), 0.0);
  EXPECT_EQ(round_sig(3.0), 3.0);
}

TEST(Report, PstFieldsAndFeasibility) {
  auto pst = std::get<PstInstance>(parse_instance("PST 1\nk 2\nnodes 2\nsource 1\nterminal 2 2\nedge 1 2 1 3\n"));
  auto run = alg1_qosmt(pst);
  auto j = make_report(pst, run, {3.0, std::nullopt});
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["instance"]["kind"], "PST");
  EXPECT_EQ(j["solver"], "alg1");
  EXPECT_EQ(j["weight"], 3.0);
  EXPECT_EQ(j["feasible"], true);
  EXPECT_EQ(j["ratio"], 1.0);
  EXPECT_FALSE(j.contains("time_ms"));
  EXPECT_EQ(j["connection_costs"][0]["terminal"], 2);

  // A tampered solution is reported infeasible no matter what the solver said.
  run.solution.rates[0] = 1;
  auto bad = make_report(pst, run);
  EXPECT_EQ(bad["feasible"], false);
  EXPECT_TRUE(bad.contains("violation"));
}

TEST(Report, PnwstIterationsAndBound) {
  auto inst = gen_tightness_pnwst(3);
  auto j = make_report(inst, alg3_pnwst(inst), {1.0, 5.0});
  EXPECT_EQ(j["iterations"].size(), 3u);
  EXPECT_EQ(j["ratio"], 2.16666666667);
  EXPECT_EQ(j["bound"], round_sig(2.0 * std::log(4.0) + 2.0));
  EXPECT_EQ(j["time_ms"], 5.0);
}

TEST(Report, DumpIsStable) {
  RandomSpec spec{30, 0.15, 3, 0.5, 17};
  auto inst = gen_random_pst(spec);
  EXPECT_EQ(dump_report(make_report(inst, alg2_parallel(inst, 1))),
            dump_report(make_report(inst, alg2_parallel(inst, 6))));
}

TEST(Csv, Rows) {
  EXPECT_EQ(csv_header(), "instance,solver,weight,opt,ratio,bound,time_ms");
  EXPECT_EQ(csv_row({"a", "alg1", 4, 2.0, 3, 1.5}), "a,alg1,4,2,2,6,1.5");
  EXPECT_EQ(csv_row({"b", "krho", 4, std::nullopt, 4, 0.25}), "b,krho,4,,,,0.25");
}
