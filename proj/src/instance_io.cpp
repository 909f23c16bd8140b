#include "prio/instance_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "prio/pnwst_solver.hpp"

namespace prio {

ParseError::ParseError(int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::istream& in) {
  std::vector<Line> lines;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ss(raw);
    Line line{number, {}};
    std::string tok;
    while (ss >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

long long to_int(const Line& l, size_t i) {
  const std::string& s = l.tokens[i];
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ParseError(l.number, "expected an integer, got '" + s + "'");
  return v;
}

double to_real(const Line& l, size_t i) {
  const std::string& s = l.tokens[i];
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ParseError(l.number, "expected a number, got '" + s + "'");
  if (!(v >= 0.0) || v == kInfinity) throw ParseError(l.number, "weights must be finite and nonnegative");
  return v;
}

void expect_arity(const Line& l, size_t want) {
  if (l.tokens.size() != want)
    throw ParseError(l.number, "'" + l.tokens[0] + "' expects " + std::to_string(want - 1) + " argument(s)");
}

enum class Kind { Pst, Pnwst, Combined };

Kind read_header(const std::vector<Line>& lines) {
  if (lines.empty()) throw ParseError(0, "empty instance file");
  const Line& h = lines.front();
  if (h.tokens.size() != 2) throw ParseError(h.number, "header must be '<KIND> 1'");
  if (h.tokens[1] != "1") throw ParseError(h.number, "unsupported format version " + h.tokens[1]);
  if (h.tokens[0] == "PST") return Kind::Pst;
  if (h.tokens[0] == "PNWST") return Kind::Pnwst;
  if (h.tokens[0] == "COMBINED") return Kind::Combined;
  throw ParseError(h.number, "unknown instance kind '" + h.tokens[0] + "'");
}

}  // namespace

AnyInstance read_instance(std::istream& in) {
  auto lines = tokenize(in);
  const Kind kind = read_header(lines);
  const bool edge_weighted = kind != Kind::Pnwst;
  const bool node_weighted = kind != Kind::Pst;

  std::optional<int> k, n;
  std::optional<Vertex> source;
  std::vector<double> level_values;
  // Records are collected first so directives can appear in any order after the header.
  std::vector<const Line*> terminals, edges, nodes;
  for (size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    const std::string& d = l.tokens[0];
    if (d == "k") {
      expect_arity(l, 2);
      if (k) throw ParseError(l.number, "duplicate 'k'");
      long long v = to_int(l, 1);
      if (v < 1 || v > 1000) throw ParseError(l.number, "k must lie in 1..1000");
      k = static_cast<int>(v);
    } else if (d == "nodes") {
      expect_arity(l, 2);
      if (n) throw ParseError(l.number, "duplicate 'nodes'");
      long long v = to_int(l, 1);
      if (v < 1 || v > 100000000) throw ParseError(l.number, "node count out of range");
      n = static_cast<int>(v);
    } else if (d == "levels") {
      if (!level_values.empty()) throw ParseError(l.number, "duplicate 'levels'");
      if (l.tokens.size() < 2) throw ParseError(l.number, "'levels' needs at least one value");
      for (size_t j = 1; j < l.tokens.size(); ++j) level_values.push_back(to_real(l, j));
      if (!level_values.empty() && level_values.front() <= 0.0) throw ParseError(l.number, "level values must be positive");
      for (size_t j = 1; j < level_values.size(); ++j) {
        if (level_values[j] <= level_values[j - 1]) throw ParseError(l.number, "level values must strictly increase");
      }
    } else if (d == "source") {
      expect_arity(l, 2);
      if (source) throw ParseError(l.number, "duplicate 'source'");
      source = static_cast<Vertex>(to_int(l, 1));
      if (!n) throw ParseError(l.number, "'source' before 'nodes'");
      if (*source < 1 || *source > *n) throw ParseError(l.number, "source id out of range");
    } else if (d == "terminal") {
      terminals.push_back(&l);
    } else if (d == "edge") {
      edges.push_back(&l);
    } else if (d == "node") {
      if (!node_weighted) throw ParseError(l.number, "'node' records are not allowed in PST instances");
      nodes.push_back(&l);
    } else {
      throw ParseError(l.number, "unknown record '" + d + "'");
    }
  }
  const int last = lines.back().number;
  if (!k) throw ParseError(last, "missing 'k'");
  if (!n) throw ParseError(last, "missing 'nodes'");
  if (!source) throw ParseError(last, "missing 'source'");
  if (!level_values.empty() && static_cast<int>(level_values.size()) != *k)
    throw ParseError(last, "'levels' lists " + std::to_string(level_values.size()) + " values but k = " + std::to_string(*k));

  auto vertex_at = [&](const Line& l, size_t i) {
    long long v = to_int(l, i);
    if (v < 1 || v > *n) throw ParseError(l.number, "vertex id " + l.tokens[i] + " out of range 1.." + std::to_string(*n));
    return static_cast<Vertex>(v - 1);
  };
  auto weight_row = [&](const Line& l, size_t first) {
    std::vector<double> row;
    for (size_t j = first; j < l.tokens.size(); ++j) row.push_back(to_real(l, j));
    return row;
  };

  Demand demand;
  demand.source = *source - 1;
  demand.priority.assign(*n, 0);
  for (const Line* l : terminals) {
    expect_arity(*l, 3);
    Vertex v = vertex_at(*l, 1);
    long long p = to_int(*l, 2);
    if (v == demand.source) throw ParseError(l->number, "the source cannot be a terminal");
    if (p < 1 || p > *k) throw ParseError(l->number, "terminal level must lie in 1.." + std::to_string(*k));
    if (demand.priority[v] != 0) throw ParseError(l->number, "duplicate terminal " + l->tokens[1]);
    demand.priority[v] = static_cast<Level>(p);
  }

  std::vector<Edge> edge_list;
  std::vector<std::vector<double>> edge_rows;
  std::set<std::pair<Vertex, Vertex>> seen;
  for (const Line* l : edges) {
    size_t want = edge_weighted ? 3 + static_cast<size_t>(*k) : 3;
    if (l->tokens.size() != want)
      throw ParseError(l->number, edge_weighted ? "'edge' expects u v and " + std::to_string(*k) + " weights"
                                                : "'edge' expects exactly u v");
    Vertex u = vertex_at(*l, 1), v = vertex_at(*l, 2);
    if (u == v) throw ParseError(l->number, "self-loop at vertex " + l->tokens[1]);
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second) throw ParseError(l->number, "duplicate edge");
    edge_list.push_back({u, v});
    if (edge_weighted) edge_rows.push_back(weight_row(*l, 3));
  }

  WeightTable vertex_table(*n, *k);
  std::vector<char> node_seen(*n, 0);
  for (const Line* l : nodes) {
    if (l->tokens.size() != 2 + static_cast<size_t>(*k))
      throw ParseError(l->number, "'node' expects v and " + std::to_string(*k) + " weights");
    Vertex v = vertex_at(*l, 1);
    if (node_seen[v]) throw ParseError(l->number, "duplicate node record for " + l->tokens[1]);
    node_seen[v] = 1;
    vertex_table.set_row(v, weight_row(*l, 2));
  }

  PriorityGraph graph(*n, std::move(edge_list), *k, level_values);
  WeightTable edge_table(graph.num_edges(), *k);
  for (EdgeId e = 0; e < static_cast<EdgeId>(edge_rows.size()); ++e) edge_table.set_row(e, edge_rows[e]);

  switch (kind) {
    case Kind::Pst:
      return PstInstance{std::move(graph), std::move(demand), std::move(edge_table)};
    case Kind::Pnwst:
      return PnwstInstance{std::move(graph), std::move(demand), std::move(vertex_table)};
    case Kind::Combined:
      break;
  }
  return CombinedInstance{std::move(graph), std::move(demand), std::move(edge_table), std::move(vertex_table)};
}

AnyInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  return read_instance(in);
}

AnyInstance parse_instance(const std::string& text) {
  std::istringstream in(text);
  return read_instance(in);
}

namespace {

void write_common(std::ostream& out, const char* kind, const PriorityGraph& g, const Demand& d,
                  const std::vector<std::string>& comments) {
  out << kind << " 1\n";
  for (const auto& c : comments) out << "# " << c << "\n";
  out << "k " << g.levels() << "\n";
  if (!g.default_level_values()) {
    out << "levels";
    for (double v : g.level_values()) out << ' ' << format_number(v);
    out << "\n";
  }
  out << "nodes " << g.num_vertices() << "\n";
  out << "source " << d.source + 1 << "\n";
  for (Vertex t : d.terminals()) out << "terminal " << t + 1 << ' ' << d.priority[t] << "\n";
}

void write_row(std::ostream& out, std::span<const double> row) {
  for (double w : row) out << ' ' << format_number(w);
}

void write_edges(std::ostream& out, const PriorityGraph& g, const WeightTable* weights) {
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    out << "edge " << g.edge(e).u + 1 << ' ' << g.edge(e).v + 1;
    if (weights) write_row(out, weights->row(e));
    out << "\n";
  }
}

void write_nodes(std::ostream& out, const WeightTable& weights) {
  for (Vertex v = 0; v < weights.rows(); ++v) {
    auto row = weights.row(v);
    if (std::all_of(row.begin(), row.end(), [](double w) { return w == 0.0; })) continue;
    out << "node " << v + 1;
    write_row(out, row);
    out << "\n";
  }
}

}  // namespace

void write_instance(std::ostream& out, const PstInstance& inst, const std::vector<std::string>& comments) {
  write_common(out, "PST", inst.graph, inst.demand, comments);
  write_edges(out, inst.graph, &inst.edge_weights);
}

void write_instance(std::ostream& out, const PnwstInstance& inst, const std::vector<std::string>& comments) {
  write_common(out, "PNWST", inst.graph, inst.demand, comments);
  write_edges(out, inst.graph, nullptr);
  write_nodes(out, inst.vertex_weights);
}

void write_instance(std::ostream& out, const CombinedInstance& inst, const std::vector<std::string>& comments) {
  write_common(out, "COMBINED", inst.graph, inst.demand, comments);
  write_edges(out, inst.graph, &inst.edge_weights);
  write_nodes(out, inst.vertex_weights);
}

EdgeRateSolution read_edge_solution(std::istream& in, const PstInstance& inst) {
  EdgeRateSolution sol;
  sol.rates.assign(inst.graph.num_edges(), 0);
  std::vector<char> seen(inst.graph.num_edges(), 0);
  for (const Line& l : tokenize(in)) {
    if (l.tokens[0] != "rate") throw ParseError(l.number, "unknown record '" + l.tokens[0] + "'");
    expect_arity(l, 3);
    long long e = to_int(l, 1), r = to_int(l, 2);
    if (e < 1 || e > inst.graph.num_edges()) throw ParseError(l.number, "edge id out of range");
    if (r < 0 || r > inst.graph.levels()) throw ParseError(l.number, "rate out of range");
    if (seen[e - 1]) throw ParseError(l.number, "duplicate rate for edge " + l.tokens[1]);
    seen[e - 1] = 1;
    sol.rates[e - 1] = static_cast<Level>(r);
  }
  return sol;
}

VertexRateSolution read_vertex_solution(std::istream& in, const PnwstInstance& inst) {
  const auto& g = inst.graph;
  VertexRateSolution sol;
  sol.rates.assign(g.num_vertices(), 0);
  std::vector<char> seen(g.num_vertices(), 0);
  bool has_tree = false;
  for (const Line& l : tokenize(in)) {
    if (l.tokens[0] == "rate") {
      expect_arity(l, 3);
      long long v = to_int(l, 1), r = to_int(l, 2);
      if (v < 1 || v > g.num_vertices()) throw ParseError(l.number, "vertex id out of range");
      if (r < 0 || r > g.levels()) throw ParseError(l.number, "rate out of range");
      if (seen[v - 1]) throw ParseError(l.number, "duplicate rate for vertex " + l.tokens[1]);
      seen[v - 1] = 1;
      sol.rates[v - 1] = static_cast<Level>(r);
    } else if (l.tokens[0] == "tree") {
      expect_arity(l, 3);
      long long u = to_int(l, 1), v = to_int(l, 2);
      if (u < 1 || v < 1 || u > g.num_vertices() || v > g.num_vertices()) throw ParseError(l.number, "vertex id out of range");
      auto e = g.find_edge(static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1));
      if (!e) throw ParseError(l.number, "no edge between " + l.tokens[1] + " and " + l.tokens[2]);
      sol.tree_edges.push_back(*e);
      has_tree = true;
    } else {
      throw ParseError(l.number, "unknown record '" + l.tokens[0] + "'");
    }
  }
  if (has_tree) {
    std::sort(sol.tree_edges.begin(), sol.tree_edges.end());
    sol.tree_edges.erase(std::unique(sol.tree_edges.begin(), sol.tree_edges.end()), sol.tree_edges.end());
  } else {
    RateTreeState state;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      if (sol.rates[g.edge(e).u] > 0 && sol.rates[g.edge(e).v] > 0) state.edges.push_back(e);
    }
    sol.tree_edges = extract_tree(state, sol.rates, g);
  }
  return sol;
}

void write_solution(std::ostream& out, const EdgeRateSolution& sol) {
  for (EdgeId e = 0; e < static_cast<EdgeId>(sol.rates.size()); ++e) {
    if (sol.rates[e] > 0) out << "rate " << e + 1 << ' ' << sol.rates[e] << "\n";
  }
}

void write_solution(std::ostream& out, const VertexRateSolution& sol, const PriorityGraph& g) {
  for (Vertex v = 0; v < static_cast<Vertex>(sol.rates.size()); ++v) {
    if (sol.rates[v] > 0) out << "rate " << v + 1 << ' ' << sol.rates[v] << "\n";
  }
  for (EdgeId e : sol.tree_edges) out << "tree " << g.edge(e).u + 1 << ' ' << g.edge(e).v + 1 << "\n";
}

RateTreeFile read_rate_tree(std::istream& in) {
  auto lines = tokenize(in);
  if (lines.empty()) throw ParseError(0, "empty rate tree file");
  const Line& h = lines.front();
  if (h.tokens.size() != 2 || h.tokens[0] != "RATETREE" || h.tokens[1] != "1")
    throw ParseError(h.number, "header must be 'RATETREE 1'");
  std::optional<int> n;
  std::optional<Vertex> root;
  std::map<Vertex, Level> rates;
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::vector<Vertex> members;
  auto vertex_at = [&](const Line& l, size_t i) {
    if (!n) throw ParseError(l.number, "'nodes' must come first");
    long long v = to_int(l, i);
    if (v < 1 || v > *n) throw ParseError(l.number, "vertex id out of range");
    return static_cast<Vertex>(v - 1);
  };
  for (size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    const std::string& d = l.tokens[0];
    if (d == "nodes") {
      expect_arity(l, 2);
      if (n) throw ParseError(l.number, "duplicate 'nodes'");
      long long v = to_int(l, 1);
      if (v < 1 || v > 10000000) throw ParseError(l.number, "node count out of range");
      n = static_cast<int>(v);
    } else if (d == "root") {
      expect_arity(l, 2);
      if (root) throw ParseError(l.number, "duplicate 'root'");
      root = vertex_at(l, 1);
    } else if (d == "rate") {
      expect_arity(l, 3);
      Vertex v = vertex_at(l, 1);
      long long r = to_int(l, 2);
      if (r < 1) throw ParseError(l.number, "rates must be at least 1");
      if (!rates.emplace(v, static_cast<Level>(r)).second) throw ParseError(l.number, "duplicate rate");
    } else if (d == "edge") {
      expect_arity(l, 3);
      edges.emplace_back(vertex_at(l, 1), vertex_at(l, 2));
    } else if (d == "member") {
      expect_arity(l, 2);
      members.push_back(vertex_at(l, 1));
    } else {
      throw ParseError(l.number, "unknown record '" + d + "'");
    }
  }
  const int last = lines.back().number;
  if (!n) throw ParseError(last, "missing 'nodes'");
  if (!root) throw ParseError(last, "missing 'root'");
  std::vector<Level> rate_vec(*n, 0);
  for (auto [v, r] : rates) rate_vec[v] = r;
  RateTreeFile out;
  try {
    out.tree = RateTree::from_edges(*n, *root, edges, rate_vec);
  } catch (const std::invalid_argument& e) {
    throw ParseError(last, e.what());
  }
  for (Vertex v : out.tree.vertices()) {
    if (out.tree.rate[v] == 0) throw ParseError(last, "vertex " + std::to_string(v + 1) + " has no rate");
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  out.members = std::move(members);
  return out;
}

void write_rate_tree(std::ostream& out, const RateTree& t, const std::vector<Vertex>& members) {
  out << "RATETREE 1\n";
  out << "nodes " << t.capacity() << "\n";
  out << "root " << t.root + 1 << "\n";
  for (Vertex v : t.vertices()) out << "rate " << v + 1 << ' ' << t.rate[v] << "\n";
  for (Vertex v : t.vertices()) {
    if (v != t.root) out << "edge " << t.parent[v] + 1 << ' ' << v + 1 << "\n";
  }
  for (Vertex v : members) out << "member " << v + 1 << "\n";
}

}  // namespace prio
