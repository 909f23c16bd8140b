#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "prio/instance.hpp"
#include "prio/spider.hpp"

namespace prio {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

using AnyInstance = std::variant<PstInstance, PnwstInstance, CombinedInstance>;

/// Text format, one record per line, '#' starts a comment, ids are 1-based:
///   PST 1 | PNWST 1 | COMBINED 1
///   k <int>
///   levels <p1 .. pk>          (optional)
///   nodes <n>
///   source <v>
///   terminal <v> <level>
///   edge <u> <v> [w1 .. wk]    (weights for PST and COMBINED only)
///   node <v> <w1 .. wk>        (PNWST and COMBINED; missing nodes weigh 0)
AnyInstance read_instance(std::istream& in);
AnyInstance read_instance_file(const std::string& path);
AnyInstance parse_instance(const std::string& text);

void write_instance(std::ostream& out, const PstInstance& inst, const std::vector<std::string>& comments = {});
void write_instance(std::ostream& out, const PnwstInstance& inst, const std::vector<std::string>& comments = {});
void write_instance(std::ostream& out, const CombinedInstance& inst, const std::vector<std::string>& comments = {});

/// Solution files: "rate <id> <level>" per selected edge (PST) or vertex (PNWST),
/// plus optional "tree <u> <v>" lines for PNWST. Without tree lines the PNWST
/// tree is rebuilt from the selected vertices.
EdgeRateSolution read_edge_solution(std::istream& in, const PstInstance& inst);
VertexRateSolution read_vertex_solution(std::istream& in, const PnwstInstance& inst);
void write_solution(std::ostream& out, const EdgeRateSolution& sol);
void write_solution(std::ostream& out, const VertexRateSolution& sol, const PriorityGraph& g);

/// Rate tree files:
///   RATETREE 1
///   nodes <n>
///   root <v>
///   rate <v> <level>
///   edge <u> <v>
///   member <v>                 (optional)
struct RateTreeFile {
  RateTree tree;
  std::vector<Vertex> members;  // from member lines, ascending
};
RateTreeFile read_rate_tree(std::istream& in);
void write_rate_tree(std::ostream& out, const RateTree& t, const std::vector<Vertex>& members);

/// Shortest text that reads back to the same double.
std::string format_number(double x);

}  // namespace prio
