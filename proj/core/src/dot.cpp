#include "sdfnoc/dot.hpp"

#include <set>
#include <sstream>

namespace sdfnoc {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string router_id(const Coord& c) { return "r" + std::to_string(c.row) + "_" + std::to_string(c.col); }

}  // namespace

std::string to_dot(const DataflowGraph& g) {
  std::ostringstream out;
  out << "digraph " << quote(g.name()) << " {\n  rankdir=LR;\n  node [shape=box];\n";
  for (const Node& n : g.nodes()) out << "  " << quote(n.id) << " [label=" << quote(n.id + "\\n" + n.type.str()) << "];\n";
  for (const Edge& e : g.edges()) {
    for (const Vertex& l : e.loads) {
      out << "  " << quote(g.node(e.driver.node).id) << " -> " << quote(g.node(l.node).id) << " [taillabel="
          << quote("out" + std::to_string(e.driver.port)) << ", headlabel=" << quote("in" + std::to_string(l.port))
          << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string to_dot(const UnionGraph& u, const PackedGraph& packed) {
  std::ostringstream out;
  out << "digraph union {\n  rankdir=LR;\n  node [shape=box];\n";
  for (const Pack& p : packed.packs) {
    out << "  subgraph cluster_" << p.mark << " {\n    label=" << quote("pack " + std::to_string(p.mark)) << ";\n";
    for (NodeIndex n : p.nodes) out << "    " << quote(u.nodes[n].name()) << ";\n";
    out << "  }\n";
  }
  for (EdgeIndex e = 0; e < u.edges.size(); ++e) {
    const UnionEdge& edge = u.edges[e];
    for (const Vertex& l : edge.loads) {
      out << "  " << quote(u.nodes[edge.driver.node].name()) << " -> " << quote(u.nodes[l.node].name())
          << " [label=" << quote(format_colors(edge.colors)) << (packed.is_external(e) ? ", style=bold" : "")
          << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string to_dot(const Design& d) {
  if (!d.pnr) return to_dot(d.union_graph, d.packed);
  const PnrResult& p = *d.pnr;
  std::ostringstream out;
  out << "digraph pnr {\n  node [shape=box];\n";
  for (std::size_t i = 0; i < p.noc.router_count(); ++i) {
    const Coord c = p.noc.coord(i);
    std::string label = to_string(c);
    if (auto v = p.placement.vertex_at(c)) label += "\\n" + d.union_graph.vertex_name(*v);
    out << "  " << router_id(c) << " [label=" << quote(label) << ", pos=" << quote(std::to_string(c.col * 2) + "," +
        std::to_string(-static_cast<long>(c.row) * 2) + "!") << "];\n";
  }
  for (const auto& [e, links] : p.routes) {
    for (const Link& l : links) {
      if (l.kind != Link::Kind::Inter) continue;
      out << "  " << router_id(l.from) << " -> " << router_id(l.to) << " [label="
          << quote("e" + std::to_string(e) + " " + format_colors(d.union_graph.edges[e].colors)) << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace sdfnoc
