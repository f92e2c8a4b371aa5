#include "sdfnoc/app_format.hpp"

#include <sstream>

#include "sdfnoc/error.hpp"
#include "sdfnoc/text.hpp"

namespace sdfnoc {

namespace {

Vertex resolve(const DataflowGraph& g, const text::Word& w, Direction want, std::size_t line) {
  auto ref = split_vertex_ref(w.text);
  if (!ref || !text::is_ident(ref->node) || ref->dir != want) {
    throw ParseError(std::string("expected <node>.") + (want == Direction::In ? "in" : "out") + "<k>, got '" +
                         std::string(w.text) + "'",
                     line, w.column);
  }
  auto node = g.find_node(ref->node);
  if (!node) throw ParseError("unknown node '" + ref->node + "'", line, w.column);
  const Node& n = g.node(*node);
  const auto arity = want == Direction::In ? n.in_arity : n.out_arity;
  if (ref->port >= arity) {
    throw ParseError("port index out of range: '" + std::string(w.text) + "'", line, w.column);
  }
  return {*node, want, ref->port};
}

}  // namespace

DataflowGraph parse_app_graph(std::string_view doc) {
  const auto lines = text::split_lines(doc, true);
  if (lines.empty()) throw ParseError("empty document, expected 'app <ident>'", 1, 1);

  const auto& header = lines.front();
  if (header.words[0].text != "app") {
    throw ParseError("expected 'app <ident>' as first line", header.number, header.words[0].column);
  }
  if (header.words.size() != 2 || !text::is_ident(header.words[1].text)) {
    throw ParseError("expected 'app <ident>'", header.number, header.words[0].column);
  }
  DataflowGraph g{std::string(header.words[1].text)};

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& line = lines[li];
    const auto& w = line.words;
    if (w[0].text == "node") {
      if (w.size() != 5) throw ParseError("expected 'node <ident> type=<T> in=<n> out=<n>'", line.number, w[0].column);
      if (!text::is_ident(w[1].text)) throw ParseError("invalid node id '" + std::string(w[1].text) + "'", line.number, w[1].column);
      const auto type = text::expect_key(w[2], "type", line.number);
      if (!TypeLabel::is_valid(type)) throw ParseError("invalid type label '" + std::string(type) + "'", line.number, w[2].column);
      const auto in = text::parse_uint(text::expect_key(w[3], "in", line.number), line.number, w[3].column + 3);
      const auto out = text::parse_uint(text::expect_key(w[4], "out", line.number), line.number, w[4].column + 4);
      if (in > 64 || out > 64) throw ParseError("arity above 64 is not supported", line.number, w[3].column);
      if (g.find_node(w[1].text)) {
        throw ParseError("duplicate node id '" + std::string(w[1].text) + "'", line.number, w[1].column);
      }
      g.add_node({std::string(w[1].text), TypeLabel(std::string(type)), static_cast<std::uint32_t>(in),
                  static_cast<std::uint32_t>(out)});
    } else if (w[0].text == "edge") {
      if (w.size() < 4 || w[2].text != "->") {
        throw ParseError("expected 'edge <node>.out<k> -> <node>.in<j> ...'", line.number, w[0].column);
      }
      Edge e{resolve(g, w[1], Direction::Out, line.number), {}};
      for (std::size_t i = 3; i < w.size(); ++i) {
        Vertex load = resolve(g, w[i], Direction::In, line.number);
        for (const Vertex& seen : e.loads) {
          if (seen == load) throw ParseError("duplicate load '" + std::string(w[i].text) + "'", line.number, w[i].column);
        }
        if (g.edge_loading(load)) {
          throw ParseError("duplicate load on In vertex '" + std::string(w[i].text) + "'", line.number, w[i].column);
        }
        e.loads.push_back(load);
      }
      if (g.edge_driven_by(e.driver)) {
        throw ParseError("duplicate driver on Out vertex '" + std::string(w[1].text) + "'", line.number, w[1].column);
      }
      g.add_edge(std::move(e));
    } else {
      throw ParseError("unknown directive '" + std::string(w[0].text) + "'", line.number, w[0].column);
    }
  }

  validate_acyclic(g);
  return g;
}

std::string write_app_graph(const DataflowGraph& g) {
  std::ostringstream out;
  out << "app " << g.name() << '\n';
  for (const Node& n : g.nodes()) {
    out << "node " << n.id << " type=" << n.type.str() << " in=" << n.in_arity << " out=" << n.out_arity << '\n';
  }
  for (const Edge& e : g.edges()) {
    out << "edge " << g.vertex_name(e.driver) << " ->";
    for (const Vertex& l : e.loads) out << ' ' << g.vertex_name(l);
    out << '\n';
  }
  return out.str();
}

}  // namespace sdfnoc
