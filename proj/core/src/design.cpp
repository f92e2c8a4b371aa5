#include "sdfnoc/design.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "sdfnoc/error.hpp"
#include "sdfnoc/text.hpp"

namespace sdfnoc {

namespace {

using text::Line;
using text::Word;

std::string pack_line(const PackedGraph& packed, const UnionGraph& u, std::size_t i) {
  std::string s = "pack " + std::to_string(packed.packs[i].mark) + ":";
  for (NodeIndex n : packed.packs[i].nodes) s += " " + u.nodes[n].name();
  return s;
}

void write_union_body(std::ostream& out, const UnionGraph& u, const Marks& marks) {
  out << "union\n";
  for (std::size_t i = 0; i < u.apps.size(); ++i) out << "app " << i + 1 << ' ' << u.apps[i].name << '\n';
  for (const UnionNode& n : u.nodes) {
    out << "node " << n.name() << " in=" << n.in_arity << " out=" << n.out_arity << '\n';
  }
  for (const UnionEdge& e : u.edges) {
    out << "edge " << u.vertex_name(e.driver) << " ->";
    for (const Vertex& l : e.loads) out << ' ' << u.vertex_name(l);
    out << " colors=" << format_colors(e.colors) << '\n';
  }
  const PackedGraph packed = divide(u, marks);
  for (std::size_t i = 0; i < packed.packs.size(); ++i) out << pack_line(packed, u, i) << '\n';
  for (const AppMapping& m : u.apps) {
    for (std::size_t i = 0; i < m.node_ids.size(); ++i) {
      out << "map " << m.name << ':' << m.node_ids[i] << " -> " << u.nodes[m.node_map[i]].name() << '\n';
    }
  }
}

// Accumulates union directives; anything else is handed back to the caller.
class UnionReader {
 public:
  /// Returns false when the line is not a union directive.
  bool consume(const Line& line) {
    const auto& w = line.words;
    const std::string_view kw = w[0].text;
    if (kw == "union") {
      if (seen_header_) fail("duplicate 'union' header", line, w[0]);
      if (w.size() != 1) fail("unexpected text after 'union'", line, w[1]);
      seen_header_ = true;
      return true;
    }
    if (kw != "app" && kw != "node" && kw != "edge" && kw != "pack" && kw != "map") return false;
    if (!seen_header_) fail("expected 'union' header before '" + std::string(kw) + "'", line, w[0]);
    if (kw == "app") read_app(line);
    if (kw == "node") read_node(line);
    if (kw == "edge") read_edge(line);
    if (kw == "pack") read_pack(line);
    if (kw == "map") read_map(line);
    return true;
  }

  Design finish(std::size_t last_line) {
    if (!seen_header_) throw ParseError("missing 'union' header", last_line, 1);
    if (u_.apps.empty()) throw ParseError("union declares no applications", last_line, 1);
    Marks marks(u_.nodes.size());
    for (NodeIndex n = 0; n < u_.nodes.size(); ++n) {
      if (!marks_[n]) throw ParseError("node " + u_.nodes[n].name() + " is not in any pack", last_line, 1);
      marks[n] = *marks_[n];
    }
    for (AppId a = 1; a <= u_.app_count(); ++a) {
      if (u_.app(a).node_ids.empty()) {
        throw ParseError("application " + u_.app(a).name + " has no map lines", last_line, 1);
      }
    }
    // Every colored edge must join nodes active in that application, and an
    // application may drive or load a vertex through at most one edge.
    for (EdgeIndex e = 0; e < u_.edges.size(); ++e) {
      const UnionEdge& edge = u_.edges[e];
      for (AppId a : edge.colors) {
        const auto bad = [&](const Vertex& v) {
          if (!u_.node_active(v.node, a)) {
            throw ParseError("edge e" + std::to_string(e) + " has color " + std::to_string(a) + " but " +
                                 u_.nodes[v.node].name() + " is not mapped by " + u_.app(a).name,
                             edge_lines_[e], 1);
          }
        };
        bad(edge.driver);
        for (const Vertex& l : edge.loads) bad(l);
        if (u_.edge_driven_by(edge.driver, a) != e) {
          throw ParseError("two edges of application " + u_.app(a).name + " share driver " +
                               u_.vertex_name(edge.driver),
                           edge_lines_[e], 1);
        }
        for (const Vertex& l : edge.loads) {
          if (u_.edge_loading(l, a) != e) {
            throw ParseError("two edges of application " + u_.app(a).name + " load " + u_.vertex_name(l),
                             edge_lines_[e], 1);
          }
        }
      }
    }
    Design d;
    d.packed = divide(u_, marks);
    d.marks = std::move(marks);
    d.union_graph = std::move(u_);
    return d;
  }

 private:
  [[noreturn]] static void fail(const std::string& msg, const Line& line, const Word& w) {
    throw ParseError(msg, line.number, w.column);
  }

  NodeIndex node_ref(std::string_view name, const Line& line, const Word& w) const {
    auto n = u_.find_node(name);
    if (!n) fail("unknown union node '" + std::string(name) + "'", line, w);
    return *n;
  }

  Vertex vertex_ref(const Line& line, const Word& w, Direction dir) const {
    auto v = u_.parse_vertex(w.text);
    if (!v) fail("unknown union vertex '" + std::string(w.text) + "'", line, w);
    if (v->dir != dir) fail(std::string("expected an ") + (dir == Direction::In ? "in" : "out") + " port", line, w);
    return *v;
  }

  void read_app(const Line& line) {
    const auto& w = line.words;
    if (w.size() != 3) fail("expected 'app <index> <name>'", line, w[0]);
    const auto idx = text::parse_uint(w[1].text, line.number, w[1].column);
    if (idx != u_.apps.size() + 1) fail("application indices must count up from 1", line, w[1]);
    if (!text::is_ident(w[2].text)) fail("invalid application name '" + std::string(w[2].text) + "'", line, w[2]);
    for (const AppMapping& m : u_.apps) {
      if (m.name == w[2].text) fail("duplicate application name '" + m.name + "'", line, w[2]);
    }
    if (!u_.edges.empty() || !u_.nodes.empty()) fail("'app' lines must come before nodes and edges", line, w[0]);
    u_.apps.push_back({std::string(w[2].text), {}, {}, {}});
  }

  void read_node(const Line& line) {
    const auto& w = line.words;
    if (w.size() != 4) fail("expected 'node <TYPE>#<m> in=<uint> out=<uint>'", line, w[0]);
    const std::string_view name = w[1].text;
    const auto hash = name.rfind('#');
    if (hash == std::string_view::npos || hash == 0) fail("expected <TYPE>#<m>", line, w[1]);
    const std::string type(name.substr(0, hash));
    if (!TypeLabel::is_valid(type)) fail("invalid type label '" + type + "'", line, w[1]);
    const auto copy = text::parse_uint(name.substr(hash + 1), line.number, w[1].column + hash + 1);
    if (copy == 0 || copy > 1'000'000) fail("copy index out of range", line, w[1]);
    if (u_.find_node(name)) fail("duplicate node '" + std::string(name) + "'", line, w[1]);
    if (!u_.edges.empty()) fail("'node' lines must come before edges", line, w[0]);
    const auto in = text::parse_uint(text::expect_key(w[2], "in", line.number), line.number, w[2].column + 3);
    const auto out = text::parse_uint(text::expect_key(w[3], "out", line.number), line.number, w[3].column + 4);
    if (in > 64 || out > 64) fail("arity out of range", line, w[2]);
    u_.nodes.push_back({TypeLabel(type), static_cast<std::uint32_t>(copy), static_cast<std::uint32_t>(in),
                        static_cast<std::uint32_t>(out)});
    marks_.emplace_back();
  }

  void read_edge(const Line& line) {
    const auto& w = line.words;
    if (w.size() < 5 || w[2].text != "->") fail("expected 'edge <out> -> <in> ... colors={..}'", line, w[0]);
    UnionEdge e;
    e.driver = vertex_ref(line, w[1], Direction::Out);
    for (std::size_t i = 3; i + 1 < w.size(); ++i) {
      const Vertex l = vertex_ref(line, w[i], Direction::In);
      if (std::find(e.loads.begin(), e.loads.end(), l) != e.loads.end()) fail("duplicate load", line, w[i]);
      e.loads.push_back(l);
    }
    std::sort(e.loads.begin(), e.loads.end());

    const Word& cw = w.back();
    std::string_view cs = text::expect_key(cw, "colors", line.number);
    if (cs.size() < 3 || cs.front() != '{' || cs.back() != '}') fail("expected colors={i,j,...}", line, cw);
    cs = cs.substr(1, cs.size() - 2);
    std::size_t offset = cw.column + 8;
    while (true) {
      const auto comma = cs.find(',');
      const auto id = text::parse_uint(cs.substr(0, comma), line.number, offset);
      if (id == 0 || id > u_.apps.size()) fail("color " + std::to_string(id) + " is not a declared application", line, cw);
      if (!e.colors.empty() && id <= e.colors.back()) fail("colors must be strictly increasing", line, cw);
      e.colors.push_back(static_cast<AppId>(id));
      if (comma == std::string_view::npos) break;
      cs.remove_prefix(comma + 1);
      offset += comma + 1;
    }
    u_.edges.push_back(std::move(e));
    edge_lines_.push_back(line.number);
  }

  void read_pack(const Line& line) {
    const auto& w = line.words;
    if (w.size() < 3 || !w[1].text.ends_with(':')) fail("expected 'pack <q>: <node> ...'", line, w[0]);
    const auto q = text::parse_uint(w[1].text.substr(0, w[1].text.size() - 1), line.number, w[1].column);
    if (q > 0xffffffffULL) fail("pack mark out of range", line, w[1]);
    if (!packs_.insert(q).second) fail("duplicate pack " + std::to_string(q), line, w[1]);
    for (std::size_t i = 2; i < w.size(); ++i) {
      const NodeIndex n = node_ref(w[i].text, line, w[i]);
      if (marks_[n]) fail("node " + std::string(w[i].text) + " is already in a pack", line, w[i]);
      marks_[n] = static_cast<std::uint32_t>(q);
    }
  }

  void read_map(const Line& line) {
    const auto& w = line.words;
    if (w.size() != 4 || w[2].text != "->") fail("expected 'map <app>:<nodeid> -> <TYPE>#<m>'", line, w[0]);
    const auto colon = w[1].text.find(':');
    if (colon == std::string_view::npos) fail("expected <app>:<nodeid>", line, w[1]);
    const std::string_view app = w[1].text.substr(0, colon);
    const std::string_view id = w[1].text.substr(colon + 1);
    AppMapping* m = nullptr;
    for (AppMapping& candidate : u_.apps) {
      if (candidate.name == app) m = &candidate;
    }
    if (!m) fail("unknown application '" + std::string(app) + "'", line, w[1]);
    if (!text::is_ident(id)) fail("invalid node id '" + std::string(id) + "'", line, w[1]);
    if (std::find(m->node_ids.begin(), m->node_ids.end(), id) != m->node_ids.end()) {
      fail("node id '" + std::string(id) + "' mapped twice", line, w[1]);
    }
    const NodeIndex n = node_ref(w[3].text, line, w[3]);
    if (std::find(m->node_map.begin(), m->node_map.end(), n) != m->node_map.end()) {
      fail("two nodes of " + m->name + " map onto " + std::string(w[3].text), line, w[3]);
    }
    m->node_ids.emplace_back(id);
    m->node_map.push_back(n);
  }

  UnionGraph u_;
  std::vector<std::optional<std::uint32_t>> marks_;
  std::set<std::uint64_t> packs_;
  std::vector<std::size_t> edge_lines_;
  bool seen_header_ = false;
};

std::size_t last_line_number(const std::vector<Line>& lines) { return lines.empty() ? 1 : lines.back().number; }

}  // namespace

std::string write_union(const UnionGraph& u, const Marks& marks) {
  std::ostringstream out;
  write_union_body(out, u, marks);
  return out.str();
}

Design parse_union(std::string_view doc) {
  const auto lines = text::split_lines(doc, false);
  if (lines.empty() || lines.front().words[0].text != "union") {
    throw ParseError("expected 'union' header", lines.empty() ? 1 : lines.front().number, 1);
  }
  UnionReader reader;
  for (const Line& line : lines) {
    if (!reader.consume(line)) {
      throw ParseError("unknown directive '" + std::string(line.words[0].text) + "'", line.number,
                       line.words[0].column);
    }
  }
  return reader.finish(last_line_number(lines));
}

std::string write_pnr(const UnionGraph& u, const Marks& marks, const PackedGraph& packed, const PnrResult& pnr) {
  std::ostringstream out;
  out << "pnr mesh=" << pnr.noc.descriptor() << " seed=" << pnr.seed << '\n';
  write_union_body(out, u, marks);
  for (const auto& [v, site] : pnr.placement.sites) {
    out << "place " << packed.packs[packed.pack_of[v.node]].mark << '.' << u.vertex_name(v) << " -> "
        << to_string(site) << '\n';
  }
  for (const auto& [e, links] : pnr.routes) {
    out << "route e" << e << ':';
    for (const Link& l : links) out << ' ' << to_string(l);
    out << '\n';
  }
  return out.str();
}

Design parse_pnr(std::string_view doc) {
  const auto lines = text::split_lines(doc, false);
  if (lines.empty()) throw ParseError("empty pnr document", 1, 1);
  const Line& head = lines.front();
  if (head.words.size() != 3 || head.words[0].text != "pnr") {
    throw ParseError("expected 'pnr mesh=<r>x<c> seed=<uint>'", head.number, head.words[0].column);
  }
  const auto [rows, cols] =
      text::parse_dims(text::expect_key(head.words[1], "mesh", head.number), head.number, head.words[1].column + 5);
  const auto seed =
      text::parse_uint(text::expect_key(head.words[2], "seed", head.number), head.number, head.words[2].column + 5);

  UnionReader reader;
  std::vector<const Line*> places;
  std::vector<const Line*> route_lines;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    const std::string_view kw = line.words[0].text;
    if (kw == "place") {
      places.push_back(&line);
    } else if (kw == "route") {
      route_lines.push_back(&line);
    } else if (!places.empty() || !route_lines.empty() || !reader.consume(line)) {
      throw ParseError("unexpected directive '" + std::string(kw) + "'", line.number, line.words[0].column);
    }
  }
  Design d = reader.finish(last_line_number(lines));
  const UnionGraph& u = d.union_graph;

  PnrResult pnr;
  pnr.noc = MeshNoC(rows, cols);
  pnr.seed = seed;
  for (const Line* line : places) {
    const auto& w = line->words;
    if (w.size() != 4 || w[2].text != "->") {
      throw ParseError("expected 'place <pack>.<vertex> -> (<r>,<c>)'", line->number, w[0].column);
    }
    const auto dot = w[1].text.find('.');
    if (dot == std::string_view::npos) throw ParseError("expected <pack>.<vertex>", line->number, w[1].column);
    const auto mark = text::parse_uint(w[1].text.substr(0, dot), line->number, w[1].column);
    auto v = u.parse_vertex(w[1].text.substr(dot + 1));
    if (!v) throw ParseError("unknown union vertex", line->number, w[1].column + dot + 1);
    if (d.packed.packs[d.packed.pack_of[v->node]].mark != mark) {
      throw ParseError("vertex is not in pack " + std::to_string(mark), line->number, w[1].column);
    }
    auto site = parse_coord(w[3].text);
    if (!site) throw ParseError("malformed router coordinate", line->number, w[3].column);
    if (!pnr.placement.sites.emplace(*v, *site).second) {
      throw ParseError("vertex placed twice", line->number, w[1].column);
    }
  }
  for (const Line* line : route_lines) {
    const auto& w = line->words;
    if (w.size() < 2 || !w[1].text.starts_with('e') || !w[1].text.ends_with(':')) {
      throw ParseError("expected 'route e<k>: <link> ...'", line->number, w[0].column);
    }
    const auto e = text::parse_uint(w[1].text.substr(1, w[1].text.size() - 2), line->number, w[1].column + 1);
    if (e >= u.edges.size()) throw ParseError("unknown edge e" + std::to_string(e), line->number, w[1].column);
    std::vector<Link> links;
    for (std::size_t i = 2; i < w.size(); ++i) {
      auto l = parse_link(w[i].text);
      if (!l) throw ParseError("malformed link '" + std::string(w[i].text) + "'", line->number, w[i].column);
      links.push_back(*l);
    }
    if (!pnr.routes.emplace(static_cast<EdgeIndex>(e), std::move(links)).second) {
      throw ParseError("edge e" + std::to_string(e) + " routed twice", line->number, w[1].column);
    }
  }

  const auto violations = check(u, d.packed, pnr.noc, pnr.placement, pnr.routes);
  if (!violations.empty()) {
    throw ParseError("inconsistent place-and-route: " + violations.front().message, lines.back().number, 1);
  }
  for (AppId a = 1; a <= u.app_count(); ++a) {
    pnr.configs.push_back(collect_config(u, pnr.routes, a));
    std::size_t links = 0;
    for (const auto& [e, ls] : pnr.routes) {
      if (has_color(u.edges[e].colors, a)) links += ls.size();
    }
    pnr.links_per_app.push_back(links);
  }
  pnr.wirelength = placement_cost(u, d.packed, pnr.placement);
  d.pnr = std::move(pnr);
  return d;
}

Design build_design(std::span<const DataflowGraph> graphs, const MeshNoC& noc, std::uint64_t seed,
                    const RouteOptions& options) {
  MergeResult m = merge(graphs);
  Design d;
  d.pnr = place_and_route(m.union_graph, m.packed, noc, seed, options);
  d.union_graph = std::move(m.union_graph);
  d.packed = std::move(m.packed);
  d.marks = std::move(m.marks);
  return d;
}

}  // namespace sdfnoc
