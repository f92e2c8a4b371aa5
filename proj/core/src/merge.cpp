#include "sdfnoc/merge.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "sdfnoc/error.hpp"
#include "sdfnoc/text.hpp"

namespace sdfnoc {

bool colors_intersect(const ColorSet& a, const ColorSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

bool has_color(const ColorSet& set, AppId app) { return std::binary_search(set.begin(), set.end(), app); }

std::string format_colors(const ColorSet& set) {
  std::string out = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(set[i]);
  }
  return out + "}";
}

std::vector<std::vector<LabeledNode>> label_nodes(std::span<const DataflowGraph> graphs) {
  std::vector<std::vector<LabeledNode>> labels;
  labels.reserve(graphs.size());
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    std::map<TypeLabel, std::uint32_t> seen;
    auto& out = labels.emplace_back();
    for (const Node& n : graphs[gi].nodes()) {
      out.push_back({n.type, ++seen[n.type], static_cast<AppId>(gi + 1)});
    }
  }
  return labels;
}

AppId UnionGraph::find_app(std::string_view name_or_index) const {
  for (std::size_t i = 0; i < apps.size(); ++i) {
    if (apps[i].name == name_or_index || std::to_string(i + 1) == name_or_index) return static_cast<AppId>(i + 1);
  }
  std::string valid;
  for (std::size_t i = 0; i < apps.size(); ++i) {
    if (i) valid += ", ";
    valid += std::to_string(i + 1) + "=" + apps[i].name;
  }
  throw Error("unknown application '" + std::string(name_or_index) + "'; valid ids: " + valid);
}

std::optional<NodeIndex> UnionGraph::find_node(std::string_view name) const {
  for (NodeIndex i = 0; i < nodes.size(); ++i) {
    if (nodes[i].name() == name) return i;
  }
  return std::nullopt;
}

std::string UnionGraph::vertex_name(const Vertex& v) const {
  const std::string node = v.node < nodes.size() ? nodes[v.node].name() : "?" + std::to_string(v.node);
  return node + (v.dir == Direction::In ? ".in" : ".out") + std::to_string(v.port);
}

std::optional<Vertex> UnionGraph::parse_vertex(std::string_view text) const {
  auto ref = split_vertex_ref(text);
  if (!ref) return std::nullopt;
  auto node = find_node(ref->node);
  if (!node) return std::nullopt;
  const UnionNode& n = nodes[*node];
  if (ref->port >= (ref->dir == Direction::In ? n.in_arity : n.out_arity)) return std::nullopt;
  return Vertex{*node, ref->dir, ref->port};
}

bool UnionGraph::node_active(NodeIndex node, AppId app_id) const {
  const auto& map = app(app_id).node_map;
  return std::find(map.begin(), map.end(), node) != map.end();
}

std::optional<EdgeIndex> UnionGraph::edge_loading(const Vertex& in, AppId app_id) const {
  for (EdgeIndex e = 0; e < edges.size(); ++e) {
    if (!has_color(edges[e].colors, app_id)) continue;
    if (std::binary_search(edges[e].loads.begin(), edges[e].loads.end(), in)) return e;
  }
  return std::nullopt;
}

std::optional<EdgeIndex> UnionGraph::edge_driven_by(const Vertex& out, AppId app_id) const {
  for (EdgeIndex e = 0; e < edges.size(); ++e) {
    if (edges[e].driver == out && has_color(edges[e].colors, app_id)) return e;
  }
  return std::nullopt;
}

std::vector<Vertex> UnionGraph::boundary_inputs(AppId app_id) const {
  std::vector<Vertex> out;
  std::vector<NodeIndex> active = app(app_id).node_map;
  std::sort(active.begin(), active.end());
  for (NodeIndex n : active) {
    for (std::uint32_t p = 0; p < nodes[n].in_arity; ++p) {
      if (!edge_loading(in_port(n, p), app_id)) out.push_back(in_port(n, p));
    }
  }
  return out;
}

std::vector<Vertex> UnionGraph::boundary_outputs(AppId app_id) const {
  std::vector<Vertex> out;
  std::vector<NodeIndex> active = app(app_id).node_map;
  std::sort(active.begin(), active.end());
  for (NodeIndex n : active) {
    for (std::uint32_t p = 0; p < nodes[n].out_arity; ++p) {
      if (!edge_driven_by(out_port(n, p), app_id)) out.push_back(out_port(n, p));
    }
  }
  return out;
}

std::optional<Vertex> UnionGraph::to_union(AppId app_id, std::string_view app_vertex) const {
  auto ref = split_vertex_ref(app_vertex);
  if (!ref) return std::nullopt;
  const AppMapping& m = app(app_id);
  for (std::size_t i = 0; i < m.node_ids.size(); ++i) {
    if (m.node_ids[i] != ref->node) continue;
    const UnionNode& n = nodes[m.node_map[i]];
    if (ref->port >= (ref->dir == Direction::In ? n.in_arity : n.out_arity)) return std::nullopt;
    return Vertex{m.node_map[i], ref->dir, ref->port};
  }
  return std::nullopt;
}

std::optional<std::string> UnionGraph::to_app(AppId app_id, const Vertex& v) const {
  const AppMapping& m = app(app_id);
  for (std::size_t i = 0; i < m.node_map.size(); ++i) {
    if (m.node_map[i] == v.node) {
      return m.node_ids[i] + (v.dir == Direction::In ? ".in" : ".out") + std::to_string(v.port);
    }
  }
  return std::nullopt;
}

UnionGraph build_union_nodes(std::span<const DataflowGraph> graphs,
                             const std::vector<std::vector<LabeledNode>>& labels) {
  struct TypeInfo {
    std::uint32_t copies = 0;
    std::uint32_t in_arity = 0;
    std::uint32_t out_arity = 0;
    std::string first_seen;
  };
  std::map<TypeLabel, TypeInfo> types;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const auto nodes = graphs[gi].nodes();
    for (std::size_t ni = 0; ni < nodes.size(); ++ni) {
      const Node& n = nodes[ni];
      auto [it, inserted] = types.try_emplace(n.type);
      TypeInfo& info = it->second;
      if (inserted) {
        info.in_arity = n.in_arity;
        info.out_arity = n.out_arity;
        info.first_seen = graphs[gi].name() + ":" + n.id;
      } else if (info.in_arity != n.in_arity || info.out_arity != n.out_arity) {
        throw GraphError("type '" + n.type.str() + "' has in=" + std::to_string(n.in_arity) + " out=" +
                         std::to_string(n.out_arity) + " at " + graphs[gi].name() + ":" + n.id + " but in=" +
                         std::to_string(info.in_arity) + " out=" + std::to_string(info.out_arity) + " at " +
                         info.first_seen);
      }
      info.copies = std::max(info.copies, labels[gi][ni].occurrence);
    }
  }

  UnionGraph u;
  std::map<std::pair<TypeLabel, std::uint32_t>, NodeIndex> index;
  for (const auto& [type, info] : types) {
    for (std::uint32_t m = 1; m <= info.copies; ++m) {
      index[{type, m}] = u.nodes.size();
      u.nodes.push_back({type, m, info.in_arity, info.out_arity});
    }
  }
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    AppMapping& map = u.apps.emplace_back();
    map.name = graphs[gi].name();
    for (std::size_t ni = 0; ni < graphs[gi].nodes().size(); ++ni) {
      const LabeledNode& l = labels[gi][ni];
      map.node_ids.push_back(graphs[gi].node(ni).id);
      map.node_map.push_back(index.at({l.type, l.occurrence}));
    }
  }
  return u;
}

void build_union_edges(std::span<const DataflowGraph> graphs, UnionGraph& u) {
  std::map<std::pair<Vertex, std::vector<Vertex>>, EdgeIndex> by_signature;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const AppId app = static_cast<AppId>(gi + 1);
    AppMapping& map = u.apps.at(gi);
    map.edge_map.clear();
    std::set<Vertex> driven;
    std::set<Vertex> loaded;
    for (const Edge& e : graphs[gi].edges()) {
      const Vertex driver{map.node_map.at(e.driver.node), Direction::Out, e.driver.port};
      std::vector<Vertex> loads;
      for (const Vertex& l : e.loads) loads.push_back({map.node_map.at(l.node), Direction::In, l.port});
      std::sort(loads.begin(), loads.end());

      if (!driven.insert(driver).second) {
        throw GraphError("application '" + map.name + "' drives union vertex " + u.vertex_name(driver) +
                         " from two edges");
      }
      for (const Vertex& l : loads) {
        if (!loaded.insert(l).second) {
          throw GraphError("application '" + map.name + "' loads union vertex " + u.vertex_name(l) +
                           " from two edges");
        }
      }

      auto key = std::make_pair(driver, loads);
      auto it = by_signature.find(key);
      EdgeIndex idx;
      if (it == by_signature.end()) {
        idx = u.edges.size();
        u.edges.push_back({driver, std::move(loads), {app}});
        by_signature.emplace(std::move(key), idx);
      } else {
        idx = it->second;
        ColorSet& colors = u.edges[idx].colors;
        if (!has_color(colors, app)) colors.insert(std::upper_bound(colors.begin(), colors.end(), app), app);
      }
      map.edge_map.push_back(idx);
    }
  }
}

std::vector<ColorSet> combination_order(const UnionGraph& u, std::optional<std::uint64_t> seed) {
  std::set<ColorSet> distinct;
  for (const UnionEdge& e : u.edges) distinct.insert(e.colors);
  std::vector<ColorSet> order(distinct.begin(), distinct.end());
  std::stable_sort(order.begin(), order.end(),
                   [](const ColorSet& a, const ColorSet& b) { return a.size() > b.size(); });
  if (seed) {
    // Few draws per call; a heavier engine's seeding dominated the runtime.
    std::minstd_rand rng(static_cast<std::uint32_t>(*seed ^ (*seed >> 32)));
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

Marks pack_in_order(const UnionGraph& u, std::span<const ColorSet> order) {
  constexpr std::uint32_t kUnmarked = ~std::uint32_t{0};
  Marks marks(u.nodes.size(), kUnmarked);

  std::vector<std::vector<EdgeIndex>> incident(u.nodes.size());
  for (EdgeIndex e = 0; e < u.edges.size(); ++e) {
    incident[u.edges[e].driver.node].push_back(e);
    for (const Vertex& l : u.edges[e].loads) incident[l.node].push_back(e);
  }
  std::vector<NodeIndex> frontier;
  const auto claim = [&](EdgeIndex e, std::uint32_t q) {
    const auto take = [&](NodeIndex n) {
      if (marks[n] != kUnmarked) return;
      marks[n] = q;
      frontier.push_back(n);
    };
    take(u.edges[e].driver.node);
    for (const Vertex& l : u.edges[e].loads) take(l.node);
  };

  std::uint32_t q = 0;
  for (const ColorSet& combo : order) {
    for (EdgeIndex seed_edge = 0; seed_edge < u.edges.size(); ++seed_edge) {
      if (u.edges[seed_edge].colors != combo) continue;
      claim(seed_edge, q);
      if (frontier.empty()) continue;
      // Expand only through nodes marked by this flood.
      while (!frontier.empty()) {
        const NodeIndex n = frontier.back();
        frontier.pop_back();
        for (EdgeIndex e : incident[n]) {
          if (u.edges[e].colors == combo) claim(e, q);
        }
      }
      ++q;
    }
  }
  for (auto& m : marks) {
    if (m == kUnmarked) m = q++;
  }
  return marks;
}

Marks pack(const UnionGraph& u, std::optional<std::uint64_t> seed) {
  const auto order = combination_order(u, seed);
  return pack_in_order(u, order);
}

bool PackedGraph::is_external(EdgeIndex e) const {
  return std::binary_search(external_edges.begin(), external_edges.end(), e);
}

PackedGraph divide(const UnionGraph& u, const Marks& marks) {
  if (marks.size() != u.nodes.size()) throw GraphError("marks must cover every union node");
  std::vector<std::uint32_t> distinct(marks.begin(), marks.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  PackedGraph p;
  for (std::uint32_t m : distinct) p.packs.push_back({m, {}, {}});
  p.pack_of.resize(u.nodes.size());
  for (NodeIndex n = 0; n < u.nodes.size(); ++n) {
    const auto idx = static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), marks[n]) - distinct.begin());
    p.pack_of[n] = idx;
    p.packs[idx].nodes.push_back(n);
  }

  std::vector<std::set<Vertex>> ports(p.packs.size());
  for (EdgeIndex e = 0; e < u.edges.size(); ++e) {
    const UnionEdge& edge = u.edges[e];
    const std::size_t home = p.pack_of[edge.driver.node];
    const bool internal = std::all_of(edge.loads.begin(), edge.loads.end(),
                                      [&](const Vertex& l) { return p.pack_of[l.node] == home; });
    if (internal) {
      p.internal_edges.push_back(e);
    } else {
      p.external_edges.push_back(e);
      ports[home].insert(edge.driver);
      for (const Vertex& l : edge.loads) ports[p.pack_of[l.node]].insert(l);
    }
  }
  for (AppId a = 1; a <= u.app_count(); ++a) {
    for (const Vertex& v : u.boundary_inputs(a)) ports[p.pack_of[v.node]].insert(v);
    for (const Vertex& v : u.boundary_outputs(a)) ports[p.pack_of[v.node]].insert(v);
  }
  for (std::size_t i = 0; i < p.packs.size(); ++i) p.packs[i].ports.assign(ports[i].begin(), ports[i].end());
  return p;
}

MergeResult merge(std::span<const DataflowGraph> graphs, std::optional<std::uint64_t> seed) {
  const auto labels = label_nodes(graphs);
  MergeResult r;
  r.union_graph = build_union_nodes(graphs, labels);
  build_union_edges(graphs, r.union_graph);
  r.marks = pack(r.union_graph, seed);
  r.packed = divide(r.union_graph, r.marks);
  return r;
}

std::uint64_t area(const UnionGraph& u, const PackedGraph& packed, const AreaTable& table) {
  std::uint64_t total = 0;
  for (const UnionNode& n : u.nodes) {
    auto it = table.intrinsic.find(n.type.str());
    if (it == table.intrinsic.end()) throw Error("area table has no entry for type '" + n.type.str() + "'");
    total += it->second;
  }
  return total + packed.packs.size() * table.router_area;
}

AreaTable parse_area_table(std::string_view doc) {
  AreaTable t;
  bool router_seen = false;
  for (const auto& line : text::split_lines(doc, true)) {
    if (line.words.size() != 2) throw ParseError("expected '<TYPE> <uint>'", line.number, line.words[0].column);
    const auto name = line.words[0].text;
    const auto value = text::parse_uint(line.words[1].text, line.number, line.words[1].column);
    if (name == "ROUTER") {
      t.router_area = value;
      router_seen = true;
      continue;
    }
    if (!TypeLabel::is_valid(name)) throw ParseError("invalid type label '" + std::string(name) + "'", line.number, line.words[0].column);
    if (!t.intrinsic.emplace(std::string(name), value).second) {
      throw ParseError("duplicate area entry for '" + std::string(name) + "'", line.number, line.words[0].column);
    }
  }
  if (!router_seen) throw ParseError("area table lacks a ROUTER line", 0);
  return t;
}

}  // namespace sdfnoc
