#include "support.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "sdfnoc/error.hpp"
#include "sdfnoc/imaging.hpp"

namespace sdfnoc::testing {

namespace {

struct TypeSpec {
  const char* name;
  std::uint32_t in;
  std::uint32_t out;
};

constexpr TypeSpec kTypes[] = {
    {"ID", 1, 1}, {"INC", 1, 1}, {"ADDER", 2, 1}, {"MUL", 2, 1}, {"FORK", 1, 2}, {"CONST", 0, 1},
};

}  // namespace

DataflowGraph random_dag(Rng& rng, const std::string& name, const GraphShape& shape) {
  std::uniform_int_distribution<std::size_t> count(shape.min_nodes, shape.max_nodes);
  std::uniform_int_distribution<std::size_t> pick_type(0, std::size(kTypes) - 1);
  std::bernoulli_distribution wire(shape.connect);
  const std::size_t n = count(rng);

  // rank[i] is node i's position in a hidden topological order.
  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  std::shuffle(rank.begin(), rank.end(), rng);

  DataflowGraph g(name);
  for (std::size_t i = 0; i < n; ++i) {
    const TypeSpec& t = kTypes[pick_type(rng)];
    g.add_node({"n" + std::to_string(i), TypeLabel(t.name), t.in, t.out});
  }
  std::map<Vertex, std::vector<Vertex>> loads_of;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::uint32_t p = 0; p < g.node(j).in_arity; ++p) {
      if (!wire(rng)) continue;
      std::vector<Vertex> drivers;
      for (std::size_t i = 0; i < n; ++i) {
        if (rank[i] >= rank[j]) continue;
        for (std::uint32_t q = 0; q < g.node(i).out_arity; ++q) drivers.push_back(out_port(i, q));
      }
      if (drivers.empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, drivers.size() - 1);
      loads_of[drivers[pick(rng)]].push_back(in_port(j, p));
    }
  }
  for (auto& [d, loads] : loads_of) g.add_edge({d, loads});
  return g;
}

std::vector<DataflowGraph> random_graph_set(Rng& rng, std::size_t max_apps, const GraphShape& shape) {
  std::uniform_int_distribution<std::size_t> apps(1, max_apps);
  std::vector<DataflowGraph> out;
  const std::size_t k = apps(rng);
  for (std::size_t i = 0; i < k; ++i) out.push_back(random_dag(rng, "a" + std::to_string(i + 1), shape));
  return out;
}

DataflowGraph random_digraph(Rng& rng, std::size_t nodes, double density) {
  // Every node has one output and `nodes` inputs so any node pair can be joined.
  DataflowGraph g("cyc");
  for (std::size_t i = 0; i < nodes; ++i) {
    g.add_node({"v" + std::to_string(i), TypeLabel("N"), static_cast<std::uint32_t>(nodes), 1});
  }
  std::bernoulli_distribution take(density);
  for (std::size_t i = 0; i < nodes; ++i) {
    std::vector<Vertex> loads;
    for (std::size_t j = 0; j < nodes; ++j) {
      if (take(rng)) loads.push_back(in_port(j, static_cast<std::uint32_t>(i)));
    }
    if (!loads.empty()) g.add_edge({out_port(i, 0), loads});
  }
  return g;
}

UnionGraph random_colored_union(Rng& rng, std::size_t nodes, std::size_t max_edges, AppId colors) {
  UnionGraph u;
  for (AppId a = 1; a <= colors; ++a) u.apps.push_back({"c" + std::to_string(a), {}, {}, {}});
  // Enough ports that any node can drive or load any number of edges.
  const auto ports = static_cast<std::uint32_t>(max_edges + 1);
  for (std::size_t i = 0; i < nodes; ++i) u.nodes.push_back({TypeLabel("T"), static_cast<std::uint32_t>(i + 1), ports, ports});

  std::uniform_int_distribution<std::size_t> edge_count(0, max_edges);
  std::uniform_int_distribution<std::size_t> node(0, nodes - 1);
  std::uniform_int_distribution<std::uint32_t> mask(1, (1u << colors) - 1);
  std::uniform_int_distribution<int> fanout(1, 3);
  const std::size_t m = edge_count(rng);
  for (std::size_t e = 0; e < m; ++e) {
    UnionEdge edge;
    edge.driver = out_port(node(rng), static_cast<std::uint32_t>(e));
    const int f = fanout(rng);
    for (int k = 0; k < f; ++k) {
      Vertex l = in_port(node(rng), static_cast<std::uint32_t>(e));
      if (std::find(edge.loads.begin(), edge.loads.end(), l) == edge.loads.end()) edge.loads.push_back(l);
    }
    std::sort(edge.loads.begin(), edge.loads.end());
    const std::uint32_t bits = mask(rng);
    for (AppId a = 1; a <= colors; ++a) {
      if (bits & (1u << (a - 1))) edge.colors.push_back(a);
    }
    u.edges.push_back(std::move(edge));
  }
  return u;
}

StreamMap random_inputs(Rng& rng, const DataflowGraph& g, std::size_t length, double null_rate) {
  std::uniform_int_distribution<std::int64_t> value(-1000, 1000);
  std::bernoulli_distribution null(null_rate);
  StreamMap out;
  for (const Vertex& v : g.boundary_inputs()) {
    Stream s;
    for (std::size_t k = 0; k < length; ++k) {
      if (null(rng)) {
        s.emplace_back(NullToken{});
      } else {
        s.emplace_back(value(rng));
      }
    }
    out.emplace(v, std::move(s));
  }
  return out;
}

OperatorRegistry scalar_registry() {
  OperatorRegistry reg = standard_registry();
  reg.add("FORK", {1, 2, [](std::span<const Token> in) -> std::vector<Token> { return {in[0], in[0]}; }});
  reg.add("INC", {1, 1, [](std::span<const Token> in) -> std::vector<Token> {
                    if (!std::holds_alternative<std::int64_t>(in[0])) throw OperatorError("INC needs a scalar");
                    return {static_cast<std::int64_t>(static_cast<std::uint64_t>(std::get<std::int64_t>(in[0])) + 1)};
                  }});
  return reg;
}

bool has_cycle_oracle(const DataflowGraph& g) {
  const std::size_t n = g.nodes().size();
  std::vector<std::vector<NodeIndex>> adj(n);
  for (const Edge& e : g.edges()) {
    for (const Vertex& l : e.loads) adj[e.driver.node].push_back(l.node);
  }
  std::vector<int> color(n, 0);  // 0 white, 1 grey, 2 black
  std::function<bool(NodeIndex)> visit = [&](NodeIndex v) {
    color[v] = 1;
    for (NodeIndex w : adj[v]) {
      if (color[w] == 1) return true;
      if (color[w] == 0 && visit(w)) return true;
    }
    color[v] = 2;
    return false;
  };
  for (NodeIndex v = 0; v < n; ++v) {
    if (color[v] == 0 && visit(v)) return true;
  }
  return false;
}

std::set<std::string> live_nodes_oracle(const DataflowGraph& g, const std::set<Vertex>& outputs) {
  const std::size_t n = g.nodes().size();
  std::vector<std::set<NodeIndex>> next(n);
  for (const Edge& e : g.edges()) {
    for (const Vertex& l : e.loads) next[e.driver.node].insert(l.node);
  }
  std::set<NodeIndex> targets;
  for (const Vertex& v : outputs) targets.insert(v.node);

  std::set<std::string> live;
  for (NodeIndex start = 0; start < n; ++start) {
    std::vector<bool> seen(n, false);
    std::vector<NodeIndex> stack{start};
    seen[start] = true;
    bool hit = false;
    while (!stack.empty() && !hit) {
      const NodeIndex v = stack.back();
      stack.pop_back();
      hit = targets.contains(v);
      for (NodeIndex w : next[v]) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    if (hit) live.insert(g.node(start).id);
  }
  return live;
}

std::map<std::string, std::uint32_t> copy_count_oracle(std::span<const DataflowGraph> graphs) {
  std::map<std::string, std::uint32_t> best;
  for (const DataflowGraph& g : graphs) {
    std::map<std::string, std::uint32_t> here;
    for (const Node& n : g.nodes()) ++here[n.type.str()];
    for (const auto& [t, c] : here) best[t] = std::max(best[t], c);
  }
  return best;
}

Marks flood_oracle(const UnionGraph& u, std::span<const ColorSet> order) {
  constexpr std::uint32_t none = ~std::uint32_t{0};
  Marks marks(u.nodes.size(), none);
  const auto ends = [&](const UnionEdge& e) {
    std::set<NodeIndex> s{e.driver.node};
    for (const Vertex& l : e.loads) s.insert(l.node);
    return s;
  };
  std::uint32_t q = 0;
  for (const ColorSet& combo : order) {
    for (const UnionEdge& seed : u.edges) {
      if (seed.colors != combo) continue;
      std::set<NodeIndex> region;
      for (NodeIndex v : ends(seed)) {
        if (marks[v] == none) region.insert(v);
      }
      if (region.empty()) continue;
      // Grow to a fixed point: any same-combination edge touching the region
      // pulls in its still-unmarked endpoints.
      for (bool grew = true; grew;) {
        grew = false;
        for (const UnionEdge& e : u.edges) {
          if (e.colors != combo) continue;
          const auto s = ends(e);
          if (std::none_of(s.begin(), s.end(), [&](NodeIndex v) { return region.contains(v); })) continue;
          for (NodeIndex v : s) {
            if (marks[v] == none && region.insert(v).second) grew = true;
          }
        }
      }
      for (NodeIndex v : region) marks[v] = q;
      ++q;
    }
  }
  for (auto& m : marks) {
    if (m == none) m = q++;
  }
  return marks;
}

bool same_partition(const Marks& a, const Marks& b) {
  if (a.size() != b.size()) return false;
  std::map<std::uint32_t, std::uint32_t> ab;
  std::map<std::uint32_t, std::uint32_t> ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [x, fx] = ab.emplace(a[i], b[i]);
    auto [y, fy] = ba.emplace(b[i], a[i]);
    if (x->second != b[i] || y->second != a[i]) return false;
  }
  return true;
}

std::string isomorphism_failure(std::span<const DataflowGraph> graphs, const UnionGraph& u, AppId app) {
  const DataflowGraph& g = graphs[app - 1];
  // Node map recovered by id, then checked for type preservation and injectivity.
  std::map<std::string, NodeIndex> node_map;
  const AppMapping& m = u.app(app);
  if (m.node_ids.size() != g.nodes().size()) return "node count differs";
  for (std::size_t i = 0; i < m.node_ids.size(); ++i) node_map[m.node_ids[i]] = m.node_map[i];
  std::set<NodeIndex> image;
  for (const Node& n : g.nodes()) {
    auto it = node_map.find(n.id);
    if (it == node_map.end()) return "node " + n.id + " unmapped";
    const UnionNode& un = u.nodes.at(it->second);
    if (un.type != n.type || un.in_arity != n.in_arity || un.out_arity != n.out_arity) {
      return "node " + n.id + " maps to a node of another type";
    }
    if (!image.insert(it->second).second) return "node map not injective at " + n.id;
  }
  const auto map_vertex = [&](const Vertex& v) { return Vertex{node_map.at(g.node(v.node).id), v.dir, v.port}; };

  // Image of every app edge exists with color `app`; nothing else carries it.
  std::size_t colored = 0;
  for (const UnionEdge& ue : u.edges) colored += has_color(ue.colors, app) ? 1 : 0;
  if (colored != g.edges().size()) return "color " + std::to_string(app) + " is on the wrong number of union edges";
  for (const Edge& e : g.edges()) {
    std::vector<Vertex> loads;
    for (const Vertex& l : e.loads) loads.push_back(map_vertex(l));
    std::sort(loads.begin(), loads.end());
    const Vertex d = map_vertex(e.driver);
    const bool found = std::any_of(u.edges.begin(), u.edges.end(), [&](const UnionEdge& ue) {
      return ue.driver == d && ue.loads == loads && has_color(ue.colors, app);
    });
    if (!found) return "edge from " + g.vertex_name(e.driver) + " has no colored image";
  }
  return {};
}

StreamMap reference_outputs(const DataflowGraph& g, const UnionGraph& u, AppId app, const StreamMap& union_inputs,
                            const OperatorRegistry& registry, std::size_t length) {
  StreamMap app_inputs;
  for (const auto& [v, s] : union_inputs) {
    auto name = u.to_app(app, v);
    auto av = g.parse_vertex(*name);
    app_inputs.emplace(*av, s);
  }
  StreamMap out;
  for (const auto& [v, s] : evaluate(g, app_inputs, registry, length)) out.emplace(*u.to_union(app, g.vertex_name(v)), s);
  return out;
}

}  // namespace sdfnoc::testing
