#include "sdfnoc/graph.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <queue>

#include "sdfnoc/error.hpp"

namespace sdfnoc {

TypeLabel::TypeLabel(std::string name) : name_(std::move(name)) {
  if (!is_valid(name_)) throw GraphError("invalid type label '" + name_ + "'");
}

bool TypeLabel::is_valid(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  if (!alpha(name.front())) return false;
  return std::all_of(name.begin() + 1, name.end(),
                     [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); });
}

NodeIndex DataflowGraph::add_node(Node node) {
  if (node.id.empty()) throw GraphError("node id must not be empty");
  if (by_id_.contains(node.id)) throw GraphError("duplicate node id '" + node.id + "'");
  const NodeIndex idx = nodes_.size();
  by_id_.emplace(node.id, idx);
  driver_of_.emplace_back(node.out_arity);
  load_of_.emplace_back(node.in_arity);
  nodes_.push_back(std::move(node));
  return idx;
}

void DataflowGraph::check_vertex(const Vertex& v) const {
  if (v.node >= nodes_.size()) throw GraphError("edge references unknown node");
  const Node& n = nodes_[v.node];
  const std::uint32_t arity = v.dir == Direction::In ? n.in_arity : n.out_arity;
  if (v.port >= arity) {
    throw GraphError("port index out of range: " + vertex_name(v) + " (node '" + n.id + "' has " +
                     std::to_string(arity) + (v.dir == Direction::In ? " inputs)" : " outputs)"));
  }
}

EdgeIndex DataflowGraph::add_edge(Edge edge) {
  if (edge.driver.dir != Direction::Out) throw GraphError("edge driver must be an Out vertex");
  if (edge.loads.empty()) throw GraphError("edge must have at least one load");
  check_vertex(edge.driver);
  for (std::size_t i = 0; i < edge.loads.size(); ++i) {
    const Vertex& l = edge.loads[i];
    if (l.dir != Direction::In) throw GraphError("edge load must be an In vertex");
    check_vertex(l);
    for (std::size_t j = 0; j < i; ++j) {
      if (edge.loads[j] == l) throw GraphError("duplicate load " + vertex_name(l) + " on one edge");
    }
  }
  if (driver_of_[edge.driver.node][edge.driver.port]) {
    throw GraphError("duplicate driver: " + vertex_name(edge.driver) + " already drives an edge");
  }
  for (const Vertex& l : edge.loads) {
    if (load_of_[l.node][l.port]) {
      throw GraphError("duplicate load: " + vertex_name(l) + " is already loaded by another edge");
    }
  }
  const EdgeIndex idx = edges_.size();
  driver_of_[edge.driver.node][edge.driver.port] = idx;
  for (const Vertex& l : edge.loads) load_of_[l.node][l.port] = idx;
  edges_.push_back(std::move(edge));
  return idx;
}

std::optional<NodeIndex> DataflowGraph::find_node(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeIndex> DataflowGraph::edge_driven_by(const Vertex& out) const {
  if (out.dir != Direction::Out || out.node >= nodes_.size() || out.port >= driver_of_[out.node].size())
    return std::nullopt;
  return driver_of_[out.node][out.port];
}

std::optional<EdgeIndex> DataflowGraph::edge_loading(const Vertex& in) const {
  if (in.dir != Direction::In || in.node >= nodes_.size() || in.port >= load_of_[in.node].size())
    return std::nullopt;
  return load_of_[in.node][in.port];
}

std::vector<Vertex> DataflowGraph::boundary_inputs() const {
  std::vector<Vertex> out;
  for (NodeIndex n = 0; n < nodes_.size(); ++n) {
    for (std::uint32_t p = 0; p < nodes_[n].in_arity; ++p) {
      if (!load_of_[n][p]) out.push_back(in_port(n, p));
    }
  }
  return out;
}

std::vector<Vertex> DataflowGraph::boundary_outputs() const {
  std::vector<Vertex> out;
  for (NodeIndex n = 0; n < nodes_.size(); ++n) {
    for (std::uint32_t p = 0; p < nodes_[n].out_arity; ++p) {
      if (!driver_of_[n][p]) out.push_back(out_port(n, p));
    }
  }
  return out;
}

std::vector<std::vector<NodeIndex>> DataflowGraph::successors() const {
  std::vector<std::vector<NodeIndex>> succ(nodes_.size());
  for (const Edge& e : edges_) {
    for (const Vertex& l : e.loads) succ[e.driver.node].push_back(l.node);
  }
  for (auto& s : succ) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  return succ;
}

std::string DataflowGraph::vertex_name(const Vertex& v) const {
  const std::string node = v.node < nodes_.size() ? nodes_[v.node].id : "?" + std::to_string(v.node);
  return node + (v.dir == Direction::In ? ".in" : ".out") + std::to_string(v.port);
}

std::optional<VertexRef> split_vertex_ref(std::string_view text) {
  const auto dot = text.rfind('.');
  if (dot == std::string_view::npos || dot == 0) return std::nullopt;
  std::string_view node = text.substr(0, dot);
  std::string_view rest = text.substr(dot + 1);
  Direction dir;
  if (rest.starts_with("out")) {
    dir = Direction::Out;
    rest.remove_prefix(3);
  } else if (rest.starts_with("in")) {
    dir = Direction::In;
    rest.remove_prefix(2);
  } else {
    return std::nullopt;
  }
  if (rest.empty()) return std::nullopt;
  std::uint32_t port = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), port);
  if (ec != std::errc() || ptr != rest.data() + rest.size()) return std::nullopt;
  return VertexRef{std::string(node), dir, port};
}

std::optional<Vertex> DataflowGraph::parse_vertex(std::string_view text) const {
  auto ref = split_vertex_ref(text);
  if (!ref) return std::nullopt;
  auto node = find_node(ref->node);
  if (!node) return std::nullopt;
  const Node& n = nodes_[*node];
  if (ref->port >= (ref->dir == Direction::In ? n.in_arity : n.out_arity)) return std::nullopt;
  return Vertex{*node, ref->dir, ref->port};
}

std::optional<std::vector<NodeIndex>> find_cycle(const DataflowGraph& g) {
  const auto succ = g.successors();
  const std::size_t n = succ.size();
  enum : std::uint8_t { White, Grey, Black };
  std::vector<std::uint8_t> colour(n, White);
  std::vector<NodeIndex> parent(n, n);

  for (NodeIndex root = 0; root < n; ++root) {
    if (colour[root] != White) continue;
    // Iterative DFS: stack of (node, next successor position).
    std::vector<std::pair<NodeIndex, std::size_t>> stack{{root, 0}};
    colour[root] = Grey;
    while (!stack.empty()) {
      auto& [u, pos] = stack.back();
      if (pos == succ[u].size()) {
        colour[u] = Black;
        stack.pop_back();
        continue;
      }
      const NodeIndex v = succ[u][pos++];
      if (colour[v] == Grey) {
        std::vector<NodeIndex> cycle;
        for (NodeIndex w = u; w != v; w = parent[w]) cycle.push_back(w);
        cycle.push_back(v);
        std::reverse(cycle.begin(), cycle.end());
        return cycle;
      }
      if (colour[v] == White) {
        colour[v] = Grey;
        parent[v] = u;
        stack.emplace_back(v, 0);
      }
    }
  }
  return std::nullopt;
}

void validate_acyclic(const DataflowGraph& g) {
  if (auto cycle = find_cycle(g)) {
    std::string text;
    for (NodeIndex n : *cycle) text += g.node(n).id + " -> ";
    text += g.node(cycle->front()).id;
    throw GraphError("graph '" + g.name() + "' has a cycle: " + text);
  }
}

std::vector<NodeIndex> topological_order(const DataflowGraph& g) {
  const auto succ = g.successors();
  std::vector<std::size_t> indegree(succ.size(), 0);
  for (const auto& s : succ) {
    for (NodeIndex v : s) ++indegree[v];
  }
  std::priority_queue<NodeIndex, std::vector<NodeIndex>, std::greater<>> ready;
  for (NodeIndex n = 0; n < succ.size(); ++n) {
    if (indegree[n] == 0) ready.push(n);
  }
  std::vector<NodeIndex> order;
  order.reserve(succ.size());
  while (!ready.empty()) {
    const NodeIndex u = ready.top();
    ready.pop();
    order.push_back(u);
    for (NodeIndex v : succ[u]) {
      if (--indegree[v] == 0) ready.push(v);
    }
  }
  if (order.size() != succ.size()) validate_acyclic(g);
  return order;
}

DataflowGraph eliminate_dead_nodes(const DataflowGraph& g, const std::set<Vertex>& outputs) {
  std::vector<std::vector<NodeIndex>> pred(g.nodes().size());
  for (const Edge& e : g.edges()) {
    for (const Vertex& l : e.loads) pred[l.node].push_back(e.driver.node);
  }

  std::vector<bool> live(g.nodes().size(), false);
  std::deque<NodeIndex> work;
  for (const Vertex& v : outputs) {
    if (v.dir != Direction::Out || v.node >= g.nodes().size() || v.port >= g.node(v.node).out_arity) {
      throw GraphError("unknown output vertex " + g.vertex_name(v));
    }
    if (!live[v.node]) {
      live[v.node] = true;
      work.push_back(v.node);
    }
  }
  while (!work.empty()) {
    const NodeIndex u = work.front();
    work.pop_front();
    for (NodeIndex p : pred[u]) {
      if (!live[p]) {
        live[p] = true;
        work.push_back(p);
      }
    }
  }

  DataflowGraph out(g.name());
  std::vector<NodeIndex> remap(g.nodes().size());
  for (NodeIndex n = 0; n < g.nodes().size(); ++n) {
    if (live[n]) remap[n] = out.add_node(g.node(n));
  }
  for (const Edge& e : g.edges()) {
    if (!live[e.driver.node]) continue;
    Edge kept{{remap[e.driver.node], Direction::Out, e.driver.port}, {}};
    for (const Vertex& l : e.loads) {
      if (live[l.node]) kept.loads.push_back({remap[l.node], Direction::In, l.port});
    }
    if (!kept.loads.empty()) out.add_edge(std::move(kept));
  }
  return out;
}

}  // namespace sdfnoc
