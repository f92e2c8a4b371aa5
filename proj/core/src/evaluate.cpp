#include "sdfnoc/evaluate.hpp"

#include <optional>

#include "sdfnoc/error.hpp"

namespace sdfnoc {

namespace {

void check_topological(const DataflowGraph& g, std::span<const NodeIndex> order) {
  const std::size_t n = g.nodes().size();
  if (order.size() != n) throw GraphError("evaluation order must list every node exactly once");
  std::vector<std::size_t> position(n, n);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] >= n || position[order[i]] != n) throw GraphError("evaluation order must list every node exactly once");
    position[order[i]] = i;
  }
  for (const Edge& e : g.edges()) {
    for (const Vertex& l : e.loads) {
      if (position[e.driver.node] >= position[l.node]) {
        throw GraphError("evaluation order is not topological at '" + g.node(l.node).id + "'");
      }
    }
  }
}

}  // namespace

StreamMap evaluate(const DataflowGraph& g, const StreamMap& inputs, const OperatorRegistry& registry,
                   std::size_t length) {
  const auto order = topological_order(g);
  return evaluate(g, inputs, registry, order, length);
}

StreamMap evaluate(const DataflowGraph& g, const StreamMap& inputs, const OperatorRegistry& registry,
                   std::span<const NodeIndex> order, std::size_t length) {
  check_topological(g, order);

  for (const Node& n : g.nodes()) {
    const Operator* op = registry.find(n.type.str());
    if (!op) throw OperatorError("no registry entry for type '" + n.type.str() + "' (node '" + n.id + "')");
    if (op->in_arity != n.in_arity || op->out_arity != n.out_arity) {
      throw OperatorError("node '" + n.id + "' declares in=" + std::to_string(n.in_arity) + " out=" +
                          std::to_string(n.out_arity) + " but type '" + n.type.str() + "' has in=" +
                          std::to_string(op->in_arity) + " out=" + std::to_string(op->out_arity));
    }
  }

  const auto boundary_in = g.boundary_inputs();
  std::optional<std::size_t> common;
  for (const Vertex& v : boundary_in) {
    auto it = inputs.find(v);
    if (it == inputs.end()) throw GraphError("missing input stream for " + g.vertex_name(v));
    if (common && *common != it->second.size()) throw GraphError("input streams have unequal lengths");
    common = it->second.size();
  }
  if (inputs.size() != boundary_in.size()) {
    for (const auto& [v, s] : inputs) {
      if (v.dir != Direction::In || !g.parse_vertex(g.vertex_name(v)) || g.edge_loading(v)) {
        throw GraphError("input stream given for non-boundary vertex " + g.vertex_name(v));
      }
    }
  }
  const std::size_t L = common.value_or(length);

  StreamMap result;
  const auto boundary_out = g.boundary_outputs();
  for (const Vertex& v : boundary_out) result[v].reserve(L);

  std::vector<std::vector<Token>> produced(g.nodes().size());
  std::vector<Token> args;
  for (std::size_t k = 0; k < L; ++k) {
    for (NodeIndex n : order) {
      const Node& node = g.node(n);
      args.clear();
      for (std::uint32_t p = 0; p < node.in_arity; ++p) {
        const Vertex v = in_port(n, p);
        if (auto e = g.edge_loading(v)) {
          const Vertex& d = g.edge(*e).driver;
          args.push_back(produced[d.node][d.port]);
        } else {
          args.push_back(inputs.at(v)[k]);
        }
      }
      produced[n] = registry.fire(node.type.str(), args);
    }
    for (const Vertex& v : boundary_out) result[v].push_back(produced[v.node][v.port]);
  }
  return result;
}

}  // namespace sdfnoc
