#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sdfnoc {

using NodeIndex = std::size_t;
using EdgeIndex = std::size_t;

/// Operator type name, e.g. GAUSS3 or ADDER. Must match [A-Za-z_][A-Za-z0-9_]*.
class TypeLabel {
 public:
  TypeLabel() = default;
  explicit TypeLabel(std::string name);

  static bool is_valid(std::string_view name);

  const std::string& str() const { return name_; }

  friend auto operator<=>(const TypeLabel&, const TypeLabel&) = default;

 private:
  std::string name_;
};

enum class Direction : std::uint8_t { In, Out };

/// A port of a node. `node` indexes into the owning graph's node list.
struct Vertex {
  NodeIndex node = 0;
  Direction dir = Direction::In;
  std::uint32_t port = 0;

  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

inline Vertex in_port(NodeIndex node, std::uint32_t port) { return {node, Direction::In, port}; }
inline Vertex out_port(NodeIndex node, std::uint32_t port) { return {node, Direction::Out, port}; }

struct Node {
  std::string id;
  TypeLabel type;
  std::uint32_t in_arity = 0;
  std::uint32_t out_arity = 0;
};

/// One driver, one or more loads.
struct Edge {
  Vertex driver;
  std::vector<Vertex> loads;
};

/// An application dataflow graph. Structural rules (port ranges, single
/// driver per Out vertex, single load per In vertex) are enforced on insertion;
/// acyclicity is checked separately by find_cycle().
class DataflowGraph {
 public:
  DataflowGraph() = default;
  explicit DataflowGraph(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  NodeIndex add_node(Node node);
  EdgeIndex add_edge(Edge edge);

  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Edge> edges() const { return edges_; }
  const Node& node(NodeIndex i) const { return nodes_.at(i); }
  const Edge& edge(EdgeIndex i) const { return edges_.at(i); }

  std::optional<NodeIndex> find_node(std::string_view id) const;
  std::optional<EdgeIndex> edge_driven_by(const Vertex& out) const;
  std::optional<EdgeIndex> edge_loading(const Vertex& in) const;

  /// Unconnected In ports (system inputs), sorted.
  std::vector<Vertex> boundary_inputs() const;
  /// Unconnected Out ports (system outputs), sorted.
  std::vector<Vertex> boundary_outputs() const;

  /// Node-level successor lists, duplicates removed, ascending.
  std::vector<std::vector<NodeIndex>> successors() const;

  /// "node.in0" / "node.out2"
  std::string vertex_name(const Vertex& v) const;
  /// Inverse of vertex_name; nullopt when the node or port does not exist.
  std::optional<Vertex> parse_vertex(std::string_view text) const;

 private:
  void check_vertex(const Vertex& v) const;

  std::string name_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, NodeIndex> by_id_;
  std::vector<std::vector<std::optional<EdgeIndex>>> driver_of_;  // per node, per out port
  std::vector<std::vector<std::optional<EdgeIndex>>> load_of_;    // per node, per in port
};

/// Splits "name.in3" into ("name", In, 3). Returns nullopt on malformed text.
struct VertexRef {
  std::string node;
  Direction dir;
  std::uint32_t port;
};
std::optional<VertexRef> split_vertex_ref(std::string_view text);

/// Returns one witness cycle as a node-index sequence, or nullopt when the
/// node-level graph is acyclic.
std::optional<std::vector<NodeIndex>> find_cycle(const DataflowGraph& g);

/// Throws GraphError naming the cycle when g is not acyclic.
void validate_acyclic(const DataflowGraph& g);

/// Nodes in a topological order (Kahn, smallest index first).
/// Throws GraphError on a cycle.
std::vector<NodeIndex> topological_order(const DataflowGraph& g);

/// Keeps the nodes from which some vertex in `outputs` is reachable.
/// Loads on removed nodes are dropped; edges left without loads are dropped.
/// Node ids are preserved. Throws GraphError for unknown or non-Out vertices.
DataflowGraph eliminate_dead_nodes(const DataflowGraph& g, const std::set<Vertex>& outputs);

}  // namespace sdfnoc
