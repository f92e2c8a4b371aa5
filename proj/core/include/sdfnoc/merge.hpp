#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdfnoc/graph.hpp"

namespace sdfnoc {

/// Application index, 1..N in input order. Doubles as edge color.
using AppId = std::uint32_t;

/// Sorted, duplicate-free set of application colors.
using ColorSet = std::vector<AppId>;

bool colors_intersect(const ColorSet& a, const ColorSet& b);
bool has_color(const ColorSet& set, AppId app);
std::string format_colors(const ColorSet& set);  // "{1,2}"

/// Node label: type, m-th occurrence of that type, application n.
struct LabeledNode {
  TypeLabel type;
  std::uint32_t occurrence = 0;
  AppId app = 0;

  friend bool operator==(const LabeledNode&, const LabeledNode&) = default;
};

/// Per graph, per node: its label. Occurrences count in declaration order.
std::vector<std::vector<LabeledNode>> label_nodes(std::span<const DataflowGraph> graphs);

struct UnionNode {
  TypeLabel type;
  std::uint32_t copy = 1;  // 1-based
  std::uint32_t in_arity = 0;
  std::uint32_t out_arity = 0;

  std::string name() const { return type.str() + "#" + std::to_string(copy); }
};

/// Loads are kept sorted so that edges compare as (driver, load set).
struct UnionEdge {
  Vertex driver;
  std::vector<Vertex> loads;
  ColorSet colors;
};

/// How one application graph maps into the union.
struct AppMapping {
  std::string name;
  std::vector<std::string> node_ids;   // application node ids, declaration order
  std::vector<NodeIndex> node_map;     // union node per app node, indexed like node_ids
  std::vector<EdgeIndex> edge_map;     // union edge per app edge; empty when read back from a file
};

struct UnionGraph {
  std::vector<UnionNode> nodes;
  std::vector<UnionEdge> edges;
  std::vector<AppMapping> apps;  // apps[i] has AppId i + 1

  std::size_t app_count() const { return apps.size(); }
  const AppMapping& app(AppId id) const { return apps.at(id - 1); }
  /// Resolves an application by name or by decimal index. Throws Error listing the valid ids.
  AppId find_app(std::string_view name_or_index) const;

  std::optional<NodeIndex> find_node(std::string_view name) const;
  std::string vertex_name(const Vertex& v) const;
  std::optional<Vertex> parse_vertex(std::string_view text) const;

  /// True when some node of application `app` maps onto `node`.
  bool node_active(NodeIndex node, AppId app) const;
  /// The union edge carrying color `app` that loads `in` (at most one exists).
  std::optional<EdgeIndex> edge_loading(const Vertex& in, AppId app) const;
  /// The union edge carrying color `app` driven by `out` (at most one exists).
  std::optional<EdgeIndex> edge_driven_by(const Vertex& out, AppId app) const;

  /// Ports of active nodes not connected by any edge of color `app`.
  std::vector<Vertex> boundary_inputs(AppId app) const;
  std::vector<Vertex> boundary_outputs(AppId app) const;

  /// The node map applied to a vertex named in application terms ("g1.out0").
  std::optional<Vertex> to_union(AppId app, std::string_view app_vertex) const;
  /// Inverse of to_union for an active vertex.
  std::optional<std::string> to_app(AppId app, const Vertex& v) const;
};

/// Per type, max-over-apps copies; occurrence m of a type maps to copy m.
/// Union nodes are ordered by (type, copy). Throws GraphError when a type is
/// declared with different arities in different graphs.
UnionGraph build_union_nodes(std::span<const DataflowGraph> graphs,
                             const std::vector<std::vector<LabeledNode>>& labels);

/// Adds colored union edges and the edge map to `u`. App edges with the same
/// mapped driver and load set share one union edge.
void build_union_edges(std::span<const DataflowGraph> graphs, UnionGraph& u);

/// Node marks, one per union node. Marks are dense and numbered in assignment order.
using Marks = std::vector<std::uint32_t>;

/// Distinct edge color sets in the order packing visits them. Without a seed:
/// larger sets first, ties lexicographic. With a seed: a seeded shuffle.
std::vector<ColorSet> combination_order(const UnionGraph& u, std::optional<std::uint64_t> seed);

/// Flood marking with an explicit combination order.
Marks pack_in_order(const UnionGraph& u, std::span<const ColorSet> order);

/// Flood marking. Deterministic for a given seed (or none).
Marks pack(const UnionGraph& u, std::optional<std::uint64_t> seed = std::nullopt);

struct Pack {
  std::uint32_t mark = 0;
  std::vector<NodeIndex> nodes;
  /// Vertices exposed at the pack boundary: endpoints of external edges and
  /// system I/O of any application. Sorted.
  std::vector<Vertex> ports;
};

struct PackedGraph {
  std::vector<Pack> packs;              // ordered by mark
  std::vector<std::size_t> pack_of;     // per union node
  std::vector<EdgeIndex> internal_edges;
  std::vector<EdgeIndex> external_edges;

  bool is_external(EdgeIndex e) const;
};

/// Packs are mark classes; an edge is internal when its driver and all
/// loads share a pack.
PackedGraph divide(const UnionGraph& u, const Marks& marks);

struct MergeResult {
  UnionGraph union_graph;
  PackedGraph packed;
  Marks marks;
};

MergeResult merge(std::span<const DataflowGraph> graphs, std::optional<std::uint64_t> seed = std::nullopt);

struct AreaTable {
  std::map<std::string, std::uint64_t, std::less<>> intrinsic;
  std::uint64_t router_area = 0;
};

/// Sum of intrinsic node areas plus one router per pack. Throws Error on a
/// type missing from the table.
std::uint64_t area(const UnionGraph& u, const PackedGraph& packed, const AreaTable& table);

/// Lines "<TYPE> <uint>" and "ROUTER <uint>"; '#' comments.
AreaTable parse_area_table(std::string_view text);

}  // namespace sdfnoc
