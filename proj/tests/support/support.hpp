#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sdfnoc/design.hpp"
#include "sdfnoc/evaluate.hpp"
#include "sdfnoc/graph.hpp"
#include "sdfnoc/merge.hpp"
#include "sdfnoc/registry.hpp"

namespace sdfnoc::testing {

using Rng = std::mt19937_64;

// ---- generators -----------------------------------------------------------

struct GraphShape {
  std::size_t min_nodes = 1;
  std::size_t max_nodes = 15;
  double connect = 0.7;  // chance an In port is wired rather than left as a system input
};

/// Random acyclic application graph over the scalar type set of scalar_registry().
/// Declaration order is shuffled so it is usually not a topological order.
DataflowGraph random_dag(Rng& rng, const std::string& name, const GraphShape& shape = {});

/// 1..max_apps graphs named a1, a2, ...
std::vector<DataflowGraph> random_graph_set(Rng& rng, std::size_t max_apps, const GraphShape& shape = {});

/// Random node-level graph that may contain cycles (edges drawn in any direction).
DataflowGraph random_digraph(Rng& rng, std::size_t nodes, double density);

/// Union graph with `nodes` single-port nodes and random colored edges; only
/// the parts pack()/divide() look at are filled in.
UnionGraph random_colored_union(Rng& rng, std::size_t nodes, std::size_t max_edges, AppId colors);

/// Random scalar input streams covering g's system inputs.
StreamMap random_inputs(Rng& rng, const DataflowGraph& g, std::size_t length, double null_rate = 0.1);

/// Standard library plus FORK (1->2 copy) and INC (1->1, +1), used by the
/// random generators.
OperatorRegistry scalar_registry();

// ---- oracles --------------------------------------------------------------

/// Three-color recursive DFS; true when the node-level graph has a cycle.
bool has_cycle_oracle(const DataflowGraph& g);

/// Nodes from which some vertex in `outputs` can be reached, by a forward
/// search from every node separately.
std::set<std::string> live_nodes_oracle(const DataflowGraph& g, const std::set<Vertex>& outputs);

/// Per type label: max over graphs of the number of nodes with that label.
std::map<std::string, std::uint32_t> copy_count_oracle(std::span<const DataflowGraph> graphs);

/// Flood marking as a per-flood fixed point over the edge list.
Marks flood_oracle(const UnionGraph& u, std::span<const ColorSet> order);

/// True when a and b induce the same partition of node indices.
bool same_partition(const Marks& a, const Marks& b);

/// Empty string when graph `app` of `graphs` embeds into `u` as a port-labelled
/// isomorphic copy whose edges all carry color app; otherwise a description.
std::string isomorphism_failure(std::span<const DataflowGraph> graphs, const UnionGraph& u, AppId app);

/// Evaluates application `app` of a design through the reference semantics of
/// its original graph, keyed by union vertices.
StreamMap reference_outputs(const DataflowGraph& g, const UnionGraph& u, AppId app, const StreamMap& union_inputs,
                            const OperatorRegistry& registry, std::size_t length = 0);

}  // namespace sdfnoc::testing
