#pragma once

#include <map>
#include <span>

#include "sdfnoc/graph.hpp"
#include "sdfnoc/registry.hpp"
#include "sdfnoc/token.hpp"

namespace sdfnoc {

using StreamMap = std::map<Vertex, Stream>;

/// Reference semantics of an application graph: every node fires once per
/// stream index, in topological order. `inputs` must cover exactly the
/// unconnected In ports with streams of equal length; the result holds one
/// stream per unconnected Out port. When the graph has no boundary inputs,
/// `length` gives the number of firings.
StreamMap evaluate(const DataflowGraph& g, const StreamMap& inputs, const OperatorRegistry& registry,
                   std::size_t length = 0);

/// Same, with a caller-chosen node order. Throws GraphError if `order` is not
/// a topological order of g.
StreamMap evaluate(const DataflowGraph& g, const StreamMap& inputs, const OperatorRegistry& registry,
                   std::span<const NodeIndex> order, std::size_t length = 0);

}  // namespace sdfnoc
