#pragma once

#include <string>

#include "sdfnoc/design.hpp"
#include "sdfnoc/graph.hpp"

namespace sdfnoc {

std::string to_dot(const DataflowGraph& g);
/// Packs become clusters; edge labels are color sets.
std::string to_dot(const UnionGraph& u, const PackedGraph& packed);
/// Mesh routers as a grid with hosted vertices and routed links. Falls back to
/// the union view when the design is not placed.
std::string to_dot(const Design& d);

}  // namespace sdfnoc
