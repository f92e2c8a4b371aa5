#pragma once

#include <string>
#include <string_view>

#include "sdfnoc/graph.hpp"

namespace sdfnoc {

/// Parses an application graph document:
///
///   app <ident>
///   node <ident> type=<IDENT> in=<uint> out=<uint>
///   edge <ident>.out<k> -> <ident>.in<j> [<ident>.in<j> ...]
///
/// '#' starts a comment. Nodes must be declared before edges use them.
/// Throws ParseError (with line/column) for syntax and structural errors and
/// GraphError when the graph has a cycle.
DataflowGraph parse_app_graph(std::string_view text);

/// Canonical text form; parse_app_graph(write_app_graph(g)) reproduces g.
std::string write_app_graph(const DataflowGraph& g);

}  // namespace sdfnoc
