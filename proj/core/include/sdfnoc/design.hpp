#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "sdfnoc/merge.hpp"
#include "sdfnoc/pnr.hpp"

namespace sdfnoc {

/// Everything downstream tools need about a merged, possibly placed design.
struct Design {
  UnionGraph union_graph;
  PackedGraph packed;
  Marks marks;
  std::optional<PnrResult> pnr;
};

/// Union document:
///
///   union
///   app <i> <name>
///   node <TYPE>#<m> in=<uint> out=<uint>
///   edge <TYPE>#<m>.out<k> -> <TYPE>#<m>.in<j> ... colors={i,j}
///   pack <q>: <TYPE>#<m> ...
///   map <app>:<nodeid> -> <TYPE>#<m>
///
/// Edge numbering (e0, e1, ...) follows line order.
std::string write_union(const UnionGraph& u, const Marks& marks);

/// Rebuilds the union, the marks and the packed graph. Throws ParseError.
Design parse_union(std::string_view text);

/// PnR document: "pnr mesh=<r>x<c> seed=<s>", the union section, then
///
///   place <pack>.<TYPE>#<m>.<port> -> (<r>,<c>)
///   route e<k>: <link> <link> ...
///
/// Configs, link counts and wirelength are recomputed on parse.
std::string write_pnr(const UnionGraph& u, const Marks& marks, const PackedGraph& packed, const PnrResult& pnr);
Design parse_pnr(std::string_view text);

/// Merged-then-placed design in one call.
Design build_design(std::span<const DataflowGraph> graphs, const MeshNoC& noc, std::uint64_t seed,
                    const RouteOptions& options = {});

}  // namespace sdfnoc
