#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sdfnoc/merge.hpp"
#include "sdfnoc/noc.hpp"

namespace sdfnoc {

/// Union vertex -> router whose Local port hosts it.
struct Placement {
  std::map<Vertex, Coord> sites;

  std::optional<Coord> site(const Vertex& v) const;
  /// Reverse lookup; nullopt when the router hosts nothing.
  std::optional<Vertex> vertex_at(const Coord& c) const;

  friend bool operator==(const Placement&, const Placement&) = default;
};

/// External union edge -> links, in the order the router added them.
using RouteSet = std::map<EdgeIndex, std::vector<Link>>;

/// Vertices that need a Local port: every pack port (external edge endpoints
/// and system I/O of any application), ordered by pack then vertex.
std::vector<Vertex> placeable_vertices(const PackedGraph& packed);

/// Half-perimeter wirelength of every external edge, counted once per color,
/// plus the bounding-box spread of each pack's ports.
std::int64_t placement_cost(const UnionGraph& u, const PackedGraph& packed, const Placement& placement);

/// Greedy constructive placement in BFS order followed by annealing swaps.
/// Deterministic for a given seed. Throws CapacityError when the mesh has
/// fewer routers than placeable vertices.
Placement place(const UnionGraph& u, const PackedGraph& packed, const MeshNoC& noc, std::uint64_t seed);

struct RouteOptions {
  unsigned max_iterations = 50;
};

/// Routes every external edge as a driver-rooted tree. Edges whose color sets
/// intersect never share a wire or a Local output. Throws RoutingError naming
/// the blocked edges when conflicts survive max_iterations rip-up rounds.
RouteSet route(const UnionGraph& u, const PackedGraph& packed, const MeshNoC& noc, const Placement& placement,
               const RouteOptions& options = {});

/// Crossbar connections induced by the routes of every external edge carrying
/// color `app`. No validation.
CrossbarConfig collect_config(const UnionGraph& u, const RouteSet& routes, AppId app);

/// collect_config() followed by validate_config(); throws RoutingError when the
/// result is invalid.
CrossbarConfig derive_config(const MeshNoC& noc, const UnionGraph& u, const RouteSet& routes, AppId app);

struct PnrViolation {
  enum class Kind {
    Unplaced,
    BadSite,
    NotInjective,
    MissingRoute,
    UnexpectedRoute,
    BadLink,
    NotTree,
    Disconnected,
    StraySink,
    Conflict,
    Config,
  };

  Kind kind;
  std::optional<EdgeIndex> edge;
  std::string message;
};

/// Verifies the three map/route constraints plus per-application config
/// validity. Does not share code with place() or route().
std::vector<PnrViolation> check(const UnionGraph& u, const PackedGraph& packed, const MeshNoC& noc,
                                const Placement& placement, const RouteSet& routes);

struct PnrResult {
  MeshNoC noc{1, 1};
  std::uint64_t seed = 0;
  Placement placement;
  RouteSet routes;
  std::vector<CrossbarConfig> configs;    // configs[i] is for AppId i + 1
  std::vector<std::size_t> links_per_app;  // route links switched on per app
  std::int64_t wirelength = 0;             // placement_cost of the final placement
};

/// place() + route() + derive_config() for every application.
PnrResult place_and_route(const UnionGraph& u, const PackedGraph& packed, const MeshNoC& noc, std::uint64_t seed,
                          const RouteOptions& options = {});

}  // namespace sdfnoc
