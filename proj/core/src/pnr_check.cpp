#include <algorithm>
#include <deque>
#include <set>

#include "sdfnoc/pnr.hpp"

namespace sdfnoc {

namespace {

// A signal position: the input or output side of one router port.
struct Pin {
  Coord router;
  Port port;
  bool output;
  friend auto operator<=>(const Pin&, const Pin&) = default;
};

Pin source_of(const Link& l) {
  return l.kind == Link::Kind::Intra ? Pin{l.from, l.from_port, false} : Pin{l.from, l.from_port, true};
}

Pin sink_of(const Link& l) {
  return l.kind == Link::Kind::Intra ? Pin{l.to, l.to_port, true} : Pin{l.to, l.to_port, false};
}

// Physical resources a link occupies: the undirected wire of an inter link, or
// the Local output of an intra link ending at L.
std::vector<std::pair<Coord, Coord>> occupied(const Link& l) {
  if (l.kind == Link::Kind::Inter) return {{std::min(l.from, l.to), std::max(l.from, l.to)}};
  if (l.to_port == Port::L) return {{l.from, l.from}};
  return {};
}

}  // namespace

std::vector<PnrViolation> check(const UnionGraph& u, const PackedGraph& packed, const MeshNoC& noc,
                                const Placement& placement, const RouteSet& routes) {
  using K = PnrViolation::Kind;
  std::vector<PnrViolation> out;

  // Placement: every pack port sits on a distinct in-mesh router.
  std::map<Coord, Vertex> taken;
  for (const Pack& p : packed.packs) {
    for (const Vertex& v : p.ports) {
      auto it = placement.sites.find(v);
      if (it == placement.sites.end()) {
        out.push_back({K::Unplaced, std::nullopt, "vertex " + u.vertex_name(v) + " is not placed"});
        continue;
      }
      if (!noc.contains(it->second)) {
        out.push_back({K::BadSite, std::nullopt,
                       "vertex " + u.vertex_name(v) + " placed outside the mesh at " + to_string(it->second)});
        continue;
      }
      auto [pos, fresh] = taken.emplace(it->second, v);
      if (!fresh) {
        out.push_back({K::NotInjective, std::nullopt,
                       "vertices " + u.vertex_name(pos->second) + " and " + u.vertex_name(v) + " share router " +
                           to_string(it->second)});
      }
    }
  }

  // Routes: each external edge is a tree from the driver's Local input to
  // exactly its loads' Local outputs.
  for (const auto& [e, links] : routes) {
    if (e >= u.edges.size() || !packed.is_external(e)) {
      out.push_back({K::UnexpectedRoute, e, "route given for non-external edge e" + std::to_string(e)});
    }
  }
  for (EdgeIndex e : packed.external_edges) {
    auto rit = routes.find(e);
    if (rit == routes.end()) {
      out.push_back({K::MissingRoute, e, "external edge e" + std::to_string(e) + " has no route"});
      continue;
    }
    const UnionEdge& edge = u.edges[e];
    auto ds = placement.site(edge.driver);
    if (!ds) continue;

    bool links_ok = true;
    std::map<Pin, std::vector<Pin>> next;
    std::map<Pin, int> incoming;
    for (const Link& l : rit->second) {
      if (!noc.has_link(l)) {
        out.push_back({K::BadLink, e, "edge e" + std::to_string(e) + " uses invalid link " + to_string(l)});
        links_ok = false;
        continue;
      }
      next[source_of(l)].push_back(sink_of(l));
      ++incoming[sink_of(l)];
    }
    if (!links_ok) continue;

    const Pin root{*ds, Port::L, false};
    bool tree = incoming.find(root) == incoming.end();
    for (const auto& [pin, n] : incoming) tree = tree && n == 1;
    if (!tree) {
      out.push_back({K::NotTree, e, "route of edge e" + std::to_string(e) + " is not a tree"});
    }

    std::set<Pin> reached{root};
    std::deque<Pin> q{root};
    while (!q.empty()) {
      const Pin p = q.front();
      q.pop_front();
      auto it = next.find(p);
      if (it == next.end()) continue;
      for (const Pin& n : it->second) {
        if (reached.insert(n).second) q.push_back(n);
      }
    }
    std::set<Pin> sources;
    for (const auto& [pin, _] : next) sources.insert(pin);
    for (const auto& [pin, _] : incoming) sources.insert(pin);
    for (const Pin& p : sources) {
      if (!reached.contains(p)) {
        out.push_back({K::Disconnected, e,
                       "route of edge e" + std::to_string(e) + " has links unreachable from the driver"});
        break;
      }
    }

    std::set<Coord> want;
    for (const Vertex& l : edge.loads) {
      if (auto s = placement.site(l)) want.insert(*s);
    }
    for (const Coord& c : want) {
      if (!reached.contains(Pin{c, Port::L, true})) {
        out.push_back({K::Disconnected, e,
                       "route of edge e" + std::to_string(e) + " does not reach router " + to_string(c)});
      }
    }
    for (const Pin& p : reached) {
      if (p.output && p.port == Port::L && !want.contains(p.router)) {
        out.push_back({K::StraySink, e,
                       "route of edge e" + std::to_string(e) + " exits at unrelated router " + to_string(p.router)});
      }
    }
  }

  // Edges with intersecting colors never share a physical resource.
  std::vector<EdgeIndex> routed;
  for (const auto& [e, _] : routes) {
    if (e < u.edges.size()) routed.push_back(e);
  }
  for (std::size_t i = 0; i < routed.size(); ++i) {
    std::set<std::pair<Coord, Coord>> mine;
    for (const Link& l : routes.at(routed[i])) {
      for (auto& r : occupied(l)) mine.insert(r);
    }
    for (std::size_t j = i + 1; j < routed.size(); ++j) {
      if (!colors_intersect(u.edges[routed[i]].colors, u.edges[routed[j]].colors)) continue;
      for (const Link& l : routes.at(routed[j])) {
        bool clash = false;
        for (auto& r : occupied(l)) clash = clash || mine.contains(r);
        if (clash) {
          out.push_back({K::Conflict, routed[j],
                         "edges e" + std::to_string(routed[i]) + " and e" + std::to_string(routed[j]) +
                             " share " + to_string(l)});
          break;
        }
      }
    }
  }

  for (AppId a = 1; a <= u.app_count(); ++a) {
    for (const ConfigViolation& v : validate_config(noc, collect_config(u, routes, a))) {
      out.push_back({K::Config, std::nullopt, "application " + std::to_string(a) + ": " + v.message});
    }
  }
  return out;
}

}  // namespace sdfnoc
