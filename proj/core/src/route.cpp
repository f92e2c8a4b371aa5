#include <algorithm>
#include <limits>
#include <queue>
#include <set>

#include "sdfnoc/error.hpp"
#include "sdfnoc/pnr.hpp"

namespace sdfnoc {

namespace {

// Routing graph: every router contributes 5 input pins and 5 output pins.
//   pin = router * 10 + (output ? 5 : 0) + port
// Exclusive resources: one per undirected inter-router wire (keyed by the
// router on its west/north side) and one per Local output.
class RoutingGraph {
 public:
  explicit RoutingGraph(const MeshNoC& noc) : noc_(noc) {}

  std::size_t pin_count() const { return noc_.router_count() * 10; }
  static std::size_t in_pin(std::size_t router, Port p) { return router * 10 + static_cast<std::size_t>(p); }
  static std::size_t out_pin(std::size_t router, Port p) { return router * 10 + 5 + static_cast<std::size_t>(p); }
  static std::size_t router_of(std::size_t pin) { return pin / 10; }
  static bool is_out(std::size_t pin) { return pin % 10 >= 5; }
  static Port port_of(std::size_t pin) { return static_cast<Port>(pin % 5); }

  std::size_t resource_count() const { return noc_.router_count() * 3; }

  /// Resource consumed by driving output pin `pin`; npos for border outputs.
  std::size_t resource(std::size_t pin) const {
    const std::size_t r = router_of(pin);
    const Port p = port_of(pin);
    const Coord c = noc_.coord(r);
    switch (p) {
      case Port::L: return noc_.router_count() * 2 + r;
      case Port::E: return noc_.neighbor(c, p) ? r * 2 : kNone;
      case Port::S: return noc_.neighbor(c, p) ? r * 2 + 1 : kNone;
      case Port::W: {
        auto n = noc_.neighbor(c, p);
        return n ? noc_.index(*n) * 2 : kNone;
      }
      case Port::N: {
        auto n = noc_.neighbor(c, p);
        return n ? noc_.index(*n) * 2 + 1 : kNone;
      }
    }
    return kNone;
  }

  /// Input pin at the far end of a cardinal output pin.
  std::size_t across(std::size_t out) const {
    const Coord c = noc_.coord(router_of(out));
    const Port p = port_of(out);
    return in_pin(noc_.index(*noc_.neighbor(c, p)), opposite(p));
  }

  Link link(std::size_t from, std::size_t to) const {
    const Coord a = noc_.coord(router_of(from));
    if (!is_out(from)) return Link::intra(a, port_of(from), port_of(to));
    return Link::inter(a, port_of(from), noc_.coord(router_of(to)), port_of(to));
  }

  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

 private:
  const MeshNoC& noc_;
};

struct Net {
  EdgeIndex edge;
  ColorSet colors;
  std::size_t driver_router;
  std::vector<std::size_t> load_routers;
  // Routed state.
  std::vector<Link> links;
  std::vector<std::size_t> resources;
};

class Router {
 public:
  Router(const MeshNoC& noc, std::vector<Net>& nets)
      : noc_(noc), graph_(noc), nets_(nets), history_(graph_.resource_count(), 0), users_(graph_.resource_count()) {}

  void rip_up(std::size_t n) {
    for (std::size_t r : nets_[n].resources) {
      auto& u = users_[r];
      u.erase(std::find(u.begin(), u.end(), n));
    }
    nets_[n].resources.clear();
    nets_[n].links.clear();
  }

  void route_net(std::size_t n, double present_factor) {
    Net& net = nets_[n];
    std::vector<bool> in_tree(graph_.pin_count(), false);
    std::set<std::size_t> own_resources;
    in_tree[RoutingGraph::in_pin(net.driver_router, Port::L)] = true;

    for (std::size_t target : net.load_routers) {
      const std::size_t goal = RoutingGraph::out_pin(target, Port::L);
      if (in_tree[goal]) continue;

      constexpr double kInf = std::numeric_limits<double>::infinity();
      std::vector<double> dist(graph_.pin_count(), kInf);
      std::vector<std::size_t> prev(graph_.pin_count(), RoutingGraph::kNone);
      using Item = std::pair<double, std::size_t>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      for (std::size_t p = 0; p < in_tree.size(); ++p) {
        if (in_tree[p]) {
          dist[p] = 0;
          pq.emplace(0.0, p);
        }
      }
      while (!pq.empty()) {
        auto [d, p] = pq.top();
        pq.pop();
        if (d > dist[p]) continue;
        if (p == goal) break;
        const auto relax = [&](std::size_t q, double cost) {
          if (in_tree[q]) return;
          if (d + cost < dist[q]) {
            dist[q] = d + cost;
            prev[q] = p;
            pq.emplace(dist[q], q);
          }
        };
        const std::size_t r = RoutingGraph::router_of(p);
        if (!RoutingGraph::is_out(p)) {
          const Port in = RoutingGraph::port_of(p);
          for (Port o : kAllPorts) {
            if (o == in) continue;
            if (o == Port::L && r != target) continue;
            const std::size_t q = RoutingGraph::out_pin(r, o);
            const std::size_t res = graph_.resource(q);
            if (res == RoutingGraph::kNone || own_resources.contains(res)) continue;
            relax(q, resource_cost(res, n, present_factor));
          }
        } else if (RoutingGraph::port_of(p) != Port::L) {
          relax(graph_.across(p), 0.0);
        }
      }
      if (dist[goal] == kInf) {
        throw RoutingError("edge e" + std::to_string(net.edge) + " has no path to router " +
                           to_string(noc_.coord(target)));
      }

      std::vector<std::size_t> path;
      for (std::size_t p = goal; !in_tree[p]; p = prev[p]) path.push_back(p);
      std::size_t from = prev[path.back()];
      for (auto it = path.rbegin(); it != path.rend(); ++it) {
        const std::size_t to = *it;
        net.links.push_back(graph_.link(from, to));
        in_tree[to] = true;
        if (RoutingGraph::is_out(to)) {
          const std::size_t res = graph_.resource(to);
          own_resources.insert(res);
          net.resources.push_back(res);
          users_[res].push_back(n);
        }
        from = to;
      }
    }
  }

  /// Resources shared by two nets with intersecting colors.
  std::vector<std::size_t> conflicts() const {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < users_.size(); ++r) {
      if (contested(r)) out.push_back(r);
    }
    return out;
  }

  void bump_history(std::size_t res) { history_[res] += 1; }
  const std::vector<std::size_t>& users(std::size_t res) const { return users_[res]; }

 private:
  bool contested(std::size_t r) const {
    const auto& u = users_[r];
    for (std::size_t i = 0; i < u.size(); ++i) {
      for (std::size_t j = i + 1; j < u.size(); ++j) {
        if (colors_intersect(nets_[u[i]].colors, nets_[u[j]].colors)) return true;
      }
    }
    return false;
  }

  double resource_cost(std::size_t res, std::size_t n, double present_factor) const {
    std::size_t clash = 0;
    for (std::size_t other : users_[res]) {
      if (other != n && colors_intersect(nets_[other].colors, nets_[n].colors)) ++clash;
    }
    return (1.0 + history_[res]) * (1.0 + present_factor * static_cast<double>(clash));
  }

  const MeshNoC& noc_;
  RoutingGraph graph_;
  std::vector<Net>& nets_;
  std::vector<double> history_;
  std::vector<std::vector<std::size_t>> users_;
};

}  // namespace

RouteSet route(const UnionGraph& u, const PackedGraph& packed, const MeshNoC& noc, const Placement& placement,
               const RouteOptions& options) {
  const auto site_of = [&](const Vertex& v) {
    auto s = placement.site(v);
    if (!s || !noc.contains(*s)) throw RoutingError("vertex " + u.vertex_name(v) + " is not placed on the mesh");
    return noc.index(*s);
  };

  std::vector<Net> nets;
  for (EdgeIndex e : packed.external_edges) {
    const UnionEdge& edge = u.edges[e];
    Net net{e, edge.colors, site_of(edge.driver), {}, {}, {}};
    const Coord d = noc.coord(net.driver_router);
    std::vector<std::pair<std::uint32_t, std::size_t>> loads;
    for (const Vertex& l : edge.loads) {
      const std::size_t r = site_of(l);
      const Coord c = noc.coord(r);
      const auto manhattan = static_cast<std::uint32_t>((c.row > d.row ? c.row - d.row : d.row - c.row) +
                                                        (c.col > d.col ? c.col - d.col : d.col - c.col));
      loads.emplace_back(manhattan, r);
    }
    std::sort(loads.begin(), loads.end());
    for (const auto& [dist, r] : loads) net.load_routers.push_back(r);
    nets.push_back(std::move(net));
  }

  // Color classes in packing order, then descending fanout, then edge index.
  const auto classes = combination_order(u, std::nullopt);
  const auto class_rank = [&](const ColorSet& c) {
    return static_cast<std::size_t>(std::find(classes.begin(), classes.end(), c) - classes.begin());
  };
  std::vector<std::size_t> order(nets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ka = std::make_tuple(class_rank(nets[a].colors), -static_cast<long>(nets[a].load_routers.size()), nets[a].edge);
    const auto kb = std::make_tuple(class_rank(nets[b].colors), -static_cast<long>(nets[b].load_routers.size()), nets[b].edge);
    return ka < kb;
  });

  Router router(noc, nets);
  std::vector<bool> dirty(nets.size(), true);
  std::vector<std::size_t> contested;
  for (unsigned iteration = 1; iteration <= std::max(1u, options.max_iterations); ++iteration) {
    const double present_factor = 0.5 * iteration;
    for (std::size_t n : order) {
      if (!dirty[n]) continue;
      router.rip_up(n);
      router.route_net(n, present_factor);
    }
    contested = router.conflicts();
    if (contested.empty()) break;
    std::fill(dirty.begin(), dirty.end(), false);
    for (std::size_t res : contested) {
      router.bump_history(res);
      for (std::size_t n : router.users(res)) dirty[n] = true;
    }
  }

  if (!contested.empty()) {
    std::set<EdgeIndex> blocked;
    for (std::size_t res : contested) {
      for (std::size_t n : router.users(res)) blocked.insert(nets[n].edge);
    }
    std::string list;
    for (EdgeIndex e : blocked) list += (list.empty() ? "e" : ", e") + std::to_string(e);
    throw RoutingError("unroutable after " + std::to_string(options.max_iterations) +
                       " rip-up iterations; blocked edges: " + list);
  }

  RouteSet out;
  for (Net& n : nets) out.emplace(n.edge, std::move(n.links));
  return out;
}

CrossbarConfig collect_config(const UnionGraph& u, const RouteSet& routes, AppId app) {
  CrossbarConfig cfg;
  for (const auto& [e, links] : routes) {
    if (e >= u.edges.size() || !has_color(u.edges[e].colors, app)) continue;
    for (const Link& l : links) {
      if (l.kind == Link::Kind::Intra && l.from_port != l.to_port) cfg.connect(l.from, l.from_port, l.to_port);
    }
  }
  return cfg;
}

CrossbarConfig derive_config(const MeshNoC& noc, const UnionGraph& u, const RouteSet& routes, AppId app) {
  CrossbarConfig cfg = collect_config(u, routes, app);
  const auto violations = validate_config(noc, cfg);
  if (!violations.empty()) {
    throw RoutingError("derived configuration for application " + std::to_string(app) +
                       " is invalid: " + violations.front().message);
  }
  return cfg;
}

PnrResult place_and_route(const UnionGraph& u, const PackedGraph& packed, const MeshNoC& noc, std::uint64_t seed,
                          const RouteOptions& options) {
  PnrResult r;
  r.noc = noc;
  r.seed = seed;
  r.placement = place(u, packed, noc, seed);
  r.routes = route(u, packed, noc, r.placement, options);
  for (AppId a = 1; a <= u.app_count(); ++a) {
    r.configs.push_back(derive_config(noc, u, r.routes, a));
    std::size_t links = 0;
    for (const auto& [e, ls] : r.routes) {
      if (has_color(u.edges[e].colors, a)) links += ls.size();
    }
    r.links_per_app.push_back(links);
  }
  r.wirelength = placement_cost(u, packed, r.placement);
  return r;
}

}  // namespace sdfnoc
