#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>

#include "sdfnoc/error.hpp"
#include "sdfnoc/pnr.hpp"

namespace sdfnoc {

std::optional<Coord> Placement::site(const Vertex& v) const {
  auto it = sites.find(v);
  if (it == sites.end()) return std::nullopt;
  return it->second;
}

std::optional<Vertex> Placement::vertex_at(const Coord& c) const {
  for (const auto& [v, s] : sites) {
    if (s == c) return v;
  }
  return std::nullopt;
}

std::vector<Vertex> placeable_vertices(const PackedGraph& packed) {
  std::vector<Vertex> out;
  for (const Pack& p : packed.packs) out.insert(out.end(), p.ports.begin(), p.ports.end());
  return out;
}

namespace {

// Weighted vertex groups whose bounding boxes make up the placement cost.
struct CostModel {
  struct Group {
    std::vector<std::size_t> members;
    std::int64_t weight;
  };
  std::vector<Vertex> vertices;
  std::vector<Group> groups;
  std::vector<std::vector<std::size_t>> groups_of;  // per vertex

  CostModel(const UnionGraph& u, const PackedGraph& packed) : vertices(placeable_vertices(packed)) {
    // placeable_vertices is ordered by pack, not globally; sort a copy for lookup.
    std::vector<Vertex> sorted = vertices;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> rank(sorted.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      rank[static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), vertices[i]) - sorted.begin())] = i;
    }
    const auto lookup = [&](const Vertex& v) {
      auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
      return rank[static_cast<std::size_t>(it - sorted.begin())];
    };

    for (EdgeIndex e : packed.external_edges) {
      const UnionEdge& edge = u.edges[e];
      Group g{{lookup(edge.driver)}, static_cast<std::int64_t>(edge.colors.size())};
      for (const Vertex& l : edge.loads) g.members.push_back(lookup(l));
      groups.push_back(std::move(g));
    }
    for (const Pack& p : packed.packs) {
      if (p.ports.size() < 2) continue;
      Group g{{}, 1};
      for (const Vertex& v : p.ports) g.members.push_back(lookup(v));
      groups.push_back(std::move(g));
    }
    groups_of.resize(vertices.size());
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      for (std::size_t m : groups[gi].members) groups_of[m].push_back(gi);
    }
  }

  // `site[v]` is a router index or npos (unplaced, ignored).
  std::int64_t group_cost(const Group& g, const std::vector<std::size_t>& site, const MeshNoC& noc) const {
    std::int64_t rmin = std::numeric_limits<std::int64_t>::max(), rmax = -1, cmin = rmin, cmax = -1;
    for (std::size_t m : g.members) {
      if (site[m] == kUnplaced) continue;
      const Coord c = noc.coord(site[m]);
      rmin = std::min<std::int64_t>(rmin, c.row);
      rmax = std::max<std::int64_t>(rmax, c.row);
      cmin = std::min<std::int64_t>(cmin, c.col);
      cmax = std::max<std::int64_t>(cmax, c.col);
    }
    if (rmax < 0) return 0;
    return g.weight * ((rmax - rmin) + (cmax - cmin));
  }

  std::int64_t total(const std::vector<std::size_t>& site, const MeshNoC& noc) const {
    std::int64_t sum = 0;
    for (const Group& g : groups) sum += group_cost(g, site, noc);
    return sum;
  }

  // Cost of the groups touching vertices a and b (b may be npos).
  std::int64_t local(std::size_t a, std::size_t b, const std::vector<std::size_t>& site, const MeshNoC& noc) const {
    std::vector<std::size_t> touched = groups_of[a];
    if (b != kUnplaced) touched.insert(touched.end(), groups_of[b].begin(), groups_of[b].end());
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    std::int64_t sum = 0;
    for (std::size_t gi : touched) sum += group_cost(groups[gi], site, noc);
    return sum;
  }

  static constexpr std::size_t kUnplaced = std::numeric_limits<std::size_t>::max();
};

// Union nodes in breadth-first order over edges (both directions), restarting
// at the lowest unvisited node.
std::vector<NodeIndex> bfs_nodes(const UnionGraph& u) {
  std::vector<std::vector<NodeIndex>> adj(u.nodes.size());
  for (const UnionEdge& e : u.edges) {
    for (const Vertex& l : e.loads) {
      adj[e.driver.node].push_back(l.node);
      adj[l.node].push_back(e.driver.node);
    }
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  std::vector<bool> seen(u.nodes.size(), false);
  std::vector<NodeIndex> order;
  for (NodeIndex root = 0; root < u.nodes.size(); ++root) {
    if (seen[root]) continue;
    std::deque<NodeIndex> q{root};
    seen[root] = true;
    while (!q.empty()) {
      const NodeIndex n = q.front();
      q.pop_front();
      order.push_back(n);
      for (NodeIndex m : adj[n]) {
        if (!seen[m]) {
          seen[m] = true;
          q.push_back(m);
        }
      }
    }
  }
  return order;
}

}  // namespace

std::int64_t placement_cost(const UnionGraph& u, const PackedGraph& packed, const Placement& placement) {
  const CostModel model(u, packed);
  std::int64_t sum = 0;
  for (const auto& g : model.groups) {
    std::int64_t rmin = std::numeric_limits<std::int64_t>::max(), rmax = -1, cmin = rmin, cmax = -1;
    for (std::size_t m : g.members) {
      auto s = placement.site(model.vertices[m]);
      if (!s) continue;
      rmin = std::min<std::int64_t>(rmin, s->row);
      rmax = std::max<std::int64_t>(rmax, s->row);
      cmin = std::min<std::int64_t>(cmin, s->col);
      cmax = std::max<std::int64_t>(cmax, s->col);
    }
    if (rmax >= 0) sum += g.weight * ((rmax - rmin) + (cmax - cmin));
  }
  return sum;
}

Placement place(const UnionGraph& u, const PackedGraph& packed, const MeshNoC& noc, std::uint64_t seed) {
  const CostModel model(u, packed);
  const std::size_t nv = model.vertices.size();
  if (nv > noc.router_count()) {
    throw CapacityError("placement needs " + std::to_string(nv) + " local ports but the " + noc.descriptor() +
                        " mesh has " + std::to_string(noc.router_count()));
  }
  constexpr auto kUnplaced = CostModel::kUnplaced;
  std::vector<std::size_t> site(nv, kUnplaced);
  std::vector<std::size_t> occupant(noc.router_count(), kUnplaced);

  // Greedy seed: visit vertices node by node in BFS order and drop each on the
  // free router with the lowest partial cost (ties: lowest router index).
  std::vector<std::size_t> visit;
  {
    std::vector<std::size_t> position(u.nodes.size());
    const auto order = bfs_nodes(u);
    for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
    visit.resize(nv);
    for (std::size_t i = 0; i < nv; ++i) visit[i] = i;
    std::stable_sort(visit.begin(), visit.end(), [&](std::size_t a, std::size_t b) {
      const Vertex& va = model.vertices[a];
      const Vertex& vb = model.vertices[b];
      if (position[va.node] != position[vb.node]) return position[va.node] < position[vb.node];
      return va < vb;
    });
  }
  for (std::size_t v : visit) {
    std::size_t best = kUnplaced;
    std::int64_t best_cost = std::numeric_limits<std::int64_t>::max();
    for (std::size_t r = 0; r < noc.router_count(); ++r) {
      if (occupant[r] != kUnplaced) continue;
      site[v] = r;
      const std::int64_t c = model.local(v, kUnplaced, site, noc);
      if (c < best_cost) {
        best_cost = c;
        best = r;
      }
    }
    site[v] = best;
    occupant[best] = v;
  }

  // Annealing: random vertex to random router (swap when occupied).
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_vertex(0, nv == 0 ? 0 : nv - 1);
  std::uniform_int_distribution<std::size_t> pick_router(0, noc.router_count() - 1);

  std::int64_t cost = model.total(site, noc);
  std::vector<std::size_t> best_site = site;
  std::int64_t best_cost = cost;

  if (nv > 0 && noc.router_count() > 1) {
    double temperature = 1.0;
    while (temperature >= 0.01) {
      unsigned accepted = 0;
      unsigned attempted = 0;
      while (accepted < 100 && attempted < 1000) {
        ++attempted;
        const std::size_t a = pick_vertex(rng);
        const std::size_t to = pick_router(rng);
        const std::size_t from = site[a];
        if (to == from) continue;
        const std::size_t b = occupant[to];

        const std::int64_t before = model.local(a, b, site, noc);
        site[a] = to;
        if (b != kUnplaced) site[b] = from;
        const std::int64_t after = model.local(a, b, site, noc);
        const std::int64_t delta = after - before;

        if (delta <= 0 || unit(rng) < std::exp(-static_cast<double>(delta) / temperature)) {
          ++accepted;
          occupant[to] = a;
          occupant[from] = b;
          cost += delta;
          if (cost < best_cost) {
            best_cost = cost;
            best_site = site;
          }
        } else {
          site[a] = from;
          if (b != kUnplaced) site[b] = to;
        }
      }
      temperature *= 0.95;
    }
  }

  Placement out;
  for (std::size_t v = 0; v < nv; ++v) out.sites.emplace(model.vertices[v], noc.coord(best_site[v]));
  return out;
}

}  // namespace sdfnoc
