#include "sdfnoc/sim.hpp"

#include <algorithm>
#include <optional>
#include <ostream>
#include <queue>

#include "sdfnoc/error.hpp"

namespace sdfnoc {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t vertex_key(const Vertex& v) {
  return (static_cast<std::uint64_t>(v.node) << 24) ^ (static_cast<std::uint64_t>(v.dir) << 20) ^ v.port;
}

Tick draw(std::uint64_t seed, std::uint64_t salt, std::uint32_t max_delay) {
  if (max_delay == 0) return 0;
  return splitmix(seed ^ splitmix(salt)) % (static_cast<std::uint64_t>(max_delay) + 1);
}

}  // namespace

Tick DelayModel::link_delay(const Link& l) const { return draw(seed, fnv1a(to_string(l)), max_delay); }

Tick DelayModel::arc_delay(const Vertex& driver, const Vertex& load) const {
  return draw(seed, splitmix(vertex_key(driver)) ^ vertex_key(load) ^ 0xa5a5ULL, max_delay);
}

Tick DelayModel::input_skew(const Vertex& in) const {
  return draw(seed, splitmix(vertex_key(in) ^ 0x5eedULL), max_delay);
}

Tick DelayModel::node_latency(std::string_view type) const {
  auto it = latency.find(type);
  return it == latency.end() ? 1 : it->second;
}

bool Resynchronizer::ready() const {
  return std::all_of(queues_.begin(), queues_.end(), [](const auto& q) { return !q.empty(); });
}

std::vector<Token> Resynchronizer::pop() {
  std::vector<Token> out;
  out.reserve(queues_.size());
  for (auto& q : queues_) {
    out.push_back(std::move(q.front()));
    q.pop_front();
  }
  return out;
}

std::size_t Resynchronizer::pending() const {
  std::size_t n = 0;
  for (const auto& q : queues_) n += q.size();
  return n;
}

std::vector<AlignedTuple> resynchronize(const std::vector<std::vector<TimedToken>>& streams) {
  struct Arrival {
    Tick tick;
    std::size_t port;
    std::size_t index;
  };
  std::vector<Arrival> arrivals;
  for (std::size_t p = 0; p < streams.size(); ++p) {
    for (std::size_t i = 0; i < streams[p].size(); ++i) arrivals.push_back({streams[p][i].tick, p, i});
  }
  // Stable on index so a stream's own order survives equal timestamps.
  std::stable_sort(arrivals.begin(), arrivals.end(),
                   [](const Arrival& a, const Arrival& b) { return std::tie(a.tick, a.port) < std::tie(b.tick, b.port); });

  Resynchronizer sync(streams.size());
  std::vector<AlignedTuple> out;
  for (const Arrival& a : arrivals) {
    sync.push(a.port, streams[a.port][a.index].token);
    while (sync.ports() > 0 && sync.ready()) out.push_back({a.tick, sync.pop()});
  }
  return out;
}

namespace {

class Simulator {
 public:
  Simulator(const Design& design, const CrossbarConfig& config, const OperatorRegistry& registry,
            const DelayModel& delays, AppId app, const SimOptions& options)
      : d_(design),
        u_(design.union_graph),
        pnr_(*design.pnr),
        config_(config),
        registry_(registry),
        delays_(delays),
        app_(app),
        options_(options) {}

  SimResult run(const StreamMap& inputs) {
    setup(inputs);
    for (const auto& [v, stream] : inputs) {
      const Tick skew = delays_.input_skew(v);
      for (std::size_t k = 0; k < stream.size(); ++k) {
        push({static_cast<Tick>(k) + skew, 0, Kind::Arrive, v.node, v.port, Port::L, stream[k], k});
      }
    }
    for (NodeIndex n : active_) try_fire(n, 0);

    while (!queue_.empty()) {
      Event ev = queue_.top();
      queue_.pop();
      now_ = ev.tick;
      switch (ev.kind) {
        case Kind::Arrive:
          nodes_[ev.a].sync->push(ev.b, std::move(ev.token));
          try_fire(ev.a, now_);
          break;
        case Kind::Done:
          finish_firing(ev.a);
          try_fire(ev.a, now_);
          break;
        case Kind::Pin:
          at_pin(ev.a, ev.port, ev.token, ev.k);
          break;
        case Kind::Local:
          at_local(ev.a, std::move(ev.token));
          break;
      }
    }
    return finish();
  }

 private:
  enum class Kind { Arrive, Done, Pin, Local };

  struct Event {
    Tick tick;
    std::uint64_t seq;
    Kind kind;
    std::size_t a;  // node or router index
    std::size_t b;  // input port for Arrive
    Port port;      // router input for Pin
    Token token;
    std::size_t k;  // token index, for tracing only
  };

  struct Later {
    bool operator()(const Event& x, const Event& y) const { return std::tie(x.tick, x.seq) > std::tie(y.tick, y.seq); }
  };

  struct NodeState {
    std::optional<Resynchronizer> sync;
    std::size_t fired = 0;
    bool busy = false;
    std::vector<Token> pending;
  };

  void push(Event ev) {
    ev.seq = seq_++;
    queue_.push(std::move(ev));
  }

  [[noreturn]] void fail(SimulationError::Kind kind, const std::string& msg) const {
    throw SimulationError(kind, "tick " + std::to_string(now_) + ": " + msg);
  }

  void setup(const StreamMap& inputs) {
    if (app_ == 0 || app_ > u_.app_count()) {
      throw SimulationError(SimulationError::Kind::Input, "no application with id " + std::to_string(app_));
    }
    nodes_.resize(u_.nodes.size());
    active_ = u_.app(app_).node_map;
    std::sort(active_.begin(), active_.end());
    for (NodeIndex n : active_) nodes_[n].sync.emplace(u_.nodes[n].in_arity);

    const auto boundary = u_.boundary_inputs(app_);
    std::optional<std::size_t> len;
    for (const Vertex& v : boundary) {
      auto it = inputs.find(v);
      if (it == inputs.end()) {
        throw SimulationError(SimulationError::Kind::Input, "missing input stream for " + u_.vertex_name(v));
      }
      if (len && *len != it->second.size()) {
        throw SimulationError(SimulationError::Kind::Input, "input streams have unequal lengths");
      }
      len = it->second.size();
    }
    for (const auto& [v, s] : inputs) {
      if (!std::binary_search(boundary.begin(), boundary.end(), v)) {
        throw SimulationError(SimulationError::Kind::Input,
                              "input stream given for " + u_.vertex_name(v) + ", which is not a system input");
      }
    }
    length_ = len.value_or(options_.length);

    for (const Vertex& v : u_.boundary_outputs(app_)) outputs_[v];
    for (const auto& [v, site] : pnr_.placement.sites) hosted_.emplace(site, v);
    link_free_.clear();
  }

  void try_fire(NodeIndex n, Tick t) {
    NodeState& s = nodes_[n];
    if (s.busy || s.fired >= length_ || !s.sync->ready()) return;
    const UnionNode& node = u_.nodes[n];
    const auto args = s.sync->pop();
    s.pending = registry_.fire(node.type.str(), args);
    s.busy = true;
    push({t + delays_.node_latency(node.type.str()), 0, Kind::Done, n, 0, Port::L, NullToken{}, s.fired});
  }

  void finish_firing(NodeIndex n) {
    NodeState& s = nodes_[n];
    const std::size_t k = s.fired++;
    s.busy = false;
    for (std::uint32_t p = 0; p < s.pending.size(); ++p) emit(out_port(n, p), std::move(s.pending[p]), k);
    s.pending.clear();
  }

  Tick occupy(Tick t, Tick& free_at, Tick delay) {
    const Tick depart = std::max(t, free_at);
    free_at = depart + 1;
    return depart + delay;
  }

  void emit(const Vertex& out, Token token, std::size_t k) {
    auto e = u_.edge_driven_by(out, app_);
    if (!e) {
      outputs_.at(out).push_back(std::move(token));
      return;
    }
    const UnionEdge& edge = u_.edges[*e];
    if (d_.packed.is_external(*e)) {
      auto site = pnr_.placement.site(out);
      if (!site) fail(SimulationError::Kind::UnconfiguredPort, u_.vertex_name(out) + " drives the network but is not placed");
      push({now_, 0, Kind::Pin, pnr_.noc.index(*site), 0, Port::L, std::move(token), k});
      return;
    }
    for (const Vertex& l : edge.loads) {
      const Tick arrive = occupy(now_, arc_free_[{*e, l}], delays_.arc_delay(out, l));
      ++arc_tokens_[*e];
      push({arrive, 0, Kind::Arrive, l.node, l.port, Port::L, token, k});
    }
  }

  void traverse(const Link& link, Tick t, Kind kind, std::size_t router, Port port, const Token& token,
                std::size_t k) {
    const Tick arrive = occupy(t, link_free_[link], delays_.link_delay(link));
    ++link_tokens_[link];
    if (options_.trace) *options_.trace << "tick=" << arrive << " link=" << to_string(link) << " token#" << k << '\n';
    push({arrive, 0, kind, router, 0, port, token, k});
  }

  void at_pin(std::size_t router, Port in, const Token& token, std::size_t k) {
    const Coord here = pnr_.noc.coord(router);
    bool routed = false;
    for (const auto& [from, to] : config_.connections(here)) {
      if (from != in) continue;
      routed = true;
      const Link hop = Link::intra(here, from, to);
      if (to == Port::L) {
        traverse(hop, now_, Kind::Local, router, Port::L, token, k);
        continue;
      }
      auto next = pnr_.noc.neighbor(here, to);
      if (!next) fail(SimulationError::Kind::UnconfiguredPort, "token driven off the mesh at " + to_string(hop));
      // The crossbar hop and the wire behind it are timed back to back.
      const Tick at_out = occupy(now_, link_free_[hop], delays_.link_delay(hop));
      ++link_tokens_[hop];
      if (options_.trace) *options_.trace << "tick=" << at_out << " link=" << to_string(hop) << " token#" << k << '\n';
      traverse(Link::inter(here, to, *next, opposite(to)), at_out, Kind::Pin, pnr_.noc.index(*next), opposite(to),
               token, k);
    }
    if (!routed) {
      fail(SimulationError::Kind::UnconfiguredPort, "token reached unconfigured input " + std::string(1, port_char(in)) +
                                                        " of router " + to_string(here));
    }
  }

  void at_local(std::size_t router, Token token) {
    const Coord here = pnr_.noc.coord(router);
    auto it = hosted_.find(here);
    if (it == hosted_.end() || it->second.dir != Direction::In) {
      fail(SimulationError::Kind::UnconfiguredPort, "token delivered to router " + to_string(here) +
                                                        ", which hosts no input vertex");
    }
    const Vertex v = it->second;
    auto e = u_.edge_loading(v, app_);
    if (!e || !d_.packed.is_external(*e)) {
      fail(SimulationError::Kind::UnconfiguredPort,
           "token delivered to " + u_.vertex_name(v) + ", which expects no network traffic in this application");
    }
    push({now_, 0, Kind::Arrive, v.node, v.port, Port::L, std::move(token), 0});
  }

  SimResult finish() {
    std::string starved;
    for (NodeIndex n : active_) {
      if (nodes_[n].fired < length_) {
        starved += (starved.empty() ? "" : ", ") + u_.nodes[n].name() + " fired " + std::to_string(nodes_[n].fired) +
                   "/" + std::to_string(length_);
      }
    }
    if (!starved.empty()) fail(SimulationError::Kind::Deadlock, "no event can fire; " + starved);

    SimResult r;
    r.outputs = std::move(outputs_);
    r.link_tokens = std::move(link_tokens_);
    r.arc_tokens = std::move(arc_tokens_);
    r.ticks = now_;
    r.drained = true;
    for (NodeIndex n : active_) r.drained = r.drained && nodes_[n].sync->pending() == 0;
    return r;
  }

  const Design& d_;
  const UnionGraph& u_;
  const PnrResult& pnr_;
  const CrossbarConfig& config_;
  const OperatorRegistry& registry_;
  const DelayModel& delays_;
  AppId app_;
  const SimOptions& options_;

  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t seq_ = 0;
  Tick now_ = 0;
  std::size_t length_ = 0;
  std::vector<NodeState> nodes_;
  std::vector<NodeIndex> active_;
  std::map<Coord, Vertex> hosted_;
  std::map<Link, Tick> link_free_;
  std::map<std::pair<EdgeIndex, Vertex>, Tick> arc_free_;
  StreamMap outputs_;
  std::map<Link, std::uint64_t> link_tokens_;
  std::map<EdgeIndex, std::uint64_t> arc_tokens_;
};

}  // namespace

SimResult simulate(const Design& design, const CrossbarConfig& config, const OperatorRegistry& registry,
                   const StreamMap& inputs, const DelayModel& delays, AppId app, const SimOptions& options) {
  if (!design.pnr) throw SimulationError(SimulationError::Kind::Input, "design has not been placed and routed");
  Simulator sim(design, config, registry, delays, app, options);
  return sim.run(inputs);
}

std::vector<SimResult> reconfigure_and_run(const Design& design, const OperatorRegistry& registry,
                                           const std::vector<Segment>& scenario, const SimOptions& options) {
  if (!design.pnr) throw SimulationError(SimulationError::Kind::Input, "design has not been placed and routed");
  std::vector<SimResult> out;
  for (std::size_t i = 0; i < scenario.size(); ++i) {
    const Segment& s = scenario[i];
    const CrossbarConfig cfg = derive_config(design.pnr->noc, design.union_graph, design.pnr->routes, s.app);
    SimResult r = simulate(design, cfg, registry, s.inputs, s.delays, s.app, options);
    if (!r.drained) {
      throw SimulationError(SimulationError::Kind::Deadlock,
                            "segment " + std::to_string(i) + " left tokens in flight; cannot reconfigure");
    }
    out.push_back(std::move(r));
  }
  return out;
}

StreamMap to_union_streams(const UnionGraph& u, AppId app, const std::map<std::string, Stream>& named) {
  StreamMap out;
  for (const auto& [name, stream] : named) {
    auto v = u.to_union(app, name);
    if (!v) {
      throw SimulationError(SimulationError::Kind::Input,
                            "'" + name + "' is not a vertex of application " + u.app(app).name);
    }
    out[*v] = stream;
  }
  return out;
}

std::map<std::string, Stream> to_app_streams(const UnionGraph& u, AppId app, const StreamMap& streams) {
  std::map<std::string, Stream> out;
  for (const auto& [v, stream] : streams) {
    auto name = u.to_app(app, v);
    out[name ? *name : u.vertex_name(v)] = stream;
  }
  return out;
}

}  // namespace sdfnoc
