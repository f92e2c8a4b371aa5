#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sdfnoc/design.hpp"
#include "sdfnoc/evaluate.hpp"
#include "sdfnoc/registry.hpp"

namespace sdfnoc {

using Tick = std::uint64_t;

/// Fixed per-link delays drawn from (seed, link) in 0..max_delay, plus a
/// per-type firing latency (default 1 tick).
struct DelayModel {
  std::uint64_t seed = 0;
  std::uint32_t max_delay = 0;
  std::map<std::string, Tick, std::less<>> latency;

  Tick link_delay(const Link& l) const;
  /// Hard-wired arc inside a pack, from `driver` to load vertex `load`.
  Tick arc_delay(const Vertex& driver, const Vertex& load) const;
  /// Arrival offset of a system input stream.
  Tick input_skew(const Vertex& in) const;
  Tick node_latency(std::string_view type) const;
};

struct SimOptions {
  /// Firings of source nodes when the application has no system inputs.
  std::size_t length = 0;
  /// When set, receives "tick=<t> link=<link> token#<k>" per link traversal.
  std::ostream* trace = nullptr;
};

struct SimResult {
  StreamMap outputs;                         // union Out vertex -> stream
  std::map<Link, std::uint64_t> link_tokens;  // tokens that crossed each link
  std::map<EdgeIndex, std::uint64_t> arc_tokens;  // tokens over internal edges, per load
  Tick ticks = 0;                            // time of the last event
  bool drained = false;                      // no token left anywhere
};

/// Tuple k holds token k of every input, in port order.
struct AlignedTuple {
  Tick tick = 0;  // when the last member arrived
  std::vector<Token> tokens;
};

/// Per-port FIFOs that release aligned tuples. Uses arrival order only.
class Resynchronizer {
 public:
  explicit Resynchronizer(std::size_t ports) : queues_(ports) {}

  void push(std::size_t port, Token t) { queues_.at(port).push_back(std::move(t)); }
  bool ready() const;
  std::vector<Token> pop();
  std::size_t pending() const;
  std::size_t ports() const { return queues_.size(); }

 private:
  std::vector<std::deque<Token>> queues_;
};

struct TimedToken {
  Tick tick = 0;
  Token token;
};

/// Feeds timestamped streams through a Resynchronizer in arrival order (ties
/// by port) and returns the tuples in the order they become available.
std::vector<AlignedTuple> resynchronize(const std::vector<std::vector<TimedToken>>& streams);

/// Executes application `app` on the configured mesh. `inputs` are keyed by
/// union In vertices and must cover boundary_inputs(app) with equal lengths.
/// Tokens move only along crossbar connections present in `config`.
/// Throws SimulationError on deadlock, a token reaching an unconfigured port,
/// or malformed inputs, and OperatorError from the registry.
SimResult simulate(const Design& design, const CrossbarConfig& config, const OperatorRegistry& registry,
                   const StreamMap& inputs, const DelayModel& delays, AppId app, const SimOptions& options = {});

struct Segment {
  AppId app = 0;
  StreamMap inputs;
  DelayModel delays;
};

/// Runs each segment with its own application's configuration on a drained
/// network. Throws SimulationError if a segment leaves tokens in flight.
std::vector<SimResult> reconfigure_and_run(const Design& design, const OperatorRegistry& registry,
                                           const std::vector<Segment>& scenario, const SimOptions& options = {});

/// Translates streams keyed by application vertex names ("g.in0") to union
/// vertices and back.
StreamMap to_union_streams(const UnionGraph& u, AppId app, const std::map<std::string, Stream>& named);
std::map<std::string, Stream> to_app_streams(const UnionGraph& u, AppId app, const StreamMap& streams);

}  // namespace sdfnoc
