#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sdfnoc {

/// Crossbar ports of a mesh router, in canonical enumeration order.
enum class Port : std::uint8_t { N, E, S, W, L };

inline constexpr std::array<Port, 5> kAllPorts{Port::N, Port::E, Port::S, Port::W, Port::L};

char port_char(Port p);
std::optional<Port> parse_port(char c);
/// N<->S, E<->W. Undefined for L.
Port opposite(Port p);

struct Coord {
  std::uint32_t row = 0;
  std::uint32_t col = 0;

  friend auto operator<=>(const Coord&, const Coord&) = default;
};

std::string to_string(const Coord& c);  // "(r,c)"
std::optional<Coord> parse_coord(std::string_view text);

/// One element of the link set L. Intra links connect an input to an output of
/// one crossbar (`from == to`). Inter links carry a signal out of `from` through
/// port `from_port` into `to` through `to_port`.
struct Link {
  enum class Kind : std::uint8_t { Intra, Inter };

  Kind kind = Kind::Intra;
  Coord from;
  Port from_port = Port::L;
  Coord to;
  Port to_port = Port::L;

  static Link intra(Coord router, Port in, Port out) { return {Kind::Intra, router, in, router, out}; }
  static Link inter(Coord a, Port out, Coord b, Port in) { return {Kind::Inter, a, out, b, in}; }

  friend auto operator<=>(const Link&, const Link&) = default;
};

/// "X(r,c)IN>OUT" or "I(r1,c1)P1=(r2,c2)P2".
std::string to_string(const Link& l);
std::optional<Link> parse_link(std::string_view text);

/// rows x cols mesh of 5x5 crossbar routers.
class MeshNoC {
 public:
  /// Throws Error when either dimension is zero.
  MeshNoC(std::uint32_t rows, std::uint32_t cols);

  std::uint32_t rows() const { return rows_; }
  std::uint32_t cols() const { return cols_; }
  std::size_t router_count() const { return static_cast<std::size_t>(rows_) * cols_; }

  bool contains(const Coord& c) const { return c.row < rows_ && c.col < cols_; }
  std::size_t index(const Coord& c) const { return static_cast<std::size_t>(c.row) * cols_ + c.col; }
  Coord coord(std::size_t index) const {
    return {static_cast<std::uint32_t>(index / cols_), static_cast<std::uint32_t>(index % cols_)};
  }
  /// Neighbour reached through a cardinal port; nullopt on the border or for L.
  std::optional<Coord> neighbor(const Coord& c, Port p) const;

  /// Undirected neighbour pairs: rows*(cols-1) + cols*(rows-1).
  std::size_t adjacency_count() const;

  /// All (in, out) pairs with in != out, row-major then port order. 20 per router.
  std::vector<Link> intra_links() const;
  /// Both directions of every neighbour pair, row-major then port order.
  std::vector<Link> inter_links() const;
  /// intra_links() followed by inter_links().
  std::vector<Link> links() const;

  /// True when `l` is an element of L for this mesh.
  bool has_link(const Link& l) const;

  std::string descriptor() const;  // "<rows>x<cols>"

  friend bool operator==(const MeshNoC&, const MeshNoC&) = default;

 private:
  std::uint32_t rows_;
  std::uint32_t cols_;
};

/// Crossbar settings for every router of a mesh. An output is driven by at most
/// one input (enforced by validate_config); an input may fan out.
class CrossbarConfig {
 public:
  using Connection = std::pair<Port, Port>;  // (in, out)

  /// Throws Error on a self connection (in == out).
  void connect(const Coord& router, Port in, Port out);

  const std::map<Coord, std::set<Connection>>& routers() const { return routers_; }
  std::set<Connection> connections(const Coord& router) const;
  bool empty() const { return routers_.empty(); }
  std::size_t connection_count() const;

  friend bool operator==(const CrossbarConfig&, const CrossbarConfig&) = default;

 private:
  std::map<Coord, std::set<Connection>> routers_;
};

struct ConfigViolation {
  enum class Rule { UnknownRouter, MultipleDrivers, BidirectionalLink, LocalBothDirections };

  Rule rule;
  Coord router;
  Port port;
  std::string message;
};

/// Checks for a single driver per output, each inter-router link used in one
/// direction, and the Local port used as input xor output. Empty result means valid.
std::vector<ConfigViolation> validate_config(const MeshNoC& noc, const CrossbarConfig& cfg);

struct ConfigFile {
  std::string app;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  CrossbarConfig config;
};

/// "config app=<ident> mesh=<r>x<c>" then "router (<r>,<c>): <IN>-><OUT>[,...]".
std::string write_config(const std::string& app, const MeshNoC& noc, const CrossbarConfig& cfg);
ConfigFile parse_config(std::string_view text);

}  // namespace sdfnoc
