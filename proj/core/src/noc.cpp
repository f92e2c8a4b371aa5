#include "sdfnoc/noc.hpp"

#include <charconv>
#include <sstream>

#include "sdfnoc/error.hpp"
#include "sdfnoc/text.hpp"

namespace sdfnoc {

char port_char(Port p) {
  switch (p) {
    case Port::N: return 'N';
    case Port::E: return 'E';
    case Port::S: return 'S';
    case Port::W: return 'W';
    case Port::L: return 'L';
  }
  return '?';
}

std::optional<Port> parse_port(char c) {
  switch (c) {
    case 'N': return Port::N;
    case 'E': return Port::E;
    case 'S': return Port::S;
    case 'W': return Port::W;
    case 'L': return Port::L;
    default: return std::nullopt;
  }
}

Port opposite(Port p) {
  switch (p) {
    case Port::N: return Port::S;
    case Port::S: return Port::N;
    case Port::E: return Port::W;
    case Port::W: return Port::E;
    case Port::L: break;
  }
  return Port::L;
}

std::string to_string(const Coord& c) { return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")"; }

std::string to_string(const Link& l) {
  if (l.kind == Link::Kind::Intra) {
    return "X" + to_string(l.from) + port_char(l.from_port) + ">" + port_char(l.to_port);
  }
  return "I" + to_string(l.from) + port_char(l.from_port) + "=" + to_string(l.to) + port_char(l.to_port);
}

namespace {

// Parses "(r,c)" at the front of `s`, advancing it.
std::optional<Coord> take_coord(std::string_view& s) {
  if (s.empty() || s.front() != '(') return std::nullopt;
  const auto comma = s.find(',');
  const auto close = s.find(')');
  if (comma == std::string_view::npos || close == std::string_view::npos || comma > close) return std::nullopt;
  Coord c;
  auto r1 = std::from_chars(s.data() + 1, s.data() + comma, c.row);
  auto r2 = std::from_chars(s.data() + comma + 1, s.data() + close, c.col);
  if (r1.ec != std::errc() || r1.ptr != s.data() + comma || r2.ec != std::errc() || r2.ptr != s.data() + close ||
      comma == 1 || close == comma + 1) {
    return std::nullopt;
  }
  s.remove_prefix(close + 1);
  return c;
}

std::optional<Port> take_port(std::string_view& s) {
  if (s.empty()) return std::nullopt;
  auto p = parse_port(s.front());
  if (p) s.remove_prefix(1);
  return p;
}

}  // namespace

std::optional<Coord> parse_coord(std::string_view s) {
  auto c = take_coord(s);
  if (!c || !s.empty()) return std::nullopt;
  return c;
}

std::optional<Link> parse_link(std::string_view s) {
  if (s.empty()) return std::nullopt;
  const char kind = s.front();
  s.remove_prefix(1);
  auto a = take_coord(s);
  if (!a) return std::nullopt;
  auto p1 = take_port(s);
  if (!p1 || s.empty()) return std::nullopt;
  if (kind == 'X') {
    if (s.front() != '>') return std::nullopt;
    s.remove_prefix(1);
    auto p2 = take_port(s);
    if (!p2 || !s.empty()) return std::nullopt;
    return Link::intra(*a, *p1, *p2);
  }
  if (kind == 'I') {
    if (s.front() != '=') return std::nullopt;
    s.remove_prefix(1);
    auto b = take_coord(s);
    if (!b) return std::nullopt;
    auto p2 = take_port(s);
    if (!p2 || !s.empty()) return std::nullopt;
    return Link::inter(*a, *p1, *b, *p2);
  }
  return std::nullopt;
}

MeshNoC::MeshNoC(std::uint32_t rows, std::uint32_t cols) : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) throw Error("mesh dimensions must be at least 1x1");
}

std::optional<Coord> MeshNoC::neighbor(const Coord& c, Port p) const {
  switch (p) {
    case Port::N:
      if (c.row == 0) return std::nullopt;
      return Coord{c.row - 1, c.col};
    case Port::S:
      if (c.row + 1 >= rows_) return std::nullopt;
      return Coord{c.row + 1, c.col};
    case Port::W:
      if (c.col == 0) return std::nullopt;
      return Coord{c.row, c.col - 1};
    case Port::E:
      if (c.col + 1 >= cols_) return std::nullopt;
      return Coord{c.row, c.col + 1};
    case Port::L:
      break;
  }
  return std::nullopt;
}

std::size_t MeshNoC::adjacency_count() const {
  return static_cast<std::size_t>(rows_) * (cols_ - 1) + static_cast<std::size_t>(cols_) * (rows_ - 1);
}

std::vector<Link> MeshNoC::intra_links() const {
  std::vector<Link> out;
  out.reserve(router_count() * 20);
  for (std::size_t i = 0; i < router_count(); ++i) {
    for (Port in : kAllPorts) {
      for (Port o : kAllPorts) {
        if (in != o) out.push_back(Link::intra(coord(i), in, o));
      }
    }
  }
  return out;
}

std::vector<Link> MeshNoC::inter_links() const {
  std::vector<Link> out;
  for (std::size_t i = 0; i < router_count(); ++i) {
    const Coord c = coord(i);
    for (Port p : kAllPorts) {
      if (auto n = neighbor(c, p)) out.push_back(Link::inter(c, p, *n, opposite(p)));
    }
  }
  return out;
}

std::vector<Link> MeshNoC::links() const {
  auto out = intra_links();
  auto inter = inter_links();
  out.insert(out.end(), inter.begin(), inter.end());
  return out;
}

bool MeshNoC::has_link(const Link& l) const {
  if (!contains(l.from) || !contains(l.to)) return false;
  if (l.kind == Link::Kind::Intra) return l.from == l.to && l.from_port != l.to_port;
  if (l.from_port == Port::L) return false;
  auto n = neighbor(l.from, l.from_port);
  return n && *n == l.to && l.to_port == opposite(l.from_port);
}

std::string MeshNoC::descriptor() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

void CrossbarConfig::connect(const Coord& router, Port in, Port out) {
  if (in == out) {
    throw Error(std::string("self connection ") + port_char(in) + "->" + port_char(out) + " at router " +
                to_string(router));
  }
  routers_[router].insert({in, out});
}

std::set<CrossbarConfig::Connection> CrossbarConfig::connections(const Coord& router) const {
  auto it = routers_.find(router);
  return it == routers_.end() ? std::set<Connection>{} : it->second;
}

std::size_t CrossbarConfig::connection_count() const {
  std::size_t n = 0;
  for (const auto& [r, conns] : routers_) n += conns.size();
  return n;
}

std::vector<ConfigViolation> validate_config(const MeshNoC& noc, const CrossbarConfig& cfg) {
  std::vector<ConfigViolation> out;
  // drives[router][port]: output port driven by some connection.
  std::map<Coord, std::array<bool, 5>> drives;
  for (const auto& [router, conns] : cfg.routers()) {
    if (!noc.contains(router)) {
      out.push_back({ConfigViolation::Rule::UnknownRouter, router, Port::L,
                     "router " + to_string(router) + " is outside the " + noc.descriptor() + " mesh"});
      continue;
    }
    std::array<int, 5> drivers{};
    bool local_in = false;
    bool local_out = false;
    for (const auto& [in, o] : conns) {
      ++drivers[static_cast<int>(o)];
      local_in |= in == Port::L;
      local_out |= o == Port::L;
    }
    auto& d = drives[router];
    for (Port p : kAllPorts) {
      d[static_cast<int>(p)] = drivers[static_cast<int>(p)] > 0;
      if (drivers[static_cast<int>(p)] > 1) {
        out.push_back({ConfigViolation::Rule::MultipleDrivers, router, p,
                       "router " + to_string(router) + " output " + port_char(p) + " has " +
                           std::to_string(drivers[static_cast<int>(p)]) + " drivers"});
      }
    }
    if (local_in && local_out) {
      out.push_back({ConfigViolation::Rule::LocalBothDirections, router, Port::L,
                     "router " + to_string(router) + " local port used as both input and output"});
    }
  }
  for (const auto& [router, d] : drives) {
    for (Port p : {Port::E, Port::S}) {
      auto n = noc.neighbor(router, p);
      if (!n || !d[static_cast<int>(p)]) continue;
      auto it = drives.find(*n);
      if (it != drives.end() && it->second[static_cast<int>(opposite(p))]) {
        out.push_back({ConfigViolation::Rule::BidirectionalLink, router, p,
                       "link " + to_string(router) + port_char(p) + "<->" + to_string(*n) +
                           port_char(opposite(p)) + " driven in both directions"});
      }
    }
  }
  return out;
}

std::string write_config(const std::string& app, const MeshNoC& noc, const CrossbarConfig& cfg) {
  std::ostringstream out;
  out << "config app=" << app << " mesh=" << noc.descriptor() << '\n';
  for (const auto& [router, conns] : cfg.routers()) {
    if (conns.empty()) continue;
    out << "router " << to_string(router) << ":";
    bool first = true;
    for (const auto& [in, o] : conns) {
      out << (first ? " " : ",") << port_char(in) << "->" << port_char(o);
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

ConfigFile parse_config(std::string_view doc) {
  const auto lines = text::split_lines(doc, true);
  if (lines.empty()) throw ParseError("empty config document", 1, 1);
  const auto& head = lines.front();
  if (head.words.size() != 3 || head.words[0].text != "config") {
    throw ParseError("expected 'config app=<ident> mesh=<r>x<c>'", head.number, head.words[0].column);
  }
  ConfigFile f;
  f.app = std::string(text::expect_key(head.words[1], "app", head.number));
  if (!text::is_ident(f.app)) throw ParseError("invalid app name '" + f.app + "'", head.number, head.words[1].column);
  std::tie(f.rows, f.cols) =
      text::parse_dims(text::expect_key(head.words[2], "mesh", head.number), head.number, head.words[2].column + 5);
  const MeshNoC noc(f.rows, f.cols);

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto& w = line.words;
    if (w[0].text != "router" || w.size() < 3) {
      throw ParseError("expected 'router (<r>,<c>): <IN>-><OUT>[,...]'", line.number, w[0].column);
    }
    std::string_view coord_text = w[1].text;
    if (!coord_text.ends_with(':')) throw ParseError("expected ':' after router coordinate", line.number, w[1].column);
    coord_text.remove_suffix(1);
    auto router = take_coord(coord_text);
    if (!router || !coord_text.empty()) throw ParseError("malformed router coordinate", line.number, w[1].column);
    if (!noc.contains(*router)) throw ParseError("router outside mesh", line.number, w[1].column);

    std::string joined;
    for (std::size_t k = 2; k < w.size(); ++k) joined += w[k].text;
    std::string_view rest = joined;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      std::string_view conn = rest.substr(0, comma);
      if (conn.size() != 4 || conn.substr(1, 2) != "->") {
        throw ParseError("malformed connection '" + std::string(conn) + "'", line.number, w[2].column);
      }
      auto in = parse_port(conn[0]);
      auto o = parse_port(conn[3]);
      if (!in || !o) throw ParseError("unknown port in '" + std::string(conn) + "'", line.number, w[2].column);
      if (*in == *o) throw ParseError("self connection '" + std::string(conn) + "'", line.number, w[2].column);
      f.config.connect(*router, *in, *o);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
      if (rest.empty()) throw ParseError("trailing ','", line.number, w[2].column);
    }
  }
  return f;
}

}  // namespace sdfnoc
