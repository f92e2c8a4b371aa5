#include "sdfnoc/report.hpp"

#include <cstdio>
#include <filesystem>
#include <numeric>
#include <sstream>

#include "sdfnoc/error.hpp"
#include "sdfnoc/text.hpp"

namespace sdfnoc {

Project parse_project(std::string_view doc) {
  Project p;
  bool have_mesh = false;
  for (const auto& line : text::split_lines(doc, true)) {
    const auto& w = line.words;
    const std::string_view kw = w[0].text;
    const auto arity = [&](std::size_t n) {
      if (w.size() != n) throw ParseError("wrong number of fields for '" + std::string(kw) + "'", line.number, w[0].column);
    };
    if (kw == "app") {
      arity(2);
      p.app_files.emplace_back(w[1].text);
    } else if (kw == "mesh") {
      arity(2);
      std::tie(p.rows, p.cols) = text::parse_dims(w[1].text, line.number, w[1].column);
      if (p.rows == 0 || p.cols == 0) throw ParseError("mesh dimensions must be at least 1x1", line.number, w[1].column);
      have_mesh = true;
    } else if (kw == "areas") {
      arity(2);
      p.areas_file = std::string(w[1].text);
    } else if (kw == "seed") {
      arity(2);
      p.seed = text::parse_uint(w[1].text, line.number, w[1].column);
    } else if (kw == "measured") {
      arity(3);
      const auto v = text::parse_uint(w[2].text, line.number, w[2].column);
      if (w[1].text == "union") {
        p.measured_union = v;
      } else {
        p.measured.emplace_back(std::string(w[1].text), v);
      }
    } else {
      throw ParseError("unknown directive '" + std::string(kw) + "'", line.number, w[0].column);
    }
  }
  if (p.app_files.empty()) throw ParseError("project lists no applications", 1, 1);
  if (!have_mesh) throw ParseError("project has no 'mesh' line", 1, 1);
  return p;
}

std::string write_project(const Project& p) {
  std::ostringstream out;
  for (const auto& f : p.app_files) out << "app " << f << '\n';
  out << "mesh " << p.rows << 'x' << p.cols << '\n';
  if (!p.areas_file.empty()) out << "areas " << p.areas_file << '\n';
  out << "seed " << p.seed << '\n';
  for (const auto& [name, v] : p.measured) out << "measured " << name << ' ' << v << '\n';
  if (p.measured_union) out << "measured union " << *p.measured_union << '\n';
  return out.str();
}

void resolve_paths(Project& p, const std::string& base_dir) {
  namespace fs = std::filesystem;
  const auto fix = [&](std::string& s) {
    if (!s.empty() && fs::path(s).is_relative()) s = (fs::path(base_dir) / s).lexically_normal().string();
  };
  for (auto& f : p.app_files) fix(f);
  fix(p.areas_file);
}

double savings_fraction(std::span<const std::uint64_t> standalone, std::uint64_t union_area) {
  const std::uint64_t total = std::accumulate(standalone.begin(), standalone.end(), std::uint64_t{0});
  if (total == 0) throw Error("standalone areas sum to zero");
  return (static_cast<double>(total) - static_cast<double>(union_area)) / static_cast<double>(total);
}

AreaReport report_given(std::vector<std::pair<std::string, std::uint64_t>> standalone, std::uint64_t union_area) {
  if (standalone.empty()) throw Error("given mode needs at least one standalone total");
  AreaReport r;
  r.mode = AreaReport::Mode::Given;
  std::vector<std::uint64_t> values;
  for (const auto& [name, v] : standalone) values.push_back(v);
  r.standalone = std::move(standalone);
  r.union_area = union_area;
  r.savings = savings_fraction(values, union_area);
  return r;
}

AreaReport report_model(std::span<const DataflowGraph> graphs, const AreaTable& table) {
  if (graphs.empty()) throw Error("model mode needs at least one application");
  AreaReport r;
  r.mode = AreaReport::Mode::Model;
  std::vector<std::uint64_t> values;
  for (const DataflowGraph& g : graphs) {
    const MergeResult alone = merge(std::span<const DataflowGraph>(&g, 1));
    values.push_back(area(alone.union_graph, alone.packed, table));
    r.standalone.emplace_back(g.name(), values.back());
  }
  const MergeResult all = merge(graphs);
  r.union_area = area(all.union_graph, all.packed, table);
  r.savings = savings_fraction(values, r.union_area);
  return r;
}

std::string format_report(const AreaReport& r) {
  std::ostringstream out;
  out << "mode " << (r.mode == AreaReport::Mode::Given ? "given" : "model") << '\n';
  std::uint64_t total = 0;
  for (const auto& [name, v] : r.standalone) {
    out << "standalone " << name << ' ' << v << '\n';
    total += v;
  }
  out << "standalone_total " << total << '\n';
  out << "union " << r.union_area << '\n';
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", r.savings * 100.0);
  out << "savings " << buf << "%\n";
  return out.str();
}

}  // namespace sdfnoc
