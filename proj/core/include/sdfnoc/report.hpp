#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdfnoc/graph.hpp"
#include "sdfnoc/merge.hpp"

namespace sdfnoc {

/// Inputs of a design flow run, as listed in a project file:
///
///   app <path>            (one per application, in color order)
///   mesh <r>x<c>
///   areas <path>
///   seed <uint>
///   measured <name> <uint>   (standalone totals; name "union" for the merged design)
///
/// Paths are stored as written; resolve_paths() makes them relative to a base.
struct Project {
  std::vector<std::string> app_files;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::string areas_file;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::uint64_t>> measured;
  std::optional<std::uint64_t> measured_union;
};

Project parse_project(std::string_view text);
std::string write_project(const Project& p);
void resolve_paths(Project& p, const std::string& base_dir);

struct AreaReport {
  enum class Mode { Model, Given };

  Mode mode = Mode::Model;
  std::vector<std::pair<std::string, std::uint64_t>> standalone;
  std::uint64_t union_area = 0;
  /// (sum standalone - union) / sum standalone.
  double savings = 0.0;
};

double savings_fraction(std::span<const std::uint64_t> standalone, std::uint64_t union_area);

/// Measured totals supplied by the user.
AreaReport report_given(std::vector<std::pair<std::string, std::uint64_t>> standalone, std::uint64_t union_area);

/// area(G_i merged alone) per application against area(merge of all).
AreaReport report_model(std::span<const DataflowGraph> graphs, const AreaTable& table);

/// Percentages with two decimals, e.g. "savings 26.44%".
std::string format_report(const AreaReport& r);

}  // namespace sdfnoc
