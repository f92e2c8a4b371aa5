#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sdfnoc::cli {

struct Io {
  std::ostream& out;
  std::ostream& err;
};

// Each command returns a process exit code and reports problems on io.err as
// "<file>:<line>:<column>: <message>". Without `out_path`, results go to io.out.

int cmd_validate(const std::vector<std::string>& files, Io io);
int cmd_merge(const std::vector<std::string>& app_files, const std::optional<std::string>& out_path, Io io);
int cmd_pnr(const std::string& union_file, const std::string& mesh, std::uint64_t seed, unsigned max_rip_up,
            const std::optional<std::string>& out_path, Io io);
int cmd_config(const std::string& pnr_file, const std::string& app, const std::optional<std::string>& out_path, Io io);

struct SimulateArgs {
  std::string pnr_file;
  std::string app;
  std::string streams_file;
  std::uint32_t delay_max = 0;
  std::uint64_t seed = 0;
  std::optional<std::string> out_path;
  std::optional<std::string> trace_path;
};
int cmd_simulate(const SimulateArgs& args, Io io);

struct ReportArgs {
  std::string project_file;
  std::string mode = "model";
  std::optional<std::string> areas_file;  // overrides the project's table
  std::vector<std::pair<std::string, std::uint64_t>> measured;  // overrides; "union" names the merged total
};
int cmd_report(const ReportArgs& args, Io io);

int cmd_export_dot(const std::string& file, const std::optional<std::string>& out_path, Io io);

}  // namespace sdfnoc::cli
