#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

std::pair<std::string, std::uint64_t> parse_measured(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--measured", "expected NAME=SLICES");
  try {
    return {s.substr(0, eq), std::stoull(s.substr(eq + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--measured", "expected NAME=SLICES");
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace sdfnoc::cli;
  CLI::App app{"Merge dataflow applications onto a circuit-switched mesh NoC"};
  app.require_subcommand(1);
  const Io io{std::cout, std::cerr};
  int status = 0;

  std::optional<std::string> out;
  std::uint64_t seed = 0;
  std::string mesh = "2x5";
  std::string app_name;

  auto* validate = app.add_subcommand("validate", "Parse and check any sdfnoc document");
  std::vector<std::string> files;
  validate->add_option("files", files, "Documents to check")->required()->check(CLI::ExistingFile);
  validate->callback([&] { status = cmd_validate(files, io); });

  auto* merge = app.add_subcommand("merge", "Merge application graphs into a packed union");
  std::vector<std::string> apps;
  merge->add_option("apps", apps, "Application graph files, in color order")->required()->check(CLI::ExistingFile);
  merge->add_option("--out", out, "Output union file");
  merge->callback([&] { status = cmd_merge(apps, out, io); });

  auto* pnr = app.add_subcommand("pnr", "Place and route a union onto a mesh");
  std::string union_file;
  unsigned max_rip_up = 50;
  pnr->add_option("union", union_file, "Union file")->required()->check(CLI::ExistingFile);
  pnr->add_option("--mesh", mesh, "Mesh size RxC")->capture_default_str();
  pnr->add_option("--seed", seed, "Placement seed")->capture_default_str();
  pnr->add_option("--max-rip-up", max_rip_up, "Rip-up iteration cap")->capture_default_str();
  pnr->add_option("--out", out, "Output pnr file");
  pnr->callback([&] { status = cmd_pnr(union_file, mesh, seed, max_rip_up, out, io); });

  auto* config = app.add_subcommand("config", "Emit one application's crossbar configuration");
  std::string pnr_file;
  config->add_option("pnr", pnr_file, "PnR file")->required()->check(CLI::ExistingFile);
  config->add_option("--app", app_name, "Application name or index")->required();
  config->add_option("--out", out, "Output config file");
  config->callback([&] { status = cmd_config(pnr_file, app_name, out, io); });

  auto* simulate = app.add_subcommand("simulate", "Run one application on the configured mesh");
  SimulateArgs sim;
  simulate->add_option("pnr", sim.pnr_file, "PnR file")->required()->check(CLI::ExistingFile);
  simulate->add_option("streams", sim.streams_file, "Input stream file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--app", sim.app, "Application name or index")->required();
  simulate->add_option("--delay-max", sim.delay_max, "Upper bound of per-link delays")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Delay seed")->capture_default_str();
  simulate->add_option("--out", sim.out_path, "Output stream file");
  simulate->add_option("--trace", sim.trace_path, "Write a per-link event log");
  simulate->callback([&] { status = cmd_simulate(sim, io); });

  auto* report = app.add_subcommand("report", "Compare standalone and merged area");
  ReportArgs rep;
  std::vector<std::string> measured;
  report->add_option("project", rep.project_file, "Project file")->required()->check(CLI::ExistingFile);
  report->add_option("--mode", rep.mode, "model or given")
      ->check(CLI::IsMember({"model", "given"}))
      ->capture_default_str();
  report->add_option("--areas", rep.areas_file, "Area table overriding the project's");
  report->add_option("--measured", measured, "NAME=SLICES measured total; NAME 'union' for the merged design");
  report->callback([&] {
    for (const auto& m : measured) rep.measured.push_back(parse_measured(m));
    status = cmd_report(rep, io);
  });

  auto* dot = app.add_subcommand("export-dot", "Render an app, union or pnr file as Graphviz");
  std::string dot_file;
  dot->add_option("file", dot_file, "Input document")->required()->check(CLI::ExistingFile);
  dot->add_option("--out", out, "Output .dot file");
  dot->callback([&] { status = cmd_export_dot(dot_file, out, io); });

  CLI11_PARSE(app, argc, argv);
  return status;
}
