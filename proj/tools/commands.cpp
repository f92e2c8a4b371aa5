#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "sdfnoc/app_format.hpp"
#include "sdfnoc/design.hpp"
#include "sdfnoc/dot.hpp"
#include "sdfnoc/error.hpp"
#include "sdfnoc/imaging.hpp"
#include "sdfnoc/netpbm.hpp"
#include "sdfnoc/report.hpp"
#include "sdfnoc/sim.hpp"
#include "sdfnoc/streams.hpp"
#include "sdfnoc/text.hpp"

namespace sdfnoc::cli {

namespace {

namespace fs = std::filesystem;

// Runs `body`, mapping exceptions to diagnostics prefixed with `file`.
int guarded(Io io, const std::string& file, const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const ParseError& e) {
    io.err << file << ':' << e.line() << ':' << e.column() << ": " << e.detail() << '\n';
  } catch (const CapacityError& e) {
    io.err << file << ": capacity: " << e.what() << '\n';
  } catch (const RoutingError& e) {
    io.err << file << ": routing: " << e.what() << '\n';
  } catch (const SimulationError& e) {
    io.err << file << ": simulation: " << e.what() << '\n';
  } catch (const std::exception& e) {
    io.err << file << ": " << e.what() << '\n';
  }
  return 1;
}

void emit(const std::optional<std::string>& out_path, const std::string& doc, Io io) {
  if (out_path) {
    text::write_file(*out_path, doc);
  } else {
    io.out << doc;
  }
}

std::string first_word(const std::string& doc) {
  for (const auto& line : text::split_lines(doc, false)) return std::string(line.words[0].text);
  return {};
}

std::vector<DataflowGraph> load_apps(const std::vector<std::string>& files, Io io, bool& ok) {
  std::vector<DataflowGraph> graphs;
  for (const auto& f : files) {
    ok = guarded(io, f, [&] { graphs.push_back(parse_app_graph(text::read_file(f))); }) == 0 && ok;
  }
  return graphs;
}

// Registry arity check for every node of an application graph.
void check_types(const DataflowGraph& g, const OperatorRegistry& reg) {
  for (const Node& n : g.nodes()) {
    const Operator* op = reg.find(n.type.str());
    if (!op) throw OperatorError("node '" + n.id + "' has type '" + n.type.str() + "', which has no operator");
    if (op->in_arity != n.in_arity || op->out_arity != n.out_arity) {
      throw OperatorError("node '" + n.id + "' arity does not match operator " + n.type.str());
    }
  }
}

}  // namespace

int cmd_validate(const std::vector<std::string>& files, Io io) {
  if (files.empty()) {
    io.err << "validate: no files given\n";
    return 2;
  }
  const OperatorRegistry reg = standard_registry();
  int status = 0;
  for (const auto& f : files) {
    status |= guarded(io, f, [&] {
      const std::string doc = text::read_file(f);
      const std::string kind = first_word(doc);
      std::string summary;
      if (kind == "app") {
        const DataflowGraph g = parse_app_graph(doc);
        check_types(g, reg);
        summary = "application " + g.name() + ", " + std::to_string(g.nodes().size()) + " nodes, " +
                  std::to_string(g.edges().size()) + " edges";
      } else if (kind == "union") {
        const Design d = parse_union(doc);
        summary = "union of " + std::to_string(d.union_graph.app_count()) + " applications, " +
                  std::to_string(d.packed.packs.size()) + " packs";
      } else if (kind == "pnr") {
        const Design d = parse_pnr(doc);
        summary = "place-and-route on " + d.pnr->noc.descriptor() + ", " + std::to_string(d.pnr->routes.size()) +
                  " routed edges";
      } else if (kind == "config") {
        const ConfigFile c = parse_config(doc);
        const auto v = validate_config(MeshNoC(c.rows, c.cols), c.config);
        if (!v.empty()) throw Error("invalid configuration: " + v.front().message);
        summary = "configuration for " + c.app + ", " + std::to_string(c.config.connection_count()) + " connections";
      } else if (kind == "stream") {
        const NamedStreams s = load_streams(f);
        summary = std::to_string(s.size()) + " streams";
      } else {
        throw ParseError("unrecognised document kind '" + kind + "'", 1, 1);
      }
      io.out << f << ": ok (" << summary << ")\n";
    });
  }
  return status;
}

int cmd_merge(const std::vector<std::string>& app_files, const std::optional<std::string>& out_path, Io io) {
  if (app_files.empty()) {
    io.err << "merge: no application files given\n";
    return 2;
  }
  bool ok = true;
  const auto graphs = load_apps(app_files, io, ok);
  if (!ok) return 1;
  return guarded(io, app_files.front(), [&] {
    const MergeResult m = merge(graphs);
    emit(out_path, write_union(m.union_graph, m.marks), io);
  });
}

int cmd_pnr(const std::string& union_file, const std::string& mesh, std::uint64_t seed, unsigned max_rip_up,
            const std::optional<std::string>& out_path, Io io) {
  return guarded(io, union_file, [&] {
    const auto [rows, cols] = text::parse_dims(mesh, 0, 0);
    const MeshNoC noc(rows, cols);
    Design d = parse_union(text::read_file(union_file));
    const PnrResult r = place_and_route(d.union_graph, d.packed, noc, seed, RouteOptions{max_rip_up});
    emit(out_path, write_pnr(d.union_graph, d.marks, d.packed, r), io);
  });
}

int cmd_config(const std::string& pnr_file, const std::string& app, const std::optional<std::string>& out_path,
               Io io) {
  return guarded(io, pnr_file, [&] {
    const Design d = parse_pnr(text::read_file(pnr_file));
    const AppId id = d.union_graph.find_app(app);
    const CrossbarConfig cfg = derive_config(d.pnr->noc, d.union_graph, d.pnr->routes, id);
    emit(out_path, write_config(d.union_graph.app(id).name, d.pnr->noc, cfg), io);
  });
}

int cmd_simulate(const SimulateArgs& args, Io io) {
  return guarded(io, args.pnr_file, [&] {
    const Design d = parse_pnr(text::read_file(args.pnr_file));
    const AppId id = d.union_graph.find_app(args.app);
    NamedStreams named;
    try {
      named = load_streams(args.streams_file);
    } catch (const ParseError& e) {
      throw Error(args.streams_file + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " +
                  e.detail());
    }
    const StreamMap inputs = to_union_streams(d.union_graph, id, named);
    const CrossbarConfig cfg = derive_config(d.pnr->noc, d.union_graph, d.pnr->routes, id);
    DelayModel delays;
    delays.seed = args.seed;
    delays.max_delay = args.delay_max;

    std::ofstream trace;
    SimOptions options;
    if (args.trace_path) {
      trace.open(*args.trace_path);
      if (!trace) throw Error("cannot open '" + *args.trace_path + "' for writing");
      options.trace = &trace;
    }
    const SimResult r = simulate(d, cfg, standard_registry(), inputs, delays, id, options);
    const NamedStreams outputs = to_app_streams(d.union_graph, id, r.outputs);
    if (args.out_path) {
      save_streams(*args.out_path, outputs);
    } else {
      io.out << write_streams(outputs, [](const std::string&, std::size_t, const Image& img) -> std::string {
        throw Error("image outputs (" + describe(img) + ") need --out");
      });
    }
    io.err << "simulated " << r.ticks << " ticks\n";
  });
}

int cmd_report(const ReportArgs& args, Io io) {
  return guarded(io, args.project_file, [&] {
    Project p = parse_project(text::read_file(args.project_file));
    resolve_paths(p, fs::path(args.project_file).parent_path().string());
    for (const auto& [name, v] : args.measured) {
      if (name == "union") {
        p.measured_union = v;
        continue;
      }
      bool replaced = false;
      for (auto& [n, old] : p.measured) {
        if (n == name) {
          old = v;
          replaced = true;
        }
      }
      if (!replaced) p.measured.emplace_back(name, v);
    }

    AreaReport r;
    if (args.mode == "given") {
      if (!p.measured_union) throw Error("given mode needs a measured union total ('measured union <n>')");
      r = report_given(p.measured, *p.measured_union);
    } else if (args.mode == "model") {
      const std::string areas = args.areas_file.value_or(p.areas_file);
      if (areas.empty()) throw Error("model mode needs an area table (--areas or 'areas' in the project)");
      const AreaTable table = parse_area_table(text::read_file(areas));
      std::vector<DataflowGraph> graphs;
      for (const auto& f : p.app_files) graphs.push_back(parse_app_graph(text::read_file(f)));
      r = report_model(graphs, table);
    } else {
      throw Error("unknown report mode '" + args.mode + "' (expected model or given)");
    }
    io.out << format_report(r);
  });
}

int cmd_export_dot(const std::string& file, const std::optional<std::string>& out_path, Io io) {
  return guarded(io, file, [&] {
    const std::string doc = text::read_file(file);
    const std::string kind = first_word(doc);
    std::string dot;
    if (kind == "app") {
      dot = to_dot(parse_app_graph(doc));
    } else if (kind == "union") {
      const Design d = parse_union(doc);
      dot = to_dot(d.union_graph, d.packed);
    } else if (kind == "pnr") {
      dot = to_dot(parse_pnr(doc));
    } else {
      throw ParseError("cannot export '" + kind + "' documents to DOT", 1, 1);
    }
    emit(out_path, dot, io);
  });
}

}  // namespace sdfnoc::cli
