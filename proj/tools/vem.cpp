// vem: run benchmark configs, audit projections, generate and inspect meshes.
//
// exit status: 0 ok, 1 audit failures, 2 usage or config error (including an
// unknown problem id), 3 solver failure, 4 file error.

#include "vem/mesh_io.hpp"
#include "vem/runner.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace vem;

namespace {

int print_mesh_info(const Mesh& mesh) {
  std::size_t bedges = 0, tris = 0;
  for (const Edge& e : mesh.edges()) bedges += e.boundary;
  std::map<std::size_t, int> sides;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    ++sides[mesh.polygon(static_cast<int>(e)).size()];
    tris += mesh.triangles(static_cast<int>(e)).size();
  }
  std::cout << "vertices " << mesh.num_vertices() << "\nedges " << mesh.num_edges() << " (" << bedges
            << " on the boundary)\nelements " << mesh.num_elements() << "\ntriangles " << tris << "\narea "
            << mesh.total_area() << "\nh_max " << mesh.max_diameter() << "\nh_mean " << mesh_size(mesh)
            << "\nboundary components " << boundary_components(mesh) << "\n";
  for (const auto& [n, count] : sides) std::cout << "  " << n << "-gons " << count << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual element benchmark runner"};
  app.require_subcommand(1);

  std::string config;
  int levels = -1, threads = -1;
  std::string output;
  auto* run_cmd = app.add_subcommand("run", "solve a benchmark config and write CSV/VTK output");
  run_cmd->add_option("config", config, "JSON config")->required();
  run_cmd->add_option("--levels", levels, "number of refinement levels");
  run_cmd->add_option("--threads", threads, "worker threads (0: all cores)");
  run_cmd->add_option("--output", output, "output directory");

  auto* audit_cmd = app.add_subcommand("audit", "check projection solvability on the config mesh");
  audit_cmd->add_option("config", config, "JSON config")->required();
  audit_cmd->add_option("--threads", threads, "worker threads (0: all cores)");

  auto* mesh_cmd = app.add_subcommand("mesh", "generate or inspect meshes");
  mesh_cmd->require_subcommand(1);
  MeshConfig mc;
  std::vector<double> box;
  std::string out_path, in_path;
  int level = 0;
  auto* gen = mesh_cmd->add_subcommand("gen", "write a generated mesh as JSON");
  gen->add_option("type", mc.type, "voronoi | cartesian | cylinder")->required();
  gen->add_option("output", out_path, "output file")->required();
  gen->add_option("--cells", mc.cells, "Voronoi cells");
  gen->add_option("--lloyd", mc.lloyd, "Lloyd iterations");
  gen->add_option("--seed", mc.seed, "random seed");
  gen->add_option("--nx", mc.nx, "Cartesian cells in x");
  gen->add_option("--ny", mc.ny, "Cartesian cells in y");
  gen->add_option("--segments", mc.segments, "cylinder polygon sides");
  gen->add_option("--refine", mc.refine, "cylinder background refinement");
  gen->add_option("--box", box, "x0 y0 x1 y1")->expected(4);
  gen->add_option("--level", level, "refinement level");
  auto* info = mesh_cmd->add_subcommand("info", "print mesh statistics");
  info->add_option("input", in_path, "mesh JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const RunConfig cfg = load_config(config);
      RunOptions opt;
      opt.levels = levels;
      opt.threads = threads;
      opt.output = output;
      const RunReport report = run(cfg, opt);
      if (report.has_errors) std::cout << format_eoc_csv(report);
      for (const LevelResult& l : report.levels)
        for (const auto& [k, v] : l.metrics) std::cout << "level " << l.level << " " << k << " " << v << "\n";
      for (const auto& f : report.files) std::cout << "wrote " << f << "\n";
      return 0;
    }
    if (*audit_cmd) {
      const AuditSummary s = audit(load_config(config), threads);
      std::cout << s.text;
      return s.failures ? 1 : 0;
    }
    if (*gen) {
      if (!box.empty()) mc.box = {box[0], box[1], box[2], box[3]};
      if (mc.type == "file") throw ConfigError("mesh gen needs a generator type");
      const Mesh mesh = make_mesh(mc, level);
      write_mesh(mesh, out_path);
      return print_mesh_info(mesh);
    }
    if (*info) return print_mesh_info(read_mesh(in_path));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const IOError& e) {
    std::cerr << "file error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
