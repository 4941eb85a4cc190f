#pragma once

#include "vem/problems.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vem {

/// Mesh description of a run. Level k refines the base mesh: Voronoi cell
/// counts quadruple, Cartesian counts and the cylinder resolution double.
struct MeshConfig {
  std::string type = "voronoi";  // voronoi | cartesian | cylinder | file
  Rectangle box;
  bool box_given = false;
  int cells = 64;  // voronoi
  int lloyd = 20;
  unsigned seed = 7;
  int nx = 8, ny = 8;  // cartesian
  int segments = 64, refine = 1;  // cylinder
  std::string path;  // file
};

struct OutputConfig {
  std::string directory = "output";
  bool vtk = true;
};

struct RunConfig {
  std::string problem;
  MeshConfig mesh;
  std::vector<SpaceSpec> spaces;  // run uses the first, audit all of them
  std::map<std::string, double> numbers;  // numeric problem parameters
  std::string variant = "a";
  SolverSettings solver;
  int levels = 1;
  int threads = 0;
  OutputConfig output;
};

extern const std::vector<std::string> kProblems;

class UnknownProblemError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

/// Parse and validate a JSON config; unknown keys, wrong types and bad
/// values throw ConfigError before any computation.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

Mesh make_mesh(const MeshConfig& m, int level);
/// sqrt(|Omega| / #elements)
double mesh_size(const Mesh& mesh);

struct LevelResult {
  int level = 0;
  double h = 0.0;
  int ndofs = 0;
  ErrorNorms errors;
  std::map<std::string, double> metrics;  // problem specific diagnostics
};

struct RunReport {
  std::vector<LevelResult> levels;
  bool has_h2 = false;
  bool has_errors = true;  // false for the cylinder flow
  std::vector<std::string> residual_log;  // CSV rows "level,step,residual"
  std::vector<std::string> step_log;      // CSV rows of time stepping diagnostics
  std::vector<std::string> files;
};

struct RunOptions {
  int levels = -1;   // override
  int threads = -1;  // override
  std::string output;  // override of output.directory; empty keeps the config value
  bool write = true;
};

RunReport run(const RunConfig& config, const RunOptions& options = {});

/// EOC_k = log(e_{k-1} / e_k) / log(h_{k-1} / h_k); first entry NaN.
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& h);

/// Columns: level,h,ndofs,l2,h1[,h2],eoc_l2,eoc_h1[,eoc_h2].
std::string format_eoc_csv(const RunReport& report);

struct AuditSummary {
  int elements = 0;
  int checked = 0;
  int failures = 0;
  std::string text;
};

/// Solvability and reproduction audit of every configured space on the
/// level-0 mesh.
AuditSummary audit(const RunConfig& config, int threads = -1);

}  // namespace vem
