#include "vem/runner.hpp"

#include "vem/mesh_io.hpp"
#include "vem/vtk.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace vem {

using nlohmann::json;

const std::vector<std::string> kProblems = {"laplace-primal",         "laplace-mixed",      "second-order-varcoeff",
                                            "fourth-order-varcoeff", "nonlinear-laplace", "navier-stokes-cylinder"};

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
T get(const json& obj, const std::string& key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for '" + key + "' in " + where);
  }
}

int get_int(const json& obj, const std::string& key, int fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError("'" + key + "' in " + where + " must be an integer");
  return v.get<int>();
}

int order_entry(const json& v) {
  if (!v.is_number_integer()) throw ConfigError("testSpaces entries must be integers");
  return v.get<int>();
}

TestSpaces parse_test_spaces(const json& v) {
  if (!v.is_array() || v.size() != 3) throw ConfigError("testSpaces must be a list [vertex, edge, inner]");
  TestSpaces ts;
  ts.vertex = order_entry(v[0]);
  if (v[1].is_array()) {
    if (v[1].size() != 2) throw ConfigError("testSpaces edge pair must be [value, normal]");
    ts.pair = true;
    ts.edge = order_entry(v[1][0]);
    ts.normal = order_entry(v[1][1]);
  } else {
    ts.edge = order_entry(v[1]);
  }
  ts.inner = order_entry(v[2]);
  return ts;
}

SpaceSpec parse_space(const json& s) {
  const std::string where = "space";
  check_keys(s, {"family", "order", "components", "testSpaces", "stabilizationFree", "orthonormalize",
                 "laplaceMean", "scaling", "q", "r"},
             where);
  if (!s.contains("family")) throw ConfigError("space needs a family");
  SpaceSpec spec;
  spec.family = parse_family(get<std::string>(s, "family", "", where));
  spec.order = get_int(s, "order", 1, where);
  spec.components = get_int(s, "components", 1, where);
  spec.q = get_int(s, "q", -100, where);
  spec.r = get_int(s, "r", -100, where);
  spec.stabilization_free = get<bool>(s, "stabilizationFree", false, where);
  if (s.contains("orthonormalize")) spec.orthonormalize = get<bool>(s, "orthonormalize", false, where) ? 1 : 0;
  spec.laplace_mean = get<bool>(s, "laplaceMean", true, where);
  if (s.contains("testSpaces")) spec.test_spaces = parse_test_spaces(s.at("testSpaces"));
  const std::string scaling = get<std::string>(s, "scaling", "bounding-box", where);
  if (scaling == "bounding-box") spec.scaling = Scaling::BoundingBox;
  else if (scaling == "isotropic") spec.scaling = Scaling::Isotropic;
  else throw ConfigError("unknown scaling '" + scaling + "'");
  if (spec.components < 1) throw ConfigError("space components must be positive");
  return spec;
}

MeshConfig parse_mesh(const json& m) {
  const std::string where = "mesh";
  check_keys(m, {"type", "box", "cells", "lloyd", "seed", "nx", "ny", "segments", "refine", "path"}, where);
  MeshConfig c;
  c.type = get<std::string>(m, "type", "voronoi", where);
  if (m.contains("box")) {
    const auto b = get<std::vector<double>>(m, "box", {}, where);
    if (b.size() != 4 || !(b[2] > b[0]) || !(b[3] > b[1])) throw ConfigError("mesh box must be [x0, y0, x1, y1]");
    c.box = {b[0], b[1], b[2], b[3]};
    c.box_given = true;
  }
  c.cells = get_int(m, "cells", c.cells, where);
  c.lloyd = get_int(m, "lloyd", c.lloyd, where);
  c.seed = static_cast<unsigned>(get_int(m, "seed", static_cast<int>(c.seed), where));
  c.nx = get_int(m, "nx", c.nx, where);
  c.ny = get_int(m, "ny", c.ny, where);
  c.segments = get_int(m, "segments", c.segments, where);
  c.refine = get_int(m, "refine", c.refine, where);
  c.path = get<std::string>(m, "path", "", where);
  if (c.type != "voronoi" && c.type != "cartesian" && c.type != "cylinder" && c.type != "file")
    throw ConfigError("unknown mesh type '" + c.type + "'");
  if (c.cells < 1 || c.nx < 1 || c.ny < 1 || c.lloyd < 0 || c.refine < 1 || c.segments < 3)
    throw ConfigError("mesh sizes must be positive");
  if (c.type == "file" && c.path.empty()) throw ConfigError("file mesh needs a path");
  return c;
}

SolverSettings parse_solver(const json& s) {
  const std::string where = "solver";
  check_keys(s, {"method", "tolerance", "maxIterations", "newtonTolerance", "newtonAbsoluteTolerance", "newtonMaxSteps",
                 "uzawa", "uzawaTolerance", "uzawaStep", "uzawaMaxIterations"},
             where);
  SolverSettings o;
  o.method = parse_linear_method(get<std::string>(s, "method", "auto", where));
  o.tolerance = get<double>(s, "tolerance", o.tolerance, where);
  o.max_iterations = get_int(s, "maxIterations", o.max_iterations, where);
  o.newton_tolerance = get<double>(s, "newtonTolerance", o.newton_tolerance, where);
  o.newton_absolute_tolerance = get<double>(s, "newtonAbsoluteTolerance", o.newton_absolute_tolerance, where);
  o.newton_max_steps = get_int(s, "newtonMaxSteps", o.newton_max_steps, where);
  const std::string uz = get<std::string>(s, "uzawa", "cg", where);
  if (uz == "cg") o.uzawa = UzawaMethod::CG;
  else if (uz == "richardson") o.uzawa = UzawaMethod::Richardson;
  else throw ConfigError("unknown Uzawa method '" + uz + "'");
  o.uzawa_tolerance = get<double>(s, "uzawaTolerance", o.uzawa_tolerance, where);
  o.uzawa_step = get<double>(s, "uzawaStep", o.uzawa_step, where);
  o.uzawa_max_iterations = get_int(s, "uzawaMaxIterations", o.uzawa_max_iterations, where);
  o.validate();
  return o;
}

// numeric parameters per problem with their defaults
const std::map<std::string, std::map<std::string, double>>& parameter_defaults() {
  static const std::map<std::string, std::map<std::string, double>> d = {
      {"laplace-primal", {{"Lx", 1.0}, {"Ly", 1.1}}},
      {"laplace-mixed", {{"Lx", 1.0}, {"Ly", 1.1}, {"scalarOrder", -1}}},
      {"second-order-varcoeff", {}},
      {"fourth-order-varcoeff", {{"hPower", -2.0}}},
      {"nonlinear-laplace", {}},
      {"navier-stokes-cylinder",
       {{"nu", 1e-3}, {"tau", 6.25e-4}, {"steps", 50}, {"inflowMax", 1.5}, {"pressureOrder", 0}}},
  };
  return d;
}

bool has_variant(const std::string& problem) {
  return problem == "second-order-varcoeff" || problem == "fourth-order-varcoeff";
}

void check_space(const std::string& problem, const SpaceSpec& s) {
  const bool h1 = s.family == Family::H1Conforming || s.family == Family::H1Nonconforming;
  const bool h2 = s.family == Family::H2Conforming || s.family == Family::H2Nonconforming;
  bool ok = true;
  if (problem == "laplace-primal" || problem == "second-order-varcoeff" || problem == "nonlinear-laplace")
    ok = h1 && s.components == 1;
  else if (problem == "fourth-order-varcoeff") ok = h2;
  else if (problem == "laplace-mixed") ok = s.family == Family::CurlFree;
  else if (problem == "navier-stokes-cylinder") ok = s.family == Family::DivFree;
  if (!ok) throw ConfigError("space family " + family_name(s.family) + " does not fit problem " + problem);
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

ValueFn vector_of(const GradientFn& g) {
  return [g](const Point& x) {
    const Matrix m = g(x);
    return Vector(Eigen::Map<const Vector>(m.data(), m.size()));
  };
}

Vector local(const Space& sp, int e, const Vector& u) {
  const auto& l2g = sp.local_to_global(e);
  Vector ul(l2g.size());
  for (std::size_t i = 0; i < l2g.size(); ++i) ul[i] = u[l2g[i]];
  return ul;
}

// max over elements of |int_E tr Pi1 s - sum_s int_s Pi_s0 (s . n_E)| and of
// the deviation of Pi1 s from a multiple of the identity
std::pair<double, double> flux_invariants(const Space& sp, const Vector& sigma) {
  const Mesh& mesh = sp.mesh();
  double trace_gap = 0.0, isotropy = 0.0;
  for (int e = 0; e < sp.num_elements(); ++e) {
    const VemTuple& t = sp.tuple(e);
    const ProjectionBlock& b = sp.block(e);
    const Vector ul = local(sp, e, sigma);
    const Quadrature q = mesh.element_quadrature(e, 2 * t.b1.order() + 2);
    const Vector g = evaluate_projected_basis(t, b, 1, q.points) * ul;
    double inside = 0.0;
    for (std::size_t p = 0; p < q.size(); ++p) {
      inside += q.weights[p] * (g[4 * p] + g[4 * p + 3]);
      isotropy = std::max({isotropy, std::abs(g[4 * p + 1]), std::abs(g[4 * p + 2]), std::abs(g[4 * p] - g[4 * p + 3])});
    }
    double boundary = 0.0;
    for (const EdgeTuple& et : t.edges) {
      const Quadrature eq = mesh.edge_quadrature(et.edge, 2 * et.value.degree + 2);
      const EdgeBasis eb(mesh, et.edge, et.value.degree);
      const Vector v = eb.values(eq.points) * (b.edge_value[et.local] * ul);
      boundary += et.sign * Eigen::Map<const Vector>(eq.weights.data(), eq.size()).dot(v);
    }
    trace_gap = std::max(trace_gap, std::abs(inside - boundary));
  }
  return {trace_gap, isotropy};
}

struct Context {
  const RunConfig& cfg;
  RunReport& report;
  int threads;
  bool write;
  std::filesystem::path dir;

  double num(const std::string& k) const { return cfg.numbers.at(k); }
  void log_residuals(int level, const std::vector<double>& r) {
    for (std::size_t i = 0; i < r.size(); ++i)
      report.residual_log.push_back(std::to_string(level) + "," + std::to_string(i) + "," + fmt(r[i]));
  }
  void vtk(const Space& sp, const Vector& u, const std::string& name, const std::string& field) {
    if (!write || !cfg.output.vtk) return;
    const auto path = (dir / name).string();
    write_vtk(sp, u, path, field);
    report.files.push_back(path);
  }
};

Rectangle problem_box(const RunConfig& c) {
  if (c.mesh.box_given) return c.mesh.box;
  if (c.problem == "laplace-primal" || c.problem == "laplace-mixed") return {0, 0, c.numbers.at("Lx"), c.numbers.at("Ly")};
  return {};
}

// -div(D grad u) + m u = f type problems with Dirichlet data from the exact solution
void run_scalar(Context& ctx, int level, const Mesh& mesh_in, bool last) {
  const RunConfig& c = ctx.cfg;
  auto mesh = std::make_shared<const Mesh>(mesh_in);
  SpaceSpec spec = c.spaces.front();
  Exact ex;
  CoefficientForm form;
  bool fourth = false;
  if (c.problem == "laplace-primal") {
    ex = laplace_exact(c.numbers.at("Lx"), c.numbers.at("Ly"));
    form = diffusion_form([](const Point&) { return 1.0; });
  } else if (c.problem == "nonlinear-laplace") {
    ex = nonlinear_exact();
    form = nonlinear_form();
  } else if (c.problem == "second-order-varcoeff") {
    ex = varcoeff_exact(2);
    form = diffusion_form(varcoeff_kappa);
  } else {
    ex = varcoeff_exact(4);
    form = hessian_form(varcoeff_kappa, c.numbers.at("hPower"));
    fourth = true;
  }
  if (has_variant(c.problem)) {
    // (a) stabilized, (b) no stabilization, (c) enlarged projections without stabilization
    spec.stabilization_free = c.variant == "c";
    if (c.variant != "a") form.stabilization = 0.0;
  }
  const Space sp(mesh, spec, ctx.threads);
  const auto bd = sp.boundary_dofs();
  const Vector rhs = assemble_functional(sp, ex.forcing);
  const Vector vals = dirichlet_values(sp, bd, ex.value, ex.gradient);
  const NewtonResult r = newton_solve(sp, form, rhs, bd, vals, {}, c.solver, ctx.threads);
  ctx.log_residuals(level, r.residuals);
  LevelResult lr;
  lr.level = level;
  lr.h = mesh_size(*mesh);
  lr.ndofs = sp.size();
  lr.errors = compute_error(sp, r.u, ex.value, ex.gradient, fourth ? ex.hessian : HessianFn{});
  lr.metrics["newton_steps"] = r.steps;
  ctx.report.has_h2 = fourth;
  ctx.report.levels.push_back(lr);
  if (last) ctx.vtk(sp, r.u, "solution.vtk", "u");
}

// [M B^T; B 0] (sigma, u) = (0, -F): sigma = grad u, -div sigma = f, u = 0 on the boundary
void run_mixed(Context& ctx, int level, const Mesh& mesh_in, bool last) {
  const RunConfig& c = ctx.cfg;
  auto mesh = std::make_shared<const Mesh>(mesh_in);
  const SpaceSpec fspec = c.spaces.front();
  SpaceSpec sspec;
  sspec.family = Family::DG;
  const int so = static_cast<int>(c.numbers.at("scalarOrder"));
  sspec.order = so < 0 ? fspec.order : so;
  const Space flux(mesh, fspec, ctx.threads), scalar(mesh, sspec, ctx.threads);
  const Exact ex = laplace_exact(c.numbers.at("Lx"), c.numbers.at("Ly"));
  const SparseMatrix M = assemble_operator(flux, mass_form(), {}, true, ctx.threads).matrix;
  const SparseMatrix B = assemble_divergence(flux, scalar, ctx.threads);
  const Vector F = assemble_functional(scalar, ex.forcing);
  const int n = flux.size(), m = scalar.size();
  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < M.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(M, k); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < B.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(B, k); it; ++it) {
      trip.emplace_back(n + it.row(), it.col(), it.value());
      trip.emplace_back(it.col(), n + it.row(), it.value());
    }
  SparseMatrix K(n + m, n + m);
  K.setFromTriplets(trip.begin(), trip.end());
  Vector rhs = Vector::Zero(n + m);
  rhs.tail(m) = -F;
  SolverSettings s = c.solver;
  s.method = LinearMethod::LU;  // indefinite
  const Vector x = linear_solve(K, rhs, s);
  const Vector sigma = x.head(n), u = x.tail(m);
  ctx.log_residuals(level, {(K * x - rhs).norm()});
  LevelResult lr;
  lr.level = level;
  lr.h = mesh_size(*mesh);
  lr.ndofs = n + m;
  lr.errors.l2 = compute_error(scalar, u, ex.value).l2;
  lr.errors.h1 = compute_error(flux, sigma, vector_of(ex.gradient)).l2;
  const auto [gap, iso] = flux_invariants(flux, sigma);
  lr.metrics["trace_flux_gap"] = gap;
  lr.metrics["isotropy_defect"] = iso;
  ctx.report.levels.push_back(lr);
  if (last) {
    ctx.vtk(scalar, u, "solution.vtk", "u");
    ctx.vtk(flux, sigma, "flux.vtk", "sigma");
  }
}

SparseMatrix select_columns(const SparseMatrix& A, const std::vector<int>& cols, int n) {
  std::vector<int> map(n, -1);
  for (std::size_t i = 0; i < cols.size(); ++i) map[cols[i]] = static_cast<int>(i);
  std::vector<Eigen::Triplet<double>> t;
  for (int r = 0; r < A.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(A, r); it; ++it)
      if (map[it.col()] >= 0) t.emplace_back(it.row(), map[it.col()], it.value());
  SparseMatrix out(A.rows(), static_cast<int>(cols.size()));
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

SparseMatrix select_rows(const SparseMatrix& A, const std::vector<int>& rows) {
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (SparseMatrix::InnerIterator it(A, rows[i]); it; ++it) t.emplace_back(static_cast<int>(i), it.col(), it.value());
  SparseMatrix out(static_cast<int>(rows.size()), A.cols());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

// semi-implicit time stepping: (M/tau + nu K) u + B^T p = M u_old / tau - N(u_old), B u = 0
void run_cylinder(Context& ctx, int level, const Mesh& mesh_in, bool last) {
  const RunConfig& c = ctx.cfg;
  auto mesh = std::make_shared<const Mesh>(mesh_in);
  const double nu = c.numbers.at("nu"), tau = c.numbers.at("tau"), umax = c.numbers.at("inflowMax");
  const int steps = static_cast<int>(c.numbers.at("steps"));
  if (!(nu > 0) || !(tau > 0) || steps < 0) throw ConfigError("nu and tau must be positive, steps non-negative");
  SpaceSpec vspec = c.spaces.front();
  SpaceSpec pspec;
  pspec.family = Family::DG;
  pspec.order = static_cast<int>(c.numbers.at("pressureOrder"));
  const Space vel(mesh, vspec, ctx.threads), pre(mesh, pspec, ctx.threads);
  const int n = vel.size();

  const double xmax = 2.2, ymax = 0.41;
  auto on_outflow = [&](int s) {
    const Edge& ed = mesh->edge(s);
    return std::abs(mesh->vertex(ed.vertices[0]).x() - xmax) < 1e-12 &&
           std::abs(mesh->vertex(ed.vertices[1]).x() - xmax) < 1e-12;
  };
  const auto fixed = vel.boundary_dofs([&](int s) { return !on_outflow(s); });
  const ValueFn inflow = [&](const Point& x) {
    Vector v = Vector::Zero(2);
    if (x.x() < 1e-12) v[0] = 4 * umax * x.y() * (ymax - x.y()) / (ymax * ymax);
    return v;
  };
  const Vector ud = dirichlet_values(vel, fixed, inflow);
  std::vector<char> is_fixed(n, 0);
  for (int i : fixed) is_fixed[i] = 1;
  std::vector<int> free;
  for (int i = 0; i < n; ++i)
    if (!is_fixed[i]) free.push_back(i);
  Vector u_fixed = Vector::Zero(n);
  for (std::size_t i = 0; i < fixed.size(); ++i) u_fixed[fixed[i]] = ud[i];

  const SparseMatrix A = assemble_operator(vel, diffusion_form([nu](const Point&) { return nu; }, 1.0 / tau), {}, true,
                                           ctx.threads)
                             .matrix;
  const SparseMatrix M = assemble_operator(vel, mass_form(), {}, true, ctx.threads).matrix;
  const SparseMatrix B = assemble_divergence(vel, pre, ctx.threads);
  const SparseMatrix Aff = select_columns(select_rows(A, free), free, n);
  const SparseMatrix Bf = select_columns(B, free, n);
  const Vector g = -(B * u_fixed);
  const Vector Aud = A * u_fixed;

  CoefficientForm adv;
  adv.source = [](const PointState& s) {
    Vector r(2);
    for (int c2 = 0; c2 < 2; ++c2) r[c2] = s.u[0] * s.du[2 * c2] + s.u[1] * s.du[2 * c2 + 1];
    return r;
  };
  adv.stabilization = 0.0;

  Vector u = u_fixed;  // impulsive start
  double max_div = 0.0, max_speed = 0.0;
  int max_iter = 0;
  auto speed = [&](const Vector& v) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const DofKey& k = vel.key(i);
      if (k.type == EntityType::Vertex && k.slot == 0) s = std::max(s, std::hypot(v[i], v[i + 1]));
    }
    return s;
  };
  ctx.report.step_log.push_back("step,time,uzawa_iterations,divergence_residual,max_speed");
  for (int step = 1; step <= steps; ++step) {
    const Vector nl = assemble_operator(vel, adv, u, false, ctx.threads).residual;
    const Vector rhs = M * u / tau - nl - Aud;
    Vector f(free.size());
    for (std::size_t i = 0; i < free.size(); ++i) f[i] = rhs[free[i]];
    const UzawaResult r = uzawa_solve(Aff, Bf, f, g, c.solver);
    for (std::size_t i = 0; i < free.size(); ++i) u[free[i]] = r.u[i];
    const double div = (B * u).norm();
    const double sp = speed(u);
    if (!std::isfinite(sp)) throw SolverError("velocity blew up at step " + std::to_string(step), r.residuals);
    max_div = std::max(max_div, div);
    max_speed = std::max(max_speed, sp);
    max_iter = std::max(max_iter, r.iterations);
    ctx.report.step_log.push_back(std::to_string(step) + "," + fmt(step * tau) + "," + std::to_string(r.iterations) +
                                  "," + fmt(div) + "," + fmt(sp));
    ctx.log_residuals(level, r.residuals);
  }
  LevelResult lr;
  lr.level = level;
  lr.h = mesh_size(*mesh);
  lr.ndofs = n + pre.size();
  lr.metrics["max_divergence_residual"] = max_div;
  lr.metrics["max_speed"] = max_speed;
  lr.metrics["inflow_max"] = umax;
  lr.metrics["max_uzawa_iterations"] = max_iter;
  ctx.report.has_errors = false;
  ctx.report.levels.push_back(lr);
  if (last) ctx.vtk(vel, u, "velocity.vtk", "velocity");
}

void write_text(const std::filesystem::path& p, const std::string& text, RunReport& report) {
  std::ofstream f(p);
  if (!f) throw IOError("cannot write " + p.string());
  f << text;
  if (!f) throw IOError("write failed: " + p.string());
  report.files.push_back(p.string());
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, {"problem", "mesh", "space", "parameters", "solver", "levels", "threads", "output"}, "config");
  RunConfig c;
  // without a problem the config can only be audited
  c.problem = get<std::string>(j, "problem", "", "config");
  if (j.contains("problem") && std::find(kProblems.begin(), kProblems.end(), c.problem) == kProblems.end())
    throw UnknownProblemError("unknown problem '" + c.problem + "'");
  if (j.contains("mesh")) c.mesh = parse_mesh(j.at("mesh"));
  if (!j.contains("space")) throw ConfigError("config needs a space");
  if (j.at("space").is_array()) {
    for (const json& s : j.at("space")) c.spaces.push_back(parse_space(s));
  } else {
    c.spaces.push_back(parse_space(j.at("space")));
  }
  if (c.spaces.empty()) throw ConfigError("config needs a space");
  if (!c.problem.empty()) c.numbers = parameter_defaults().at(c.problem);
  if (j.contains("parameters")) {
    if (c.problem.empty()) throw ConfigError("parameters need a problem");
    const json& p = j.at("parameters");
    std::set<std::string> allowed;
    for (const auto& [k, v] : c.numbers) allowed.insert(k);
    if (has_variant(c.problem)) allowed.insert("variant");
    check_keys(p, allowed, "parameters of " + c.problem);
    for (const auto& [k, v] : p.items()) {
      if (k == "variant") continue;
      if (!v.is_number()) throw ConfigError("parameter '" + k + "' must be a number");
      c.numbers[k] = v.get<double>();
    }
    c.variant = get<std::string>(p, "variant", "a", "parameters");
    if (c.variant != "a" && c.variant != "b" && c.variant != "c")
      throw ConfigError("variant must be \"a\", \"b\" or \"c\"");
  }
  if (j.contains("solver")) c.solver = parse_solver(j.at("solver"));
  c.levels = get_int(j, "levels", 1, "config");
  c.threads = get_int(j, "threads", 0, "config");
  if (c.levels < 1) throw ConfigError("levels must be at least 1");
  if (c.threads < 0) throw ConfigError("threads must be non-negative");
  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, {"directory", "vtk"}, "output");
    c.output.directory = get<std::string>(o, "directory", c.output.directory, "output");
    c.output.vtk = get<bool>(o, "vtk", true, "output");
  }
  if (c.problem == "navier-stokes-cylinder" && c.mesh.type != "cylinder" && c.mesh.type != "file")
    throw ConfigError("navier-stokes-cylinder needs a cylinder or file mesh");
  if (!c.mesh.box_given && (c.problem == "laplace-primal" || c.problem == "laplace-mixed")) {
    if (!(c.numbers.at("Lx") > 0) || !(c.numbers.at("Ly") > 0)) throw ConfigError("Lx and Ly must be positive");
  }
  c.mesh.box = problem_box(c);
  for (const SpaceSpec& s : c.spaces) {
    if (!c.problem.empty()) check_space(c.problem, s);
    make_recipe(s);  // rejects bad orders early
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IOError("cannot read config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  RunConfig c = parse_config(ss.str());
  // mesh files are looked up next to the config
  if (c.mesh.type == "file" && std::filesystem::path(c.mesh.path).is_relative())
    c.mesh.path = (std::filesystem::path(path).parent_path() / c.mesh.path).string();
  return c;
}

Mesh make_mesh(const MeshConfig& m, int level) {
  if (m.type == "voronoi") return voronoi_grid(m.cells << (2 * level), m.box, m.lloyd, m.seed);
  if (m.type == "cartesian") return cartesian_grid(m.nx << level, m.ny << level, m.box);
  if (m.type == "cylinder") return cylinder_channel_grid(m.segments, m.refine << level);
  if (level > 0) throw ConfigError("file meshes cannot be refined");
  return read_mesh(m.path);
}

double mesh_size(const Mesh& mesh) {
  return mesh.num_elements() ? std::sqrt(mesh.total_area() / mesh.num_elements()) : 0.0;
}

std::vector<double> eoc(const std::vector<double>& e, const std::vector<double>& h) {
  if (e.size() != h.size()) throw ConfigError("eoc: errors and sizes differ in length");
  std::vector<double> out(e.size(), std::nan(""));
  for (std::size_t k = 1; k < e.size(); ++k) out[k] = std::log(e[k - 1] / e[k]) / std::log(h[k - 1] / h[k]);
  return out;
}

std::string format_eoc_csv(const RunReport& r) {
  std::vector<double> h, l2, h1, h2;
  for (const LevelResult& l : r.levels) {
    h.push_back(l.h);
    l2.push_back(l.errors.l2);
    h1.push_back(l.errors.h1);
    h2.push_back(l.errors.h2);
  }
  const auto e2 = eoc(l2, h), e1 = eoc(h1, h), ehh = eoc(h2, h);
  std::ostringstream out;
  out << "level,h,ndofs,l2,h1" << (r.has_h2 ? ",h2" : "") << ",eoc_l2,eoc_h1" << (r.has_h2 ? ",eoc_h2" : "") << '\n';
  for (std::size_t k = 0; k < r.levels.size(); ++k) {
    const LevelResult& l = r.levels[k];
    out << l.level << ',' << fmt(l.h) << ',' << l.ndofs << ',' << fmt(l.errors.l2) << ',' << fmt(l.errors.h1);
    if (r.has_h2) out << ',' << fmt(l.errors.h2);
    out << ',' << fmt(e2[k]) << ',' << fmt(e1[k]);
    if (r.has_h2) out << ',' << fmt(ehh[k]);
    out << '\n';
  }
  return out.str();
}

RunReport run(const RunConfig& c, const RunOptions& o) {
  if (c.problem.empty()) throw ConfigError("config has no problem to run");
  RunReport report;
  const int levels = o.levels > 0 ? o.levels : c.levels;
  Context ctx{c, report, o.threads >= 0 ? o.threads : c.threads, o.write,
              o.output.empty() ? c.output.directory : o.output};
  if (o.write) {
    std::error_code ec;
    std::filesystem::create_directories(ctx.dir, ec);
    if (ec) throw IOError("cannot create output directory " + ctx.dir.string());
  }
  for (int level = 0; level < levels; ++level) {
    const Mesh mesh = make_mesh(c.mesh, level);
    const bool last = level + 1 == levels;
    if (c.problem == "laplace-mixed") run_mixed(ctx, level, mesh, last);
    else if (c.problem == "navier-stokes-cylinder") run_cylinder(ctx, level, mesh, last);
    else run_scalar(ctx, level, mesh, last);
  }
  if (o.write) {
    if (report.has_errors) write_text(ctx.dir / "eoc.csv", format_eoc_csv(report), report);
    std::string res = "level,step,residual\n";
    for (const auto& l : report.residual_log) res += l + '\n';
    write_text(ctx.dir / "residuals.csv", res, report);
    std::string met = "level,name,value\n";
    for (const LevelResult& l : report.levels)
      for (const auto& [k, v] : l.metrics) met += std::to_string(l.level) + ',' + k + ',' + fmt(v) + '\n';
    write_text(ctx.dir / "metrics.csv", met, report);
    if (!report.step_log.empty()) {
      std::string steps;
      for (const auto& l : report.step_log) steps += l + '\n';
      write_text(ctx.dir / "steps.csv", steps, report);
    }
  }
  return report;
}

AuditSummary audit(const RunConfig& c, int threads) {
  const Mesh mesh = make_mesh(c.mesh, 0);
  AuditSummary out;
  out.elements = static_cast<int>(mesh.num_elements());
  std::ostringstream text;
  for (const SpaceSpec& spec : c.spaces) {
    const TupleRecipe recipe = make_recipe(spec);
    std::vector<ProjectionAudit> audits(mesh.num_elements());
    parallel_for(out.elements, threads >= 0 ? threads : c.threads, [&](int e) {
      try {
        audits[e] = audit_element(mesh, build_tuple(mesh, e, recipe));
      } catch (const Error& err) {
        audits[e].error = err.what();
      }
    });
    int failed = 0;
    text << "space " << family_name(spec.family) << " order " << spec.order
         << (spec.components > 1 ? " components " + std::to_string(spec.components) : "")
         << (spec.stabilization_free ? " stabilization-free" : "") << (spec.laplace_mean ? "" : " no-laplace-mean")
         << '\n';
    for (int e = 0; e < out.elements; ++e) {
      ++out.checked;
      if (!audits[e].ok()) {
        ++failed;
        text << "  FAIL " << format_audit(e, audits[e]) << '\n';
      }
    }
    out.failures += failed;
    text << "  " << out.elements - failed << "/" << out.elements << " elements pass\n";
  }
  text << "summary: " << out.checked << " element checks, " << out.failures << " failures\n";
  out.text = text.str();
  return out;
}

}  // namespace vem
