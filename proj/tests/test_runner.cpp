#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "vem/mesh_io.hpp"
#include "vem/runner.hpp"
#include "vem/vtk.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace vem;
using namespace testing;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vem_test_runner_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const char* kLaplace = R"({
  "problem": "laplace-primal",
  "mesh": {"type": "voronoi", "cells": 16, "lloyd": 10, "seed": 3},
  "space": {"family": "h1-conforming", "order": 1},
  "levels": 2,
  "output": {"vtk": false}
})";

// minimal reader for the legacy files we write
struct VtkFile {
  std::string header;
  std::vector<Point> points;
  std::vector<std::array<int, 3>> cells;
  std::vector<double> point_values;
  std::vector<int> element;
  std::vector<double> trace;
};

RunOptions options(int levels, int threads, const std::string& output, bool write) {
  RunOptions o;
  o.levels = levels;
  o.threads = threads;
  o.output = output;
  o.write = write;
  return o;
}

VtkFile read_vtk(const fs::path& p) {
  std::ifstream f(p);
  VtkFile v;
  std::getline(f, v.header);
  std::string line, word;
  std::getline(f, line);  // title
  f >> word;
  REQUIRE(word == "ASCII");
  f >> word >> word;
  REQUIRE(word == "UNSTRUCTURED_GRID");
  std::size_t n, m, total;
  f >> word >> n >> word;
  REQUIRE(word == "double");
  v.points.resize(n);
  for (auto& pt : v.points) {
    double z;
    f >> pt.x() >> pt.y() >> z;
  }
  f >> word >> m >> total;
  REQUIRE(word == "CELLS");
  REQUIRE(total == 4 * m);
  v.cells.resize(m);
  for (auto& c : v.cells) {
    int k;
    f >> k >> c[0] >> c[1] >> c[2];
    REQUIRE(k == 3);
    for (int i : c) REQUIRE(i < static_cast<int>(n));
  }
  f >> word >> total;
  REQUIRE(word == "CELL_TYPES");
  for (std::size_t i = 0; i < m; ++i) {
    int t;
    f >> t;
    REQUIRE(t == 5);
  }
  while (f >> word) {
    if (word == "SCALARS") {
      std::string name, type, lut, def;
      int ncomp;
      f >> name >> type >> ncomp >> lut >> def;
      if (name == "element") {
        v.element.resize(m);
        for (int& e : v.element) f >> e;
      } else if (name == "trace") {
        v.trace.resize(m);
        for (double& t : v.trace) f >> t;
      } else {
        v.point_values.resize(n);
        for (double& x : v.point_values) f >> x;
      }
    } else if (word == "VECTORS") {
      std::string name, type;
      f >> name >> type;
      v.point_values.resize(2 * n);
      for (std::size_t i = 0; i < n; ++i) {
        double z;
        f >> v.point_values[2 * i] >> v.point_values[2 * i + 1] >> z;
      }
    }
  }
  return v;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(parse_config(kLaplace));
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": "heat", "space": {"family": "dg"}})"), UnknownProblemError);
  // unknown keys anywhere
  CHECK_THROWS_AS(parse_config(R"({"problem": "laplace-primal", "space": {"family": "h1-conforming"}, "extra": 1})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": "laplace-primal", "space": {"family": "h1-conforming", "degree": 2}})"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"problem": "laplace-primal", "space": {"family": "h1-conforming"}, "mesh": {"cell": 3}})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"problem": "laplace-primal", "space": {"family": "h1-conforming"}, "parameters": {"nu": 1}})"),
      ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": "laplace-primal", "space": {"family": "h1-conforming"},
                                   "solver": {"tolerance": -1}})"),
                  ConfigError);
  // wrong types and values
  CHECK_THROWS_AS(parse_config(R"({"problem": "laplace-primal", "space": {"family": "h1-conforming", "order": "2"}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": "laplace-primal", "space": {"family": "h1-conforming"}, "levels": 0})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": "second-order-varcoeff", "space": {"family": "h1-conforming"},
                                   "parameters": {"variant": "d"}})"),
                  ConfigError);
  // family must fit the problem
  CHECK_THROWS_AS(parse_config(R"({"problem": "laplace-mixed", "space": {"family": "h1-conforming"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": "fourth-order-varcoeff", "space": {"family": "h1-conforming"}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": "navier-stokes-cylinder", "space": {"family": "div-free", "order": 2}})"),
                  ConfigError);
  // audit-only configs have no problem and cannot be run
  const RunConfig a = parse_config(R"({"space": [{"family": "dg"}, {"family": "curl-free", "order": 1}]})");
  CHECK(a.spaces.size() == 2);
  CHECK_THROWS_AS(run(a, options(-1, -1, "", false)), ConfigError);
}

TEST_CASE("testSpaces syntax") {
  const RunConfig c = parse_config(R"({"problem": "fourth-order-varcoeff",
    "space": {"family": "h2-nonconforming", "order": 4, "testSpaces": [-1, [1, 2], 0]}})");
  const TestSpaces& ts = *c.spaces[0].test_spaces;
  CHECK(ts == TestSpaces{-1, 1, 2, true, 0});
  CHECK(ts == test_spaces_of(Family::H2Nonconforming, 4));
  const RunConfig s = parse_config(R"({"problem": "laplace-primal",
    "space": {"family": "h1-nonconforming", "order": 3, "testSpaces": [-1, 2, 0]}})");
  CHECK(*s.spaces[0].test_spaces == TestSpaces{-1, 2, -1, false, 0});
  CHECK_THROWS_AS(parse_config(R"({"problem": "laplace-primal",
    "space": {"family": "h1-conforming", "testSpaces": [0, 0]}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": "laplace-primal",
    "space": {"family": "h1-conforming", "testSpaces": [0, [0, 1, 2], 0]}})"),
                  ConfigError);
}

TEST_CASE("EOC of synthetic sequences") {
  // e = C h^p exactly
  const std::vector<double> h{0.4, 0.2, 0.1, 0.05};
  std::vector<double> e;
  for (double x : h) e.push_back(3.0 * std::pow(x, 2.5));
  const auto r = eoc(e, h);
  CHECK(std::isnan(r[0]));
  for (std::size_t k = 1; k < r.size(); ++k) CHECK(r[k] == doctest::Approx(2.5));
  // hand computed: log(0.1 / 0.04) / log(3) = 0.834...
  const auto q = eoc({0.1, 0.04}, {0.3, 0.1});
  CHECK(q[1] == doctest::Approx(std::log(2.5) / std::log(3.0)));
  CHECK_THROWS_AS(eoc({1.0}, {1.0, 2.0}), ConfigError);
}

TEST_CASE("mesh levels") {
  MeshConfig m;
  m.cells = 10;
  m.lloyd = 2;
  CHECK(make_mesh(m, 0).num_elements() == 10);
  CHECK(make_mesh(m, 1).num_elements() == 40);
  m.type = "cartesian";
  m.nx = 3;
  m.ny = 2;
  CHECK(make_mesh(m, 2).num_elements() == 96);
  CHECK(mesh_size(make_mesh(m, 0)) == doctest::Approx(std::sqrt(1.0 / 6)));
  m.type = "file";
  m.path = "whatever.json";
  CHECK_THROWS_AS(make_mesh(m, 1), ConfigError);
}

TEST_CASE("laplace run: two levels, one EOC, deterministic output") {
  const RunConfig c = parse_config(kLaplace);
  const fs::path d1 = scratch("a"), d2 = scratch("b");
  const RunReport r1 = run(c, options(-1, 1, d1.string(), true));
  const RunReport r2 = run(c, options(-1, 4, d2.string(), true));
  REQUIRE(r1.levels.size() == 2);
  const std::string csv = slurp(d1 / "eoc.csv");
  std::istringstream lines(csv);
  std::string header, row0, row1, extra;
  std::getline(lines, header);
  std::getline(lines, row0);
  std::getline(lines, row1);
  CHECK(header == "level,h,ndofs,l2,h1,eoc_l2,eoc_h1");
  CHECK(!std::getline(lines, extra));
  CHECK(row0.find("nan,nan") != std::string::npos);
  CHECK(row1.find("nan") == std::string::npos);
  CHECK(r1.levels[1].errors.l2 < r1.levels[0].errors.l2);
  CHECK(csv == slurp(d2 / "eoc.csv"));
  CHECK(slurp(d1 / "residuals.csv") == slurp(d2 / "residuals.csv"));
  // level override and no vtk requested
  const RunReport r3 = run(c, options(1, -1, "", false));
  CHECK(r3.levels.size() == 1);
  CHECK(!fs::exists(d1 / "solution.vtk"));
}

TEST_CASE("vtk output") {
  auto mesh = mixed_mesh();
  SpaceSpec s;
  s.order = 2;
  Space sp(mesh, s);
  const fs::path d = scratch("vtk");
  write_vtk(sp, sp.interpolate([](const Point&) { return Vector::Constant(1, 2.5); }), (d / "c.vtk").string());
  const VtkFile v = read_vtk(d / "c.vtk");
  CHECK(v.header == "# vtk DataFile Version 3.0");
  CHECK(v.cells.size() == mesh->element_of_triangle().size());
  for (double x : v.point_values) CHECK(x == doctest::Approx(2.5));
  // one id per polygon, matching the sub-triangulation
  CHECK(v.element == mesh->element_of_triangle());
  CHECK(std::set<int>(v.element.begin(), v.element.end()).size() == mesh->num_elements());
  CHECK(v.trace.empty());
  // point values are Pi0 u at the triangle vertices
  const Vector u = sp.interpolate([](const Point& x) { return Vector::Constant(1, x.x() * x.y() - x.y()); });
  write_vtk(sp, u, (d / "q.vtk").string());
  const VtkFile q = read_vtk(d / "q.vtk");
  for (std::size_t i = 0; i < q.points.size(); ++i)
    CHECK(q.point_values[i] == doctest::Approx(q.points[i].x() * q.points[i].y() - q.points[i].y()));

  // vector field with a divergence-free projection: trace cell data
  SpaceSpec dv;
  dv.family = Family::DivFree;
  dv.order = 2;
  Space vs(mesh, dv);
  const Vector w = vs.interpolate([](const Point& x) { return Vector(Vec2(2 * x.x() + x.y(), -x.x())); });
  write_vtk(vs, w, (d / "w.vtk").string(), "w");
  const VtkFile wv = read_vtk(d / "w.vtk");
  REQUIRE(wv.trace.size() == wv.cells.size());
  for (double t : wv.trace) CHECK(t == doctest::Approx(2.0));
  CHECK_THROWS_AS(write_vtk(sp, u, (d / "missing" / "x.vtk").string()), IOError);
  CHECK_THROWS_AS(write_vtk(sp, Vector::Zero(3), (d / "y.vtk").string()), ConfigError);
}

TEST_CASE("audit") {
  const fs::path d = scratch("audit");
  write_mesh(*mixed_mesh(), (d / "m.json").string());
  {
    std::ofstream f(d / "ok.json");
    f << R"({"mesh": {"type": "file", "path": "m.json"},
             "space": [{"family": "h1-conforming", "order": 2}, {"family": "h2-conforming", "order": 2}]})";
  }
  const AuditSummary ok = audit(load_config((d / "ok.json").string()));
  CHECK(ok.elements == 5);
  CHECK(ok.checked == 10);
  CHECK(ok.failures == 0);
  {
    std::ofstream f(d / "bad.json");
    f << R"({"mesh": {"type": "file", "path": "m.json"},
             "space": {"family": "h2-conforming", "order": 2, "laplaceMean": false}})";
  }
  const AuditSummary bad = audit(load_config((d / "bad.json").string()));
  CHECK(bad.failures >= 1);
  CHECK(bad.text.find("FAIL") != std::string::npos);
  // empty mesh: empty report
  {
    std::ofstream f(d / "empty_mesh.json");
    f << R"({"vertices": [], "polygons": []})";
    std::ofstream g(d / "empty.json");
    g << R"({"mesh": {"type": "file", "path": "empty_mesh.json"}, "space": {"family": "dg"}})";
  }
  const AuditSummary empty = audit(load_config((d / "empty.json").string()));
  CHECK(empty.elements == 0);
  CHECK(empty.failures == 0);
}

TEST_CASE("cli exit status") {
  const fs::path d = scratch("cli");
  {
    std::ofstream f(d / "unknown.json");
    f << R"({"problem": "heat", "space": {"family": "dg"}})";
    std::ofstream g(d / "lap.json");
    g << kLaplace;
  }
  const std::string exe = VEM_CLI;
  auto status = [&](const std::string& args) {
    const int s = std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(s);
  };
  CHECK(status("run " + (d / "unknown.json").string()) == 2);
  CHECK(status("run " + (d / "missing.json").string()) == 4);
  CHECK(status("run " + (d / "lap.json").string() + " --levels 2 --threads 2 --output " + (d / "out").string()) == 0);
  CHECK(fs::exists(d / "out" / "eoc.csv"));
  CHECK(status("mesh gen cartesian " + (d / "g.json").string() + " --nx 3 --ny 2") == 0);
  CHECK(read_mesh((d / "g.json").string()).num_elements() == 6);
  CHECK(status("mesh info " + (d / "g.json").string()) == 0);
  CHECK(status("frobnicate") != 0);
}
