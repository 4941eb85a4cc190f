#include "vem/vtk.hpp"

#include "vem/projection.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace vem {

void write_vtk(const Space& space, const Vector& u, const std::string& path, const std::string& name) {
  if (u.size() != space.size()) throw ConfigError("dof vector does not match the space");
  const Mesh& mesh = space.mesh();
  const int nc = space.components();
  const bool trace = nc == 2 && !space.fourth_order();

  std::vector<Point> points;
  std::vector<double> values;  // nc per point
  std::vector<int> element;
  std::vector<double> traces;
  for (int e = 0; e < space.num_elements(); ++e) {
    const auto& l2g = space.local_to_global(e);
    Vector ul(l2g.size());
    for (std::size_t i = 0; i < l2g.size(); ++i) ul[i] = u[l2g[i]];
    std::vector<Point> pts;
    for (const Triangle& t : mesh.triangles(e)) pts.insert(pts.end(), t.begin(), t.end());
    const Vector v = evaluate_projected_basis(space.tuple(e), space.block(e), 0, pts) * ul;
    points.insert(points.end(), pts.begin(), pts.end());
    values.insert(values.end(), v.data(), v.data() + v.size());
    // tr(Pi1 u) at the triangle barycenters
    Vector tr;
    if (trace && space.block(e).pi1.size()) {
      std::vector<Point> c;
      for (const Triangle& t : mesh.triangles(e)) c.push_back((t[0] + t[1] + t[2]) / 3.0);
      const Vector g = evaluate_projected_basis(space.tuple(e), space.block(e), 1, c) * ul;
      tr.resize(c.size());
      for (std::size_t k = 0; k < c.size(); ++k) tr[k] = g[4 * k] + g[4 * k + 3];
    }
    for (std::size_t k = 0; k < mesh.triangles(e).size(); ++k) {
      element.push_back(e);
      if (trace) traces.push_back(tr.size() ? tr[k] : 0.0);
    }
  }

  std::ostringstream out;
  out << std::setprecision(12);
  out << "# vtk DataFile Version 3.0\n" << name << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << points.size() << " double\n";
  for (const Point& p : points) out << p.x() << ' ' << p.y() << " 0\n";
  const std::size_t nt = element.size();
  out << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (std::size_t t = 0; t < nt; ++t) out << "3 " << 3 * t << ' ' << 3 * t + 1 << ' ' << 3 * t + 2 << '\n';
  out << "CELL_TYPES " << nt << '\n';
  for (std::size_t t = 0; t < nt; ++t) out << "5\n";
  out << "POINT_DATA " << points.size() << '\n';
  if (nc == 1) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : values) out << v << '\n';
  } else if (nc == 2) {
    out << "VECTORS " << name << " double\n";
    for (std::size_t p = 0; p < points.size(); ++p) out << values[2 * p] << ' ' << values[2 * p + 1] << " 0\n";
  } else {
    out << "FIELD FieldData 1\n" << name << ' ' << nc << ' ' << points.size() << " double\n";
    for (std::size_t p = 0; p < points.size(); ++p) {
      for (int c = 0; c < nc; ++c) out << values[p * nc + c] << (c + 1 < nc ? ' ' : '\n');
    }
  }
  out << "CELL_DATA " << nt << "\nSCALARS element int 1\nLOOKUP_TABLE default\n";
  for (int e : element) out << e << '\n';
  if (trace) {
    out << "SCALARS trace double 1\nLOOKUP_TABLE default\n";
    for (double t : traces) out << t << '\n';
  }
  std::ofstream f(path);
  if (!f) throw IOError("cannot write " + path);
  f << out.str();
  if (!f) throw IOError("write failed: " + path);
}

}  // namespace vem
