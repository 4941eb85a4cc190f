#include "vem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <string>

namespace vem {

Mesh::Mesh(GridDict grid) : vertices_(std::move(grid.vertices)), polygons_(std::move(grid.polygons)) {
  const int nv = static_cast<int>(vertices_.size());
  std::vector<bool> used(nv, false);
  for (std::size_t e = 0; e < polygons_.size(); ++e) {
    auto& poly = polygons_[e];
    if (poly.size() < 3)
      throw GeometryError("polygon " + std::to_string(e) + " has fewer than 3 vertices");
    for (int v : poly) {
      if (v < 0 || v >= nv)
        throw FormatError("polygon " + std::to_string(e) + " references vertex " + std::to_string(v) +
                          " out of range");
      used[v] = true;
    }
    std::vector<int> sorted = poly;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw GeometryError("polygon " + std::to_string(e) + " repeats a vertex");
    std::vector<Point> pts = element_points(static_cast<int>(e));
    if (signed_area(pts) < 0) {
      std::reverse(poly.begin(), poly.end());
      std::reverse(pts.begin(), pts.end());
    }
    if (!is_simple(pts)) throw GeometryError("polygon " + std::to_string(e) + " is self-intersecting");
  }
  for (int v = 0; v < nv; ++v)
    if (!used[v]) throw FormatError("vertex " + std::to_string(v) + " is not used by any polygon");

  const std::size_t ne = polygons_.size();
  areas_.resize(ne);
  barycenters_.resize(ne);
  diameters_.resize(ne);
  boxes_.resize(ne);
  triangles_.resize(ne);
  element_edges_.resize(ne);

  std::map<std::pair<int, int>, int> edge_ids;
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& poly = polygons_[e];
    const std::vector<Point> pts = element_points(static_cast<int>(e));
    areas_[e] = signed_area(pts);
    if (!(areas_[e] > 0)) throw GeometryError("polygon " + std::to_string(e) + " has zero area");
    barycenters_[e] = centroid(pts);
    diameters_[e] = vem::diameter(pts);
    boxes_[e] = min_area_bounding_box(pts);
    triangles_[e] = sub_triangulate(pts);
    for (std::size_t t = 0; t < triangles_[e].size(); ++t) element_of_triangle_.push_back(static_cast<int>(e));

    const std::size_t n = poly.size();
    element_edges_[e].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const int a = poly[i], b = poly[(i + 1) % n];
      if ((vertices_[a] - vertices_[b]).norm() < 1e-12 * diameters_[e])
        throw GeometryError("polygon " + std::to_string(e) + " has a degenerate edge");
      const std::pair<int, int> key(std::min(a, b), std::max(a, b));
      auto it = edge_ids.find(key);
      if (it == edge_ids.end()) {
        Edge edge;
        edge.vertices = {key.first, key.second};
        edge.elements = {static_cast<int>(e), -1};
        edge_ids.emplace(key, static_cast<int>(edges_.size()));
        element_edges_[e][i] = static_cast<int>(edges_.size());
        edges_.push_back(edge);
      } else {
        Edge& edge = edges_[it->second];
        if (edge.elements[1] != -1)
          throw TopologyError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                              ") is shared by more than two polygons");
        edge.elements[1] = static_cast<int>(e);
        element_edges_[e][i] = it->second;
      }
    }
  }
  boundary_vertex_.assign(nv, false);
  for (auto& edge : edges_) {
    edge.boundary = edge.elements[1] == -1;
    if (edge.boundary) boundary_vertex_[edge.vertices[0]] = boundary_vertex_[edge.vertices[1]] = true;
  }
  // interior edges must be traversed in opposite directions by their two polygons
  for (std::size_t s = 0; s < edges_.size(); ++s) {
    const Edge& edge = edges_[s];
    if (edge.boundary) continue;
    if (edge_sign(edge.elements[0], static_cast<int>(s)) == edge_sign(edge.elements[1], static_cast<int>(s)))
      throw TopologyError("overlapping polygons at edge " + std::to_string(s));
  }

  vertex_scales_.assign(nv, 0.0);
  std::vector<int> counts(nv, 0);
  for (std::size_t e = 0; e < ne; ++e)
    for (int v : polygons_[e]) {
      vertex_scales_[v] += diameters_[e];
      ++counts[v];
    }
  for (int v = 0; v < nv; ++v)
    if (counts[v] > 0) vertex_scales_[v] /= counts[v];
}

std::vector<Point> Mesh::element_points(int e) const {
  std::vector<Point> pts;
  pts.reserve(polygons_[e].size());
  for (int v : polygons_[e]) pts.push_back(vertices_[v]);
  return pts;
}

double Mesh::max_diameter() const {
  double h = 0.0;
  for (double d : diameters_) h = std::max(h, d);
  return h;
}

double Mesh::total_area() const { return std::accumulate(areas_.begin(), areas_.end(), 0.0); }

double Mesh::edge_length(int s) const {
  return (vertices_[edges_[s].vertices[1]] - vertices_[edges_[s].vertices[0]]).norm();
}

Vec2 Mesh::edge_tangent(int s) const {
  return (vertices_[edges_[s].vertices[1]] - vertices_[edges_[s].vertices[0]]).normalized();
}

Vec2 Mesh::edge_normal(int s) const { return perp(edge_tangent(s)); }

double Mesh::edge_sign(int e, int s) const {
  const auto& poly = polygons_[e];
  const auto& ee = element_edges_[e];
  for (std::size_t i = 0; i < ee.size(); ++i)
    if (ee[i] == s) return poly[i] == edges_[s].vertices[0] ? 1.0 : -1.0;
  throw TopologyError("edge " + std::to_string(s) + " is not part of element " + std::to_string(e));
}

Quadrature Mesh::element_quadrature(int e, int order) const { return triangles_rule(triangles_[e], order); }

Quadrature Mesh::edge_quadrature(int s, int order) const {
  return gauss_segment(vertices_[edges_[s].vertices[0]], vertices_[edges_[s].vertices[1]], order);
}

Mesh build_mesh(GridDict grid) { return Mesh(std::move(grid)); }

Mesh cartesian_grid(int nx, int ny, const Rectangle& box) {
  if (nx < 1 || ny < 1) throw ConfigError("cartesian_grid: nx and ny must be >= 1");
  GridDict g;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      g.vertices.emplace_back(box.x0 + (box.x1 - box.x0) * i / nx, box.y0 + (box.y1 - box.y0) * j / ny);
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) g.polygons.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  return Mesh(std::move(g));
}

Mesh cylinder_channel_grid(int segments, int refine) {
  if (refine < 1) throw ConfigError("cylinder_channel_grid: refine must be >= 1");
  const int ring = 16 * refine;
  if (segments % ring != 0)
    throw ConfigError("cylinder_channel_grid: segments must be a multiple of 16 * refine");
  const Point c(0.2, 0.2);
  const double radius = 0.05;

  auto lines = [](std::vector<double> breaks, std::vector<int> counts) {
    std::vector<double> out{breaks[0]};
    for (std::size_t k = 0; k < counts.size(); ++k)
      for (int i = 1; i <= counts[k]; ++i)
        out.push_back(breaks[k] + (breaks[k + 1] - breaks[k]) * i / counts[k]);
    return out;
  };
  const std::vector<double> xs = lines({0.0, 0.1, 0.3, 2.2}, {2 * refine, 4 * refine, 38 * refine});
  const std::vector<double> ys = lines({0.0, 0.1, 0.3, 0.41}, {2 * refine, 4 * refine, 2 * refine});
  const int nx = static_cast<int>(xs.size()) - 1, ny = static_cast<int>(ys.size()) - 1;
  const int hole_i0 = 2 * refine, hole_i1 = 6 * refine, hole_j0 = 2 * refine, hole_j1 = 6 * refine;

  GridDict g;
  std::map<std::pair<int, int>, int> grid_vertex;
  auto gv = [&](int i, int j) {
    auto it = grid_vertex.find({i, j});
    if (it != grid_vertex.end()) return it->second;
    const int id = static_cast<int>(g.vertices.size());
    g.vertices.emplace_back(xs[i], ys[j]);
    grid_vertex.emplace(std::make_pair(i, j), id);
    return id;
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (i >= hole_i0 && i < hole_i1 && j >= hole_j0 && j < hole_j1) continue;
      g.polygons.push_back({gv(i, j), gv(i + 1, j), gv(i + 1, j + 1), gv(i, j + 1)});
    }
  // square boundary counterclockwise from the lower right corner
  std::vector<int> square;
  const int side = 4 * refine;
  for (int k = 0; k < side; ++k) square.push_back(gv(hole_i1, hole_j0 + k));
  for (int k = 0; k < side; ++k) square.push_back(gv(hole_i1 - k, hole_j1));
  for (int k = 0; k < side; ++k) square.push_back(gv(hole_i0, hole_j1 - k));
  for (int k = 0; k < side; ++k) square.push_back(gv(hole_i0 + k, hole_j0));
  std::vector<int> circle;
  for (int k = 0; k < segments; ++k) {
    const double ang = -0.25 * std::numbers::pi + 2.0 * std::numbers::pi * k / segments;
    circle.push_back(static_cast<int>(g.vertices.size()));
    g.vertices.emplace_back(c + radius * Vec2(std::cos(ang), std::sin(ang)));
  }
  const int per = segments / ring;
  for (int j = 0; j < ring; ++j) {
    std::vector<int> poly{square[j], square[(j + 1) % ring]};
    for (int k = (j + 1) * per; k >= j * per; --k) poly.push_back(circle[k % segments]);
    g.polygons.push_back(std::move(poly));
  }
  return Mesh(std::move(g));
}

int boundary_components(const Mesh& mesh) {
  std::vector<int> parent(mesh.num_vertices());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::vector<bool> on_boundary(mesh.num_vertices(), false);
  for (const auto& e : mesh.edges()) {
    if (!e.boundary) continue;
    on_boundary[e.vertices[0]] = on_boundary[e.vertices[1]] = true;
    parent[find(e.vertices[0])] = find(e.vertices[1]);
  }
  int count = 0;
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
    if (on_boundary[v] && find(static_cast<int>(v)) == static_cast<int>(v)) ++count;
  return count;
}

}  // namespace vem
