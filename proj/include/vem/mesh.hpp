#pragma once

#include "vem/geometry.hpp"
#include "vem/quadrature.hpp"
#include "vem/types.hpp"

#include <array>
#include <vector>

namespace vem {

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rectangle {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  double area() const { return (x1 - x0) * (y1 - y0); }
};

struct Edge {
  /// Global orientation: vertices[0] < vertices[1].
  std::array<int, 2> vertices{-1, -1};
  /// Adjacent elements; elements[1] == -1 on the boundary.
  std::array<int, 2> elements{-1, -1};
  bool boundary = false;
};

/// Input description of a polygonal mesh (vertex coordinates plus
/// vertex-index cycles).
struct GridDict {
  std::vector<Point> vertices;
  std::vector<std::vector<int>> polygons;
};

/// Immutable polygonal mesh with cached element geometry.
class Mesh {
public:
  Mesh() = default;
  /// Validates and builds connectivity. Clockwise cycles are reversed.
  explicit Mesh(GridDict grid);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_elements() const { return polygons_.size(); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& vertex(int v) const { return vertices_[v]; }
  const std::vector<std::vector<int>>& polygons() const { return polygons_; }
  const std::vector<int>& polygon(int e) const { return polygons_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int s) const { return edges_[s]; }

  /// Edge ids of element e; entry i joins local vertices i and i+1.
  const std::vector<int>& element_edges(int e) const { return element_edges_[e]; }
  std::vector<Point> element_points(int e) const;

  double area(int e) const { return areas_[e]; }
  const Point& barycenter(int e) const { return barycenters_[e]; }
  double diameter(int e) const { return diameters_[e]; }
  const BoundingBox& bounding_box(int e) const { return boxes_[e]; }
  const std::vector<Triangle>& triangles(int e) const { return triangles_[e]; }
  /// Polygon index for every triangle of the sub-triangulation.
  const std::vector<int>& element_of_triangle() const { return element_of_triangle_; }
  /// Mean diameter of the elements around vertex v.
  double vertex_length_scale(int v) const { return vertex_scales_[v]; }
  double max_diameter() const;
  double total_area() const;

  double edge_length(int s) const;
  Vec2 edge_tangent(int s) const;  // unit, from vertices[0] to vertices[1]
  Vec2 edge_normal(int s) const;   // unit, tangent rotated by -90 degrees
  /// +1 if the global edge normal points out of element e, -1 otherwise.
  double edge_sign(int e, int s) const;

  bool boundary_vertex(int v) const { return boundary_vertex_[v]; }

  Quadrature element_quadrature(int e, int order) const;
  Quadrature edge_quadrature(int s, int order) const;

  GridDict grid_dict() const { return {vertices_, polygons_}; }

private:
  std::vector<Point> vertices_;
  std::vector<std::vector<int>> polygons_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> element_edges_;
  std::vector<double> areas_;
  std::vector<Point> barycenters_;
  std::vector<double> diameters_;
  std::vector<BoundingBox> boxes_;
  std::vector<std::vector<Triangle>> triangles_;
  std::vector<int> element_of_triangle_;
  std::vector<double> vertex_scales_;
  std::vector<bool> boundary_vertex_;
};

Mesh build_mesh(GridDict grid);

/// nx x ny rectangles covering the box.
Mesh cartesian_grid(int nx, int ny, const Rectangle& box);

/// Clipped Voronoi diagram of uniformly random seeds in the box, optionally
/// Lloyd relaxed. Deterministic for a fixed seed.
Mesh voronoi_grid(int n_cells, const Rectangle& box, int lloyd_iterations, unsigned rng_seed);

/// Clipped Voronoi diagram of given seeds (no relaxation).
Mesh voronoi_from_seeds(const std::vector<Point>& seeds, const Rectangle& box, int lloyd_iterations = 0);

/// Channel [0, 2.2] x [0, 0.41] around a cylinder of radius 0.05 centred at
/// (0.2, 0.2), the circle replaced by a regular polygon with `segments` sides.
/// `refine` multiplies the background resolution.
Mesh cylinder_channel_grid(int segments = 64, int refine = 1);

/// Number of connected components of the mesh boundary.
int boundary_components(const Mesh& mesh);

}  // namespace vem
