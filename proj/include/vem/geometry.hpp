#pragma once

#include "vem/quadrature.hpp"
#include "vem/types.hpp"

#include <span>
#include <vector>

namespace vem {

/// Minimal-area enclosing rectangle of a point set.
struct BoundingBox {
  Point center = Point::Zero();
  std::array<Vec2, 2> axes{Vec2::UnitX(), Vec2::UnitY()};
  std::array<double, 2> half_lengths{0.0, 0.0};

  double area() const { return 4.0 * half_lengths[0] * half_lengths[1]; }
  /// Coordinates of x in the box frame, in [-1, 1]^2 for contained points.
  Vec2 local(const Point& x) const;
  bool contains(const Point& x, double tol = 1e-12) const;
};

double signed_area(std::span<const Point> polygon);
Point centroid(std::span<const Point> polygon);
double diameter(std::span<const Point> polygon);

/// Convex hull in counterclockwise order, collinear points removed.
std::vector<Point> convex_hull(std::vector<Point> points);

/// Rotating calipers over the convex hull. Among equal areas the box whose
/// first axis makes the smaller angle with +x wins; axes[0] has an angle in
/// [0, pi/2) and axes[1] is axes[0] rotated by +90 degrees.
BoundingBox min_area_bounding_box(std::span<const Point> points);

/// Canonical box from one axis direction and the point cloud.
BoundingBox box_for_direction(std::span<const Point> points, const Vec2& direction);

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d);
bool is_simple(std::span<const Point> polygon);

/// Triangulation used for quadrature: the polygon itself when it is a
/// triangle, a fan from the centroid when the polygon is star shaped with
/// respect to it, ear clipping otherwise.
std::vector<Triangle> sub_triangulate(std::span<const Point> polygon);
std::vector<Triangle> ear_clip(std::span<const Point> polygon);

/// Sutherland-Hodgman clipping of a convex or concave polygon against the
/// half plane {x : dot(normal, x) <= offset}.
std::vector<Point> clip_half_plane(std::span<const Point> polygon, const Vec2& normal, double offset);

}  // namespace vem
