#pragma once

#include "vem/types.hpp"

#include <array>
#include <span>
#include <vector>

namespace vem {

/// Points and weights of a quadrature rule on a mesh entity.
struct Quadrature {
  std::vector<Point> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
  double total_weight() const;
  void append(const Quadrature& other);
};

/// Gauss-Legendre rule with n points on [0, 1].
Quadrature gauss_legendre_unit(int n);

/// Rule on the segment [a, b], exact for polynomials of degree <= order.
Quadrature gauss_segment(const Point& a, const Point& b, int order);

/// Rule on the triangle (a, b, c), exact for polynomials of degree <= order.
/// Symmetric Dunavant rules up to order 5, collapsed Gauss products above.
Quadrature triangle_rule(const Point& a, const Point& b, const Point& c, int order);

/// Collapsed (Duffy) tensor Gauss rule on a triangle; any order.
Quadrature collapsed_triangle_rule(const Point& a, const Point& b, const Point& c, int order);

using Triangle = std::array<Point, 3>;

/// Concatenated triangle rules over a list of triangles.
Quadrature triangles_rule(std::span<const Triangle> triangles, int order);

}  // namespace vem
