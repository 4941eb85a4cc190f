#pragma once

#include "vem/mesh.hpp"
#include "vem/spaces.hpp"

#include <memory>
#include <random>

namespace testing {

using namespace vem;

// triangles, a quad with a straight angle, a pentagon, a nonconvex
// heptagon and a square
inline GridDict mixed_grid() {
  GridDict g;
  for (int j = 0; j <= 2; ++j)
    for (int i = 0; i <= 3; ++i) g.vertices.push_back(Point(i, j));
  g.vertices.push_back(Point(0.5, 1.0));  // 12
  auto v = [](int i, int j) { return j * 4 + i; };
  g.polygons = {
      {v(0, 0), v(1, 0), v(1, 1)},
      {v(0, 0), v(1, 1), 12, v(0, 1)},
      {v(0, 1), 12, v(1, 1), v(1, 2), v(0, 2)},
      {v(1, 0), v(2, 0), v(3, 0), v(3, 1), v(2, 1), v(2, 2), v(1, 2), v(1, 1)},
      {v(2, 1), v(3, 1), v(3, 2), v(2, 2)},
  };
  return g;
}

inline std::shared_ptr<const Mesh> mixed_mesh() { return std::make_shared<const Mesh>(mixed_grid()); }

inline std::shared_ptr<const Mesh> voronoi_mesh(int n, std::uint64_t seed = 7, int lloyd = 20) {
  return std::make_shared<const Mesh>(voronoi_grid(n, Rectangle{}, lloyd, seed));
}

// random polygon with 3..8 vertices, star shaped around the origin. About
// half of them (those with 4 or more vertices) get a dent: one vertex pulled
// inside the chord of its neighbours, which makes it reflex.
inline std::vector<Point> random_polygon(std::mt19937& rng) {
  std::uniform_int_distribution<int> nd(3, 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = nd(rng);
  const bool dent = n >= 4 && u(rng) < 0.6;
  const int m = dent ? n - 1 : n;
  std::vector<Point> pts;
  for (int i = 0; i < m; ++i) {
    const double a = 2 * M_PI * (i + 0.3 * u(rng)) / m;
    pts.push_back(Point(std::cos(a), std::sin(a)));
  }
  if (dent) {
    const Point mid = 0.5 * (pts[m - 1] + pts[0]);
    pts.push_back((0.3 + 0.4 * u(rng)) * mid);
  }
  for (Point& p : pts) p = Point(0.3 + p.x(), -0.2 + 0.7 * p.y());
  return pts;
}

inline std::shared_ptr<const Mesh> single_polygon(const std::vector<Point>& pts) {
  GridDict g;
  g.vertices = pts;
  std::vector<int> cyc;
  for (std::size_t i = 0; i < pts.size(); ++i) cyc.push_back(static_cast<int>(i));
  g.polygons = {cyc};
  return std::make_shared<const Mesh>(g);
}

// L2 projection of the derivative of order mu of the B0 combination `coef`
// onto span(target), computed with a high order rule.
inline Vector l2_projection_oracle(const Mesh& mesh, int e, const TensorBasis& b0, const Vector& coef,
                                   const TensorBasis& target, int mu) {
  const Quadrature q = mesh.element_quadrature(e, 2 * (b0.order() + target.order()) + 6);
  const int nt = target.components();
  const Matrix tv = target.evaluate(q.points, 0);
  const Matrix fv = b0.evaluate(q.points, mu) * coef;  // rows (p * nc + c) * 2^mu + derivs
  const int per = b0.components() * (mu == 0 ? 1 : mu == 1 ? 2 : 4);
  if (per != nt) throw std::runtime_error("oracle shape mismatch");
  Matrix G = Matrix::Zero(target.size(), target.size());
  Vector rhs = Vector::Zero(target.size());
  for (std::size_t p = 0; p < q.size(); ++p) {
    const auto tb = tv.middleRows(p * nt, nt);
    G += q.weights[p] * tb.transpose() * tb;
    rhs += q.weights[p] * tb.transpose() * fv.middleRows(p * nt, nt);
  }
  return G.ldlt().solve(rhs);
}

}  // namespace testing
