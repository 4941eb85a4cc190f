#include "vem/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace vem {

double Quadrature::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

void Quadrature::append(const Quadrature& other) {
  points.insert(points.end(), other.points.begin(), other.points.end());
  weights.insert(weights.end(), other.weights.begin(), other.weights.end());
}

Quadrature gauss_legendre_unit(int n) {
  Quadrature q;
  if (n < 1) n = 1;
  q.points.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? x : p1;
      const double pnm1 = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? x : p1;
      const double pnm1 = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.points[i] = Point(0.5 * (1.0 - x), 0.0);
    q.weights[i] = 0.5 * w;
  }
  return q;
}

Quadrature gauss_segment(const Point& a, const Point& b, int order) {
  const int n = std::max(1, (order + 2) / 2);
  Quadrature unit = gauss_legendre_unit(n);
  const double len = (b - a).norm();
  Quadrature q;
  q.points.reserve(n);
  q.weights.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double t = unit.points[i].x();
    q.points.push_back(a + t * (b - a));
    q.weights.push_back(unit.weights[i] * len);
  }
  return q;
}

namespace {

struct BaryRule {
  std::vector<std::array<double, 3>> bary;
  std::vector<double> weights;  // sum to 1
};

void add_orbit3(BaryRule& r, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  r.bary.push_back({a, a, b});
  r.bary.push_back({a, b, a});
  r.bary.push_back({b, a, a});
  for (int i = 0; i < 3; ++i) r.weights.push_back(w);
}

const BaryRule& dunavant(int order) {
  static const BaryRule r1 = [] {
    BaryRule r;
    r.bary.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    r.weights.push_back(1.0);
    return r;
  }();
  static const BaryRule r2 = [] {
    BaryRule r;
    add_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
    return r;
  }();
  static const BaryRule r4 = [] {
    BaryRule r;
    add_orbit3(r, 0.445948490915965, 0.223381589678011);
    add_orbit3(r, 0.091576213509771, 0.109951743655322);
    return r;
  }();
  static const BaryRule r5 = [] {
    BaryRule r;
    r.bary.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    r.weights.push_back(0.225);
    add_orbit3(r, 0.470142064105115, 0.132394152788506);
    add_orbit3(r, 0.101286507323456, 0.125939180544827);
    return r;
  }();
  if (order <= 1) return r1;
  if (order == 2) return r2;
  if (order <= 4) return r4;
  return r5;
}

}  // namespace

Quadrature collapsed_triangle_rule(const Point& a, const Point& b, const Point& c, int order) {
  const int n = std::max(1, (order + 3) / 2);
  const Quadrature g = gauss_legendre_unit(n);
  const double area2 = std::abs(cross(b - a, c - a));
  Quadrature q;
  q.points.reserve(n * n);
  q.weights.reserve(n * n);
  for (int i = 0; i < n; ++i) {
    const double u = g.points[i].x();
    for (int j = 0; j < n; ++j) {
      const double v = g.points[j].x();
      // (u, v) in the unit square -> (s, t) = (u, v (1 - u)) in the reference triangle
      const double s = u;
      const double t = v * (1.0 - u);
      q.points.push_back(a + s * (b - a) + t * (c - a));
      q.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - u) * area2);
    }
  }
  return q;
}

Quadrature triangle_rule(const Point& a, const Point& b, const Point& c, int order) {
  if (order > 5) return collapsed_triangle_rule(a, b, c, order);
  const BaryRule& r = dunavant(order);
  const double area = 0.5 * std::abs(cross(b - a, c - a));
  Quadrature q;
  q.points.reserve(r.bary.size());
  q.weights.reserve(r.bary.size());
  for (std::size_t i = 0; i < r.bary.size(); ++i) {
    const auto& l = r.bary[i];
    q.points.push_back(l[0] * a + l[1] * b + l[2] * c);
    q.weights.push_back(r.weights[i] * area);
  }
  return q;
}

Quadrature triangles_rule(std::span<const Triangle> triangles, int order) {
  Quadrature q;
  for (const auto& t : triangles) q.append(triangle_rule(t[0], t[1], t[2], order));
  return q;
}

}  // namespace vem
