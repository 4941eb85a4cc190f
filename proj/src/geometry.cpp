#include "vem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vem {

Vec2 BoundingBox::local(const Point& x) const {
  const Vec2 d = x - center;
  return {d.dot(axes[0]) / half_lengths[0], d.dot(axes[1]) / half_lengths[1]};
}

bool BoundingBox::contains(const Point& x, double tol) const {
  const Vec2 l = local(x);
  return std::abs(l.x()) <= 1.0 + tol && std::abs(l.y()) <= 1.0 + tol;
}

double signed_area(std::span<const Point> p) {
  double a = 0.0;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(p[i], p[(i + 1) % n]);
  return 0.5 * a;
}

Point centroid(std::span<const Point> p) {
  const std::size_t n = p.size();
  // shift to the first vertex to limit cancellation
  const Point o = p[0];
  double a = 0.0;
  Point c = Point::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 u = p[i] - o;
    const Vec2 v = p[(i + 1) % n] - o;
    const double w = cross(u, v);
    a += w;
    c += w * (u + v);
  }
  return o + c / (3.0 * a);
}

double diameter(std::span<const Point> p) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) d = std::max(d, (p[i] - p[j]).norm());
  return d;
}

std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

BoundingBox box_for_direction(std::span<const Point> pts, const Vec2& direction) {
  Vec2 u = direction.normalized();
  // canonical first axis: angle in [0, pi/2)
  for (int r = 0; r < 4; ++r) {
    const double ang = std::atan2(u.y(), u.x());
    if (ang >= -1e-15 && ang < 0.5 * std::numbers::pi - 1e-15) break;
    u = Vec2(-u.y(), u.x());
  }
  if (std::abs(u.y()) < 1e-15 && u.x() > 0) u = Vec2(1.0, 0.0);
  const Vec2 v(-u.y(), u.x());
  double lo0 = 1e300, hi0 = -1e300, lo1 = 1e300, hi1 = -1e300;
  for (const auto& p : pts) {
    const double a = p.dot(u), b = p.dot(v);
    lo0 = std::min(lo0, a);
    hi0 = std::max(hi0, a);
    lo1 = std::min(lo1, b);
    hi1 = std::max(hi1, b);
  }
  BoundingBox box;
  box.axes = {u, v};
  box.half_lengths = {0.5 * (hi0 - lo0), 0.5 * (hi1 - lo1)};
  box.center = 0.5 * (lo0 + hi0) * u + 0.5 * (lo1 + hi1) * v;
  return box;
}

BoundingBox min_area_bounding_box(std::span<const Point> points) {
  std::vector<Point> h = convex_hull(std::vector<Point>(points.begin(), points.end()));
  const std::size_t n = h.size();
  if (n < 3) return box_for_direction(points, n == 2 ? Vec2(h[1] - h[0]) : Vec2::UnitX());

  auto dir = [&](std::size_t i) { return Vec2((h[(i + 1) % n] - h[i]).normalized()); };
  auto next = [&](std::size_t i) { return (i + 1) % n; };

  // extreme points for the first edge by direct scan, then advance monotonically
  std::size_t right = 0, top = 0, left = 0;
  {
    const Vec2 u = dir(0);
    const Vec2 v(-u.y(), u.x());
    for (std::size_t k = 0; k < n; ++k) {
      if (h[k].dot(u) > h[right].dot(u)) right = k;
      if (h[k].dot(v) > h[top].dot(v)) top = k;
      if (h[k].dot(u) < h[left].dot(u)) left = k;
    }
  }

  double best_area = 1e300;
  double best_angle = 1e300;
  BoundingBox best;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 u = dir(i);
    const Vec2 v(-u.y(), u.x());
    while (h[next(right)].dot(u) > h[right].dot(u)) right = next(right);
    while (h[next(top)].dot(v) > h[top].dot(v)) top = next(top);
    while (h[next(left)].dot(u) < h[left].dot(u)) left = next(left);

    const double area = (h[right] - h[left]).dot(u) * (h[top] - h[i]).dot(v);
    const BoundingBox box = box_for_direction(h, u);
    const double angle = std::atan2(box.axes[0].y(), box.axes[0].x());
    const double tol = 1e-12 * std::abs(area);
    if (area < best_area - tol || (std::abs(area - best_area) <= tol && angle < best_angle)) {
      best_area = std::min(area, best_area);
      best_angle = angle;
      best = box;
    }
  }
  return best;
}

namespace {

int orient(const Point& a, const Point& b, const Point& c) {
  const double v = cross(b - a, c - a);
  const double scale = (b - a).norm() * (c - a).norm();
  if (std::abs(v) <= 1e-14 * scale) return 0;
  return v > 0 ? 1 : -1;
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

}  // namespace

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
  const int o1 = orient(a, b, c), o2 = orient(a, b, d);
  const int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

bool is_simple(std::span<const Point> p) {
  const std::size_t n = p.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      const Point& a = p[i];
      const Point& b = p[(i + 1) % n];
      const Point& c = p[j];
      const Point& d = p[(j + 1) % n];
      if (adjacent) {
        // adjacent edges may only share their common vertex
        const Point& shared = (j == i + 1) ? b : a;
        const Point& other_i = (j == i + 1) ? a : b;
        const Point& other_j = (j == i + 1) ? d : c;
        if (orient(other_i, shared, other_j) == 0 && (other_j - shared).dot(other_i - shared) > 0)
          return false;
        continue;
      }
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

std::vector<Triangle> ear_clip(std::span<const Point> polygon) {
  std::vector<int> idx(polygon.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::vector<Triangle> tris;
  auto inside = [](const Point& p, const Point& a, const Point& b, const Point& c) {
    return cross(b - a, p - a) >= 0 && cross(c - b, p - b) >= 0 && cross(a - c, p - c) >= 0;
  };
  std::size_t guard = 0;
  while (idx.size() > 3) {
    bool clipped = false;
    const std::size_t m = idx.size();
    for (std::size_t k = 0; k < m; ++k) {
      const Point& a = polygon[idx[(k + m - 1) % m]];
      const Point& b = polygon[idx[k]];
      const Point& c = polygon[idx[(k + 1) % m]];
      if (cross(b - a, c - b) <= 1e-14 * (b - a).norm() * (c - b).norm()) continue;
      bool ear = true;
      for (std::size_t j = 0; j < m && ear; ++j) {
        if (j == k || j == (k + 1) % m || j == (k + m - 1) % m) continue;
        const Point& p = polygon[idx[j]];
        if (p == a || p == b || p == c) continue;
        if (inside(p, a, b, c)) ear = false;
      }
      if (!ear) continue;
      tris.push_back({a, b, c});
      idx.erase(idx.begin() + static_cast<long>(k));
      clipped = true;
      break;
    }
    if (!clipped || ++guard > 10 * polygon.size())
      throw GeometryError("ear clipping failed: polygon is not simple");
  }
  tris.push_back({polygon[idx[0]], polygon[idx[1]], polygon[idx[2]]});
  return tris;
}

std::vector<Triangle> sub_triangulate(std::span<const Point> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) throw GeometryError("sub_triangulate: polygon has fewer than 3 vertices");
  if (n == 3) return {Triangle{polygon[0], polygon[1], polygon[2]}};
  const Point c = centroid(polygon);
  const double area = signed_area(polygon);
  std::vector<Triangle> tris;
  tris.reserve(n);
  bool star = true;
  for (std::size_t i = 0; i < n && star; ++i) {
    const Point& a = polygon[i];
    const Point& b = polygon[(i + 1) % n];
    const double t = 0.5 * cross(a - c, b - c);
    if (t <= 1e-10 * std::abs(area) / static_cast<double>(n)) star = false;
    tris.push_back({c, a, b});
  }
  if (star) return tris;
  return ear_clip(polygon);
}

std::vector<Point> clip_half_plane(std::span<const Point> poly, const Vec2& normal, double offset) {
  std::vector<Point> out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  out.reserve(n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % n];
    const double dp = normal.dot(p) - offset;
    const double dq = normal.dot(q) - offset;
    if (dp <= 0) out.push_back(p);
    if ((dp < 0 && dq > 0) || (dp > 0 && dq < 0)) {
      const double t = dp / (dp - dq);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

}  // namespace vem
