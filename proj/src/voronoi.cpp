#include "vem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <unordered_map>

namespace vem {
namespace {

struct BucketGrid {
  BucketGrid(const std::vector<Point>& seeds, const Rectangle& box) : box(box) {
    const double n = static_cast<double>(seeds.size());
    const double aspect = (box.x1 - box.x0) / (box.y1 - box.y0);
    nx = std::max(1, static_cast<int>(std::ceil(std::sqrt(n * aspect) / 2)));
    ny = std::max(1, static_cast<int>(std::ceil(std::sqrt(n / aspect) / 2)));
    dx = (box.x1 - box.x0) / nx;
    dy = (box.y1 - box.y0) / ny;
    buckets.resize(static_cast<std::size_t>(nx) * ny);
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const auto [bx, by] = bucket(seeds[i]);
      buckets[by * nx + bx].push_back(static_cast<int>(i));
    }
  }
  std::pair<int, int> bucket(const Point& p) const {
    const int bx = std::clamp(static_cast<int>((p.x() - box.x0) / dx), 0, nx - 1);
    const int by = std::clamp(static_cast<int>((p.y() - box.y0) / dy), 0, ny - 1);
    return {bx, by};
  }
  Rectangle box;
  int nx, ny;
  double dx, dy;
  std::vector<std::vector<int>> buckets;
};

std::vector<Point> box_polygon(const Rectangle& box) {
  return {{box.x0, box.y0}, {box.x1, box.y0}, {box.x1, box.y1}, {box.x0, box.y1}};
}

// Voronoi cell of seed i: clip the box by bisectors of seeds in growing
// rings of buckets until no further seed can cut the cell.
std::vector<Point> voronoi_cell(int i, const std::vector<Point>& seeds, const BucketGrid& grid) {
  const Point& s = seeds[i];
  std::vector<Point> cell = box_polygon(grid.box);
  const auto [bx, by] = grid.bucket(s);
  const int max_ring = std::max(grid.nx, grid.ny);
  for (int ring = 0; ring <= max_ring; ++ring) {
    for (int j = by - ring; j <= by + ring; ++j) {
      if (j < 0 || j >= grid.ny) continue;
      for (int k = bx - ring; k <= bx + ring; ++k) {
        if (k < 0 || k >= grid.nx) continue;
        if (std::max(std::abs(j - by), std::abs(k - bx)) != ring) continue;
        for (int other : grid.buckets[j * grid.nx + k]) {
          if (other == i) continue;
          const Vec2 normal = seeds[other] - s;
          cell = clip_half_plane(cell, normal, normal.dot(0.5 * (seeds[other] + s)));
        }
      }
    }
    double r = 0.0;
    for (const Point& p : cell) r = std::max(r, (p - s).norm());
    // seeds outside the searched rings are at least ring * min(dx, dy) away
    if (2.0 * r <= ring * std::min(grid.dx, grid.dy)) break;
  }
  return cell;
}

std::vector<std::vector<Point>> voronoi_cells(const std::vector<Point>& seeds, const Rectangle& box) {
  BucketGrid grid(seeds, box);
  std::vector<std::vector<Point>> cells(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) cells[i] = voronoi_cell(static_cast<int>(i), seeds, grid);
  return cells;
}

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
  }
  int find(int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> parent;
};

// Merge cell corners closer than tol into shared vertices. Returns an empty
// optional-like flag through `ok` if the result is not a valid tessellation.
GridDict merge_cells(const std::vector<std::vector<Point>>& cells, const Rectangle& box, double tol, bool& ok) {
  std::vector<Point> pts;
  std::vector<std::vector<int>> raw(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (const Point& p : cells[c]) {
      raw[c].push_back(static_cast<int>(pts.size()));
      pts.push_back(p);
    }
  UnionFind uf(pts.size());
  std::unordered_map<long long, std::vector<int>> hash;
  auto key = [&](long long ix, long long iy) { return ix * 2654435761LL + iy; };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const long long ix = static_cast<long long>(std::floor((pts[i].x() - box.x0) / tol));
    const long long iy = static_cast<long long>(std::floor((pts[i].y() - box.y0) / tol));
    for (long long a = ix - 1; a <= ix + 1; ++a)
      for (long long b = iy - 1; b <= iy + 1; ++b) {
        auto it = hash.find(key(a, b));
        if (it == hash.end()) continue;
        for (int j : it->second)
          if ((pts[i] - pts[j]).norm() <= tol) uf.unite(static_cast<int>(i), j);
      }
    hash[key(ix, iy)].push_back(static_cast<int>(i));
  }
  GridDict g;
  std::vector<int> index(pts.size(), -1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const int r = uf.find(static_cast<int>(i));
    if (index[r] < 0) {
      index[r] = static_cast<int>(g.vertices.size());
      Point p = pts[r];
      // snap to the box so boundary edges are exactly straight
      if (std::abs(p.x() - box.x0) <= tol) p.x() = box.x0;
      if (std::abs(p.x() - box.x1) <= tol) p.x() = box.x1;
      if (std::abs(p.y() - box.y0) <= tol) p.y() = box.y0;
      if (std::abs(p.y() - box.y1) <= tol) p.y() = box.y1;
      g.vertices.push_back(p);
    }
    index[i] = index[r];
  }
  ok = true;
  for (const auto& cell : raw) {
    std::vector<int> poly;
    for (int v : cell) {
      const int id = index[v];
      if (poly.empty() || poly.back() != id) poly.push_back(id);
    }
    while (poly.size() > 1 && poly.front() == poly.back()) poly.pop_back();
    if (poly.size() < 3) {
      ok = false;
      continue;
    }
    g.polygons.push_back(std::move(poly));
  }
  if (!ok) return g;

  // every edge must be shared by two cells unless it lies on the box boundary
  std::unordered_map<long long, int> count;
  const long long nv = static_cast<long long>(g.vertices.size());
  for (const auto& poly : g.polygons)
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const int a = poly[k], b = poly[(k + 1) % poly.size()];
      ++count[std::min(a, b) * nv + std::max(a, b)];
    }
  for (const auto& [edge, c] : count) {
    if (c == 2) continue;
    const Point& a = g.vertices[edge / nv];
    const Point& b = g.vertices[edge % nv];
    const bool on_box = (a.x() == box.x0 && b.x() == box.x0) || (a.x() == box.x1 && b.x() == box.x1) ||
                        (a.y() == box.y0 && b.y() == box.y0) || (a.y() == box.y1 && b.y() == box.y1);
    if (c != 1 || !on_box) {
      ok = false;
      break;
    }
  }
  return g;
}

Mesh mesh_from_seeds(std::vector<Point> seeds, const Rectangle& box, int lloyd_iterations, std::mt19937& rng) {
  const double scale = std::max(box.x1 - box.x0, box.y1 - box.y0);
  const double tol = 1e-9 * scale;
  for (int it = 0; it < lloyd_iterations; ++it) {
    const auto cells = voronoi_cells(seeds, box);
    for (std::size_t i = 0; i < seeds.size(); ++i)
      if (cells[i].size() >= 3) seeds[i] = centroid(cells[i]);
  }
  std::normal_distribution<double> jitter(0.0, 1e-7 * scale);
  constexpr int max_attempts = 10;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    bool ok = false;
    GridDict g = merge_cells(voronoi_cells(seeds, box), box, tol, ok);
    if (ok) {
      try {
        return Mesh(std::move(g));
      } catch (const Error&) {
      }
    }
    for (Point& s : seeds) {
      s += Vec2(jitter(rng), jitter(rng));
      s.x() = std::clamp(s.x(), box.x0, box.x1);
      s.y() = std::clamp(s.y(), box.y0, box.y1);
    }
  }
  throw GeometryError("voronoi: degenerate seed configuration after " + std::to_string(max_attempts) +
                      " perturbations");
}

}  // namespace

Mesh voronoi_grid(int n_cells, const Rectangle& box, int lloyd_iterations, unsigned rng_seed) {
  if (n_cells < 1) throw ConfigError("voronoi_grid: n_cells must be >= 1");
  if (lloyd_iterations < 0) throw ConfigError("voronoi_grid: lloyd_iterations must be >= 0");
  std::mt19937 rng(rng_seed);
  std::uniform_real_distribution<double> ux(box.x0, box.x1), uy(box.y0, box.y1);
  std::vector<Point> seeds(n_cells);
  for (Point& s : seeds) {
    const double x = ux(rng);
    s = Point(x, uy(rng));
  }
  return mesh_from_seeds(std::move(seeds), box, lloyd_iterations, rng);
}

Mesh voronoi_from_seeds(const std::vector<Point>& seeds, const Rectangle& box, int lloyd_iterations) {
  if (seeds.empty()) throw ConfigError("voronoi_from_seeds: no seeds");
  std::mt19937 rng(0);
  return mesh_from_seeds(seeds, box, lloyd_iterations, rng);
}

}  // namespace vem
