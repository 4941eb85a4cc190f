#include "vem/basis.hpp"

#include <cmath>

namespace vem {
namespace {

int mono_index(int i, int j) {
  const int d = i + j;
  return d * (d + 1) / 2 + (d - i);
}

// monomial coefficients of the Legendre polynomials P_0..P_n
std::vector<Vector> legendre_coefficients(int n) {
  std::vector<Vector> p(n + 1);
  for (int k = 0; k <= n; ++k) p[k] = Vector::Zero(n + 1);
  p[0][0] = 1.0;
  if (n >= 1) p[1][1] = 1.0;
  for (int k = 1; k < n; ++k)
    for (int i = 0; i <= n; ++i) {
      double v = -k * p[k - 1][i];
      if (i > 0) v += (2 * k + 1) * p[k][i - 1];
      p[k + 1][i] = v / (k + 1);
    }
  return p;
}

}  // namespace

ScalarBasis::ScalarBasis(const Mesh& mesh, int e, int order, Scaling scaling) : order_(order) {
  const int n = size();
  if (scaling == Scaling::Isotropic) {
    center_ = mesh.barycenter(e);
    length_scale_ = mesh.diameter(e);
    jacobian_ = Mat2::Identity() / length_scale_;
    coeffs_ = Matrix::Identity(n, n);
    return;
  }
  const BoundingBox& bb = mesh.bounding_box(e);
  center_ = bb.center;
  length_scale_ = mesh.diameter(e);
  jacobian_.row(0) = bb.axes[0].transpose() / bb.half_lengths[0];
  jacobian_.row(1) = bb.axes[1].transpose() / bb.half_lengths[1];
  const auto leg = legendre_coefficients(order);
  coeffs_ = Matrix::Zero(n, n);
  for (int d = 0; d <= order; ++d)
    for (int a = d; a >= 0; --a) {
      const int b = d - a;
      const int row = mono_index(a, b);
      for (int i = 0; i <= a; ++i)
        for (int j = 0; j <= b; ++j) coeffs_(row, mono_index(i, j)) = leg[a][i] * leg[b][j];
    }
}

ScalarBasis::ScalarBasis(const Point& center, const Mat2& jacobian, double length_scale, int order)
    : order_(order), center_(center), jacobian_(jacobian), length_scale_(length_scale) {
  coeffs_ = Matrix::Identity(size(), size());
}

void ScalarBasis::raw(const Point& x, int deriv, Eigen::Ref<Matrix> out) const {
  const Vec2 xi = jacobian_ * (x - center_);
  const int p = order_;
  // powers with a two slot offset so that derivative formulas index safely
  std::vector<double> px(p + 3, 0.0), py(p + 3, 0.0);
  px[2] = py[2] = 1.0;
  for (int k = 1; k <= p; ++k) {
    px[k + 2] = px[k + 1] * xi.x();
    py[k + 2] = py[k + 1] * xi.y();
  }
  auto X = [&](int k) { return px[k + 2]; };
  auto Y = [&](int k) { return py[k + 2]; };
  for (int d = 0; d <= p; ++d)
    for (int a = d; a >= 0; --a) {
      const int b = d - a;
      const int r = mono_index(a, b);
      out(r, 0) = X(a) * Y(b);
      if (deriv >= 1) {
        out(r, 1) = a > 0 ? a * X(a - 1) * Y(b) : 0.0;
        out(r, 2) = b > 0 ? b * X(a) * Y(b - 1) : 0.0;
      }
      if (deriv >= 2) {
        out(r, 3) = a > 1 ? a * (a - 1) * X(a - 2) * Y(b) : 0.0;
        out(r, 4) = a > 0 && b > 0 ? a * b * X(a - 1) * Y(b - 1) : 0.0;
        out(r, 5) = b > 1 ? b * (b - 1) * X(a) * Y(b - 2) : 0.0;
      }
    }
}

Vector ScalarBasis::values(const Point& x) const {
  Matrix r(size(), 1);
  raw(x, 0, r);
  return coeffs_ * r.col(0);
}

Matrix ScalarBasis::values(const std::vector<Point>& pts) const {
  const int n = size();
  Matrix out(pts.size(), n);
  Matrix r(n, 1);
  for (std::size_t q = 0; q < pts.size(); ++q) {
    raw(pts[q], 0, r);
    out.row(q) = (coeffs_ * r.col(0)).transpose();
  }
  return out;
}

Matrix ScalarBasis::gradients(const std::vector<Point>& pts) const {
  const int n = size();
  Matrix out(2 * pts.size(), n);
  Matrix r(n, 3);
  for (std::size_t q = 0; q < pts.size(); ++q) {
    raw(pts[q], 1, r);
    // d/dx_k = sum_m J(m, k) d/dxi_m
    const Matrix g = coeffs_ * r.rightCols(2);  // n x 2 in local coordinates
    const Matrix gx = g * jacobian_;
    out.row(2 * q) = gx.col(0).transpose();
    out.row(2 * q + 1) = gx.col(1).transpose();
  }
  return out;
}

Matrix ScalarBasis::hessians(const std::vector<Point>& pts) const {
  const int n = size();
  Matrix out(4 * pts.size(), n);
  Matrix r(n, 6);
  const Mat2& J = jacobian_;
  for (std::size_t q = 0; q < pts.size(); ++q) {
    raw(pts[q], 2, r);
    const Matrix h = coeffs_ * r.rightCols(3);  // xx, xy, yy in local coordinates
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        // (J^T H J)_{ij}
        const double c00 = J(0, i) * J(0, j), c11 = J(1, i) * J(1, j);
        const double c01 = J(0, i) * J(1, j) + J(1, i) * J(0, j);
        out.row(4 * q + 2 * i + j) = (c00 * h.col(0) + c01 * h.col(1) + c11 * h.col(2)).transpose();
      }
  }
  return out;
}

void ScalarBasis::orthonormalize(const Quadrature& quad) {
  const int n = size();
  Matrix V = values(quad.points);
  const Eigen::Map<const Vector> w(quad.weights.data(), quad.weights.size());
  Matrix C = coeffs_;
  double leading = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < i; ++j) {
        const double r = (w.array() * V.col(i).array() * V.col(j).array()).sum();
        V.col(i) -= r * V.col(j);
        C.row(i) -= r * C.row(j);
      }
    const double norm = std::sqrt((w.array() * V.col(i).array().square()).sum());
    if (i == 0) leading = norm;
    if (!(norm > 1e-13 * leading))
      throw ConditioningError("orthonormalize: member " + std::to_string(i) + " is numerically dependent");
    V.col(i) /= norm;
    C.row(i) /= norm;
  }
  coeffs_ = C;
  orthonormal_ = true;
}

ScalarBasis ScalarBasis::truncated(int order) const {
  ScalarBasis b = *this;
  b.order_ = order;
  b.coeffs_ = coeffs_.topLeftCorner(poly_dim(order), poly_dim(order));
  return b;
}

Matrix gram_matrix(const ScalarBasis& basis, const Quadrature& quad) {
  const Matrix V = basis.values(quad.points);
  const Eigen::Map<const Vector> w(quad.weights.data(), quad.weights.size());
  return V.transpose() * w.asDiagonal() * V;
}

EdgeBasis::EdgeBasis(const Point& a, const Point& b, int order)
    : order_(order), mid_(0.5 * (a + b)), tangent_((b - a).normalized()), length_((b - a).norm()) {}

EdgeBasis::EdgeBasis(const Mesh& mesh, int s, int order)
    : EdgeBasis(mesh.vertex(mesh.edge(s).vertices[0]), mesh.vertex(mesh.edge(s).vertices[1]), order) {}

double EdgeBasis::tau(const Point& x) const { return 2.0 * (x - mid_).dot(tangent_) / length_; }

Vector EdgeBasis::values_at_tau(double t) const {
  Vector v(size());
  double p = 1.0;
  for (int k = 0; k <= order_; ++k, p *= t) v[k] = p;
  return v;
}

Vector EdgeBasis::derivatives_at_tau(double t) const {
  Vector v = Vector::Zero(size());
  double p = 1.0;
  for (int k = 1; k <= order_; ++k, p *= t) v[k] = k * p * 2.0 / length_;
  return v;
}

Matrix EdgeBasis::values(const std::vector<Point>& pts) const {
  Matrix out(pts.size(), size());
  for (std::size_t q = 0; q < pts.size(); ++q) out.row(q) = values_at_tau(tau(pts[q])).transpose();
  return out;
}

Matrix EdgeBasis::derivatives(const std::vector<Point>& pts) const {
  Matrix out(pts.size(), size());
  for (std::size_t q = 0; q < pts.size(); ++q) out.row(q) = derivatives_at_tau(tau(pts[q])).transpose();
  return out;
}

int structure_components(Structure s) {
  switch (s) {
    case Structure::Scalar: return 1;
    case Structure::Vector:
    case Structure::Gradient:
    case Structure::Perp: return 2;
    case Structure::Matrix:
    case Structure::Sym:
    case Structure::Isotropic: return 4;
  }
  return 1;
}

int structure_size(Structure s, int order) {
  const int n = poly_dim(order);
  switch (s) {
    case Structure::Scalar:
    case Structure::Isotropic:
    case Structure::Perp: return n;
    case Structure::Vector: return 2 * n;
    case Structure::Matrix: return 4 * n;
    case Structure::Sym: return 3 * n;
    case Structure::Gradient: return std::max(0, n - 1);
  }
  return n;
}

TensorBasis::TensorBasis(std::shared_ptr<const ScalarBasis> scalar, Structure structure, int order)
    : scalar_(std::move(scalar)), structure_(structure), order_(order) {
  if (order > scalar_->order()) throw ConfigError("TensorBasis: order exceeds the underlying scalar basis");
  size_ = order < 0 ? 0 : structure_size(structure, order);
  components_ = structure_components(structure);
}

Matrix TensorBasis::evaluate(const std::vector<Point>& pts, int deriv) const {
  const int nc = components_;
  const int nd = deriv == 0 ? 1 : (deriv == 1 ? 2 : 4);
  const std::size_t np = pts.size();
  Matrix out = Matrix::Zero(np * nc * nd, size_);
  if (size_ == 0) return out;
  const int n = poly_dim(order_);
  const ScalarBasis sb = scalar_->truncated(order_);
  auto row = [&](std::size_t p, int c, int d) { return (p * nc + c) * nd + d; };

  if (structure_ == Structure::Gradient) {
    if (deriv > 1) throw ConfigError("TensorBasis: second derivatives of gradient members are not available");
    const Matrix g = deriv == 0 ? sb.gradients(pts) : sb.hessians(pts);
    for (std::size_t p = 0; p < np; ++p)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < nd; ++d)
          out.row(row(p, c, d)) = g.row(deriv == 0 ? 2 * p + c : 4 * p + 2 * c + d).tail(n - 1);
    return out;
  }

  Matrix s;  // scalar table with nd rows per point
  if (deriv == 0) s = sb.values(pts);
  else if (deriv == 1) s = sb.gradients(pts);
  else s = sb.hessians(pts);

  for (std::size_t p = 0; p < np; ++p)
    for (int d = 0; d < nd; ++d) {
      const auto m = s.row(p * nd + d);
      switch (structure_) {
        case Structure::Scalar: out.row(row(p, 0, d)) = m; break;
        case Structure::Vector:
          for (int c = 0; c < 2; ++c) out.row(row(p, c, d)).segment(c * n, n) = m;
          break;
        case Structure::Matrix:
          for (int c = 0; c < 4; ++c) out.row(row(p, c, d)).segment(c * n, n) = m;
          break;
        case Structure::Sym:
          for (int j = 0; j < n; ++j) {
            out(row(p, 0, d), 3 * j) = m[j];
            out(row(p, 3, d), 3 * j + 1) = m[j];
            out(row(p, 1, d), 3 * j + 2) = m[j];
            out(row(p, 2, d), 3 * j + 2) = m[j];
          }
          break;
        case Structure::Isotropic:
          out.row(row(p, 0, d)) = m;
          out.row(row(p, 3, d)) = m;
          break;
        case Structure::Perp:
        case Structure::Gradient: break;
      }
    }

  if (structure_ == Structure::Perp) {
    if (deriv > 1) throw ConfigError("TensorBasis: second derivatives of perp members are not available");
    const Point& c0 = sb.center();
    const double h = sb.length_scale();
    const Matrix v = deriv == 0 ? s : sb.values(pts);
    for (std::size_t p = 0; p < np; ++p) {
      const Vec2 r = (pts[p] - c0) / h;
      if (deriv == 0) {
        out.row(row(p, 0, 0)) = r.y() * v.row(p);
        out.row(row(p, 1, 0)) = -r.x() * v.row(p);
      } else {
        // (r_y m, -r_x m) with d r / dx = I / h
        out.row(row(p, 0, 0)) = r.y() * s.row(2 * p);
        out.row(row(p, 0, 1)) = v.row(p) / h + r.y() * s.row(2 * p + 1);
        out.row(row(p, 1, 0)) = -v.row(p) / h - r.x() * s.row(2 * p);
        out.row(row(p, 1, 1)) = -r.x() * s.row(2 * p + 1);
      }
    }
  }
  return out;
}

}  // namespace vem
