#pragma once

#include "vem/mesh.hpp"
#include "vem/types.hpp"

#include <memory>
#include <vector>

namespace vem {

inline int poly_dim(int order) { return order < 0 ? 0 : (order + 1) * (order + 2) / 2; }

enum class Scaling {
  BoundingBox,  // tensor Legendre polynomials in the minimal bounding box frame
  Isotropic     // plain monomials ((x - x_E) / h_E)^alpha
};

/// Hierarchical polynomial basis of P_order on an element. Member i is
/// sum_j T(i, j) xi^{a_j} eta^{b_j} in local coordinates xi = J (x - c), with
/// T lower triangular in the graded ordering (degree, then x exponent
/// descending).
class ScalarBasis {
public:
  ScalarBasis() = default;
  ScalarBasis(const Mesh& mesh, int e, int order, Scaling scaling = Scaling::BoundingBox);
  ScalarBasis(const Point& center, const Mat2& jacobian, double length_scale, int order);

  int order() const { return order_; }
  int size() const { return poly_dim(order_); }
  const Point& center() const { return center_; }
  /// Local coordinates are xi = jacobian * (x - center).
  const Mat2& jacobian() const { return jacobian_; }
  double length_scale() const { return length_scale_; }
  const Matrix& coefficients() const { return coeffs_; }
  bool orthonormal() const { return orthonormal_; }

  /// Modified Gram-Schmidt with one reorthogonalization pass in L2(E)
  /// using the given rule. Throws ConditioningError on dependent members.
  void orthonormalize(const Quadrature& quad);
  ScalarBasis truncated(int order) const;

  // Tables with one row per point and one column per member.
  Matrix values(const std::vector<Point>& pts) const;
  /// Row 2p + d holds the derivative in direction d at point p.
  Matrix gradients(const std::vector<Point>& pts) const;
  /// Row 4p + 2i + j holds the (i, j) second derivative at point p.
  Matrix hessians(const std::vector<Point>& pts) const;

  Vector values(const Point& x) const;

private:
  // raw monomials and derivatives in local coordinates, (member) x (deriv)
  void raw(const Point& x, int deriv, Eigen::Ref<Matrix> out) const;

  int order_ = 0;
  Point center_ = Point::Zero();
  Mat2 jacobian_ = Mat2::Identity();
  double length_scale_ = 1.0;
  Matrix coeffs_;
  bool orthonormal_ = false;
};

/// Gram matrix of a scalar basis.
Matrix gram_matrix(const ScalarBasis& basis, const Quadrature& quad);

/// Polynomial basis on an edge in tau = 2 (x - mid) . t / |s| in [-1, 1],
/// with t pointing from the lower to the higher global vertex index.
class EdgeBasis {
public:
  EdgeBasis() = default;
  EdgeBasis(const Point& a, const Point& b, int order);
  EdgeBasis(const Mesh& mesh, int s, int order);

  int order() const { return order_; }
  int size() const { return order_ + 1; }
  double length() const { return length_; }
  const Vec2& tangent() const { return tangent_; }
  double tau(const Point& x) const;

  /// Row per point, column per member tau^k.
  Matrix values(const std::vector<Point>& pts) const;
  /// Arclength derivative along the tangent.
  Matrix derivatives(const std::vector<Point>& pts) const;
  Vector values_at_tau(double tau) const;
  Vector derivatives_at_tau(double tau) const;

private:
  int order_ = 0;
  Point mid_ = Point::Zero();
  Vec2 tangent_ = Vec2::UnitX();
  double length_ = 1.0;
};

enum class Structure {
  Scalar,     // M
  Vector,     // [M]^2, component major
  Matrix,     // [M]^{2x2}, component (i, j) -> 2i + j, component major
  Sym,        // sym([M]^{2x2}): e11 m, e22 m, (e12 + e21) m per m
  Gradient,   // grad M without the constant member
  Isotropic,  // m I
  Perp        // ((x - x_E) / h_E)^perp m
};

/// Scalar, vector or matrix valued polynomial family built from the first
/// poly_dim(order) members of a scalar basis.
class TensorBasis {
public:
  TensorBasis() = default;
  TensorBasis(std::shared_ptr<const ScalarBasis> scalar, Structure structure, int order);

  Structure structure() const { return structure_; }
  int order() const { return order_; }
  int size() const { return size_; }
  /// Number of value components: 1, 2 or 4.
  int components() const { return components_; }
  const ScalarBasis& scalar() const { return *scalar_; }

  /// deriv 0: rows p * nc + c. deriv 1: rows (p * nc + c) * 2 + d.
  /// deriv 2: rows (p * nc + c) * 4 + 2i + j. Columns are members.
  Matrix evaluate(const std::vector<Point>& pts, int deriv) const;

private:
  std::shared_ptr<const ScalarBasis> scalar_;
  Structure structure_ = Structure::Scalar;
  int order_ = 0;
  int size_ = 0;
  int components_ = 1;
};

int structure_components(Structure s);
int structure_size(Structure s, int order);

}  // namespace vem
