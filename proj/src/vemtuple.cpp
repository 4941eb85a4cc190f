#include "vem/vemtuple.hpp"

#include <algorithm>
#include <cmath>

namespace vem {
namespace {

// 1/2 int_{-1}^{1} tau^p
double half_moment(int p) { return p % 2 == 0 ? 1.0 / (p + 1) : 0.0; }

struct EdgeRows {
  std::vector<Vector> a, b;
  std::vector<int> constraints;
  void add(Vector ra, Vector rb, bool constraint) {
    if (constraint) constraints.push_back(static_cast<int>(a.size()));
    a.push_back(std::move(ra));
    b.push_back(std::move(rb));
  }
  EdgeCls finish(int components) const {
    EdgeCls cls;
    cls.components = components;
    const int rows = static_cast<int>(a.size());
    if (rows == 0 || rows % components != 0) return cls;
    cls.degree = rows / components - 1;
    cls.A.resize(rows, a[0].size());
    cls.B.resize(rows, b[0].size());
    for (int r = 0; r < rows; ++r) {
      cls.A.row(r) = a[r].transpose();
      cls.B.row(r) = b[r].transpose();
    }
    cls.constraints = constraints;
    return cls;
  }
};

// Functionals on an edge polynomial space with `components` components of
// degree `degree`; member (c, j) has index c * (degree + 1) + j.
struct EdgeFunctionals {
  int degree, components;
  double length;
  int size() const { return components * (degree + 1); }
  Vector point(int c, double tau) const {
    Vector r = Vector::Zero(size());
    for (int j = 0; j <= degree; ++j) r[c * (degree + 1) + j] = std::pow(tau, j);
    return r;
  }
  Vector derivative(int c, double tau) const {
    Vector r = Vector::Zero(size());
    for (int j = 1; j <= degree; ++j) r[c * (degree + 1) + j] = j * std::pow(tau, j - 1) * 2.0 / length;
    return r;
  }
  // 1/|s| int_s p_c tau^k
  Vector moment(int c, int k) const {
    Vector r = Vector::Zero(size());
    for (int j = 0; j <= degree; ++j) r[c * (degree + 1) + j] = half_moment(j + k);
    return r;
  }
};

// number of rows per component of the edge value and normal problems
int value_conditions(const DofLayout& l) {
  if (l.edge_flux_order >= 0) return l.edge_flux_order + 1;
  int n = l.edge_order + 1;
  if (l.vertex_order >= 0) n += 2;
  if (l.vertex_order >= 1) n += 2;
  return n;
}

int normal_conditions(const DofLayout& l) {
  if (l.edge_normal_order < 0 && l.vertex_order < 1) return 0;
  return (l.edge_normal_order + 1) + (l.vertex_order >= 1 ? 2 : 0);
}

EdgeTuple build_edge(const Mesh& mesh, int e, int local, int s, const ElementDofs& dofs) {
  const DofLayout& l = dofs.layout();
  const int N = dofs.size();
  const int nc = l.components;
  const Edge& edge = mesh.edge(s);
  const double len = mesh.edge_length(s);
  const Vec2 t = mesh.edge_tangent(s), n = mesh.edge_normal(s);
  EdgeTuple et;
  et.edge = s;
  et.local = local;
  et.sign = mesh.edge_sign(e, s);
  et.flux = l.edge_flux_order >= 0;

  auto unit = [&](EntityType type, int entity, int slot) {
    const int i = dofs.find(type, entity, slot);
    if (i < 0) throw ConfigError("edge functional is not computable from the element dofs");
    Vector r = Vector::Zero(N);
    r[i] = 1.0;
    return r;
  };
  // directional derivative at a vertex from the scaled gradient dofs
  auto directional = [&](int v, int c, const Vec2& dir) {
    const double hv = mesh.vertex_length_scale(v);
    return Vector(unit(EntityType::Vertex, v, nc + 2 * c) * dir.x() / hv +
                  unit(EntityType::Vertex, v, nc + 2 * c + 1) * dir.y() / hv);
  };
  const double ends[2] = {-1.0, 1.0};

  {
    const int per = value_conditions(l);
    const int ncomp = et.flux ? 1 : nc;
    EdgeFunctionals f{per - 1, ncomp, len};
    EdgeRows rows;
    if (per > 0) {
      if (et.flux) {
        const int offset = nc * (l.edge_order + 1) + (l.edge_normal_order + 1);
        for (int k = 0; k <= l.edge_flux_order; ++k)
          rows.add(f.moment(0, k), unit(EntityType::Edge, s, offset + k), true);
      } else {
        for (int c = 0; c < nc; ++c) {
          if (l.vertex_order >= 0)
            for (int end = 0; end < 2; ++end)
              rows.add(f.point(c, ends[end]), unit(EntityType::Vertex, edge.vertices[end], c), false);
          if (l.vertex_order >= 1)
            for (int end = 0; end < 2; ++end)
              rows.add(f.derivative(c, ends[end]), directional(edge.vertices[end], c, t), false);
          for (int k = 0; k <= l.edge_order; ++k)
            rows.add(f.moment(c, k), unit(EntityType::Edge, s, c * (l.edge_order + 1) + k), true);
        }
      }
    }
    et.value = rows.finish(ncomp);
  }
  {
    const int per = normal_conditions(l);
    EdgeFunctionals f{per - 1, 1, len};
    EdgeRows rows;
    if (per > 0) {
      if (l.vertex_order >= 1)
        for (int end = 0; end < 2; ++end)
          rows.add(f.point(0, ends[end]), directional(edge.vertices[end], 0, n), false);
      const int offset = nc * (l.edge_order + 1);
      for (int k = 0; k <= l.edge_normal_order; ++k)
        rows.add(Vector(f.moment(0, k) * len), unit(EntityType::Edge, s, offset + k), true);
    }
    et.normal = rows.finish(1);
  }
  return et;
}

// Edge trace coefficients -> values at edge quadrature points of the
// scalar trace v . n_s (value edges) or v . n_s directly (flux edges).
Matrix normal_trace(const EdgeTuple& et, const Matrix& coeffs, const Matrix& powers, const Vec2& n) {
  const int d = et.value.degree + 1;
  if (et.flux) return powers * coeffs;
  Matrix out = Matrix::Zero(powers.rows(), coeffs.cols());
  for (int c = 0; c < et.value.components; ++c) out += n[c] * (powers * coeffs.middleRows(c * d, d));
  return out;
}

}  // namespace

VemTuple build_tuple(const Mesh& mesh, int e, const TupleRecipe& r) {
  VemTuple t;
  t.element = e;
  t.recipe = r;
  const DofLayout& l = r.layout;
  const int order = std::max({r.b0_order, r.b1_order, r.b2_order, l.inner_order, l.inner_perp_order,
                              l.inner_grad_order, l.coefficient_order, r.reduced_to, 0});
  t.scalar = std::make_shared<ScalarBasis>(mesh, e, order, r.scaling);
  if (r.orthonormalize) t.scalar->orthonormalize(mesh.element_quadrature(e, 2 * order + 2));
  t.b0 = TensorBasis(t.scalar, r.b0_structure, r.b0_order);
  t.b1 = TensorBasis(t.scalar, r.b1_structure, r.b1_order);
  if (r.b2_order >= 0) t.b2 = TensorBasis(t.scalar, r.b2_structure, r.b2_order);
  t.dofs = ElementDofs(mesh, e, l, *t.scalar, r.quad_order);
  const auto& edges = t.dofs.ordering().edges;
  for (std::size_t i = 0; i < edges.size(); ++i)
    t.edges.push_back(build_edge(mesh, e, static_cast<int>(i), edges[i], t.dofs));
  for (int i = 0; i < t.dofs.size(); ++i)
    if (t.dofs.descriptor(i).entity_type == EntityType::Element) t.constrained_dofs.push_back(i);
  return t;
}

Matrix sample_tensor_basis_dofs(const VemTuple& t, const TensorBasis& basis) {
  const auto& pts = t.dofs.points();
  const Matrix values = basis.evaluate(pts, 0);
  const Matrix grads = t.dofs.needs_gradient() ? basis.evaluate(pts, 1) : Matrix();
  return t.dofs.apply(values, grads);
}

Matrix dof_matrix(const Mesh&, const VemTuple& t) { return sample_tensor_basis_dofs(t, t.b0); }

Matrix solve_edge_cls(const EdgeCls& cls) {
  if (cls.degree < 0) return Matrix();
  Matrix C(cls.constraints.size(), cls.A.cols()), D(cls.constraints.size(), cls.B.cols());
  for (std::size_t i = 0; i < cls.constraints.size(); ++i) {
    C.row(i) = cls.A.row(cls.constraints[i]);
    D.row(i) = cls.B.row(cls.constraints[i]);
  }
  return solve_cls(cls.A, cls.B, C, D);
}

ConstraintSystem constraint_matrix(const Mesh& mesh, const VemTuple& t) {
  std::vector<Matrix> values, normals;
  for (const auto& et : t.edges) {
    values.push_back(solve_edge_cls(et.value));
    normals.push_back(solve_edge_cls(et.normal));
  }
  return constraint_matrix(mesh, t, dof_matrix(mesh, t), values, normals);
}

ConstraintSystem constraint_matrix(const Mesh& mesh, const VemTuple& t, const Matrix& atilde,
                                   const std::vector<Matrix>& edge_values, const std::vector<Matrix>& edge_normals) {
  const TupleRecipe& r = t.recipe;
  const int N = t.num_dofs();
  const int n0 = t.b0.size();
  const int e = t.element;
  std::vector<Vector> crows, drows;

  for (int i : t.constrained_dofs) {
    crows.push_back(atilde.row(i).transpose());
    Vector d = Vector::Zero(N);
    d[i] = 1.0;
    drows.push_back(d);
  }

  const int qorder = 2 * std::max(r.b0_order, r.reduced_to) + 2;
  if (r.reduced_to >= 0) {
    if (!t.scalar->orthonormal()) throw ConfigError("boundary reduced constraints need an orthonormal basis");
    const double factor = std::sqrt(mesh.area(e)) / mesh.diameter(e);
    const Quadrature q = mesh.element_quadrature(e, qorder);
    const Matrix b0v = t.b0.evaluate(q.points, 0);
    const Matrix mg = t.scalar->gradients(q.points);
    const int first = std::max(1, poly_dim(r.reduced_from));
    for (int j = first; j < poly_dim(r.reduced_to); ++j) {
      Vector c = Vector::Zero(n0);
      for (std::size_t p = 0; p < q.size(); ++p)
        c += q.weights[p] * (mg(2 * p, j) * b0v.row(2 * p) + mg(2 * p + 1, j) * b0v.row(2 * p + 1)).transpose();
      Vector d = Vector::Zero(N);
      for (const auto& et : t.edges) {
        const Quadrature eq = mesh.edge_quadrature(et.edge, qorder);
        const EdgeBasis eb(mesh, et.edge, et.value.degree);
        const Matrix trace = normal_trace(et, edge_values[et.local], eb.values(eq.points), mesh.edge_normal(et.edge));
        const Matrix m = t.scalar->values(eq.points);
        for (std::size_t p = 0; p < eq.size(); ++p) d += et.sign * eq.weights[p] * m(p, j) * trace.row(p).transpose();
      }
      crows.push_back(factor * c);
      drows.push_back(factor * d);
    }
  }

  if (r.laplace_mean) {
    const Quadrature q = mesh.element_quadrature(e, qorder);
    const Matrix h = t.b0.evaluate(q.points, 2);
    Vector c = Vector::Zero(n0);
    for (std::size_t p = 0; p < q.size(); ++p) c += q.weights[p] * (h.row(4 * p) + h.row(4 * p + 3)).transpose();
    Vector d = Vector::Zero(N);
    for (const auto& et : t.edges) {
      const Quadrature eq = mesh.edge_quadrature(et.edge, qorder);
      const EdgeBasis eb(mesh, et.edge, et.normal.degree);
      const Matrix vals = eb.values(eq.points) * edge_normals[et.local];
      for (std::size_t p = 0; p < eq.size(); ++p) d += et.sign * eq.weights[p] * vals.row(p).transpose();
    }
    crows.push_back(c);
    drows.push_back(d);
  }

  ConstraintSystem cs;
  cs.C.resize(crows.size(), n0);
  cs.D.resize(drows.size(), N);
  for (std::size_t i = 0; i < crows.size(); ++i) {
    cs.C.row(i) = crows[i].transpose();
    cs.D.row(i) = drows[i].transpose();
  }
  return cs;
}

SolvabilityReport check_solvability(const Mesh& mesh, const VemTuple& t) {
  const Matrix A = dof_matrix(mesh, t);
  return check_solvability(A, constraint_matrix(mesh, t).C);
}

}  // namespace vem
