#include "vem/assembly.hpp"

#include <cmath>
#include <sstream>

namespace vem {
namespace {

using Triplet = Eigen::Triplet<double>;

struct LocalTerms {
  Matrix K;
  Vector r;
};

int default_order(const VemTuple& t) {
  const int top = std::max({t.recipe.b0_order, t.recipe.b1_order, t.recipe.b2_order, t.recipe.degree});
  return 2 * top + 2;
}

Vector gather(const Space& space, int e, const Vector& u) {
  const auto& l2g = space.local_to_global(e);
  Vector loc(l2g.size());
  for (std::size_t i = 0; i < l2g.size(); ++i) loc[i] = u.size() ? u[l2g[i]] : 0.0;
  return loc;
}

double eval(const std::function<double(const Point&, double)>& f, const Point& x, double ubar) {
  return f ? f(x, ubar) : 0.0;
}

LocalTerms element_terms(const Space& space, int e, const CoefficientForm& form, const Vector& uloc,
                         bool need_matrix) {
  const Mesh& mesh = space.mesh();
  const VemTuple& t = space.tuple(e);
  const ProjectionBlock& b = space.block(e);
  const int N = t.num_dofs();
  const int nc = space.components();
  const Quadrature q = mesh.element_quadrature(e, form.quad_order > 0 ? form.quad_order : default_order(t));
  const Matrix P0 = t.b0.evaluate(q.points, 0) * b.pi0;
  const bool grad = form.flux || form.source;
  const bool hess = static_cast<bool>(form.hessian_flux);
  Matrix P1, P2;
  if (grad && b.pi1.size()) P1 = t.b1.evaluate(q.points, 0) * b.pi1;
  if (form.flux && P1.size() == 0) throw ConfigError("flux term needs a gradient projection");
  if (hess) {
    if (!t.has_hessian()) throw ConfigError("hessian term on a second order space");
    P2 = t.b2.evaluate(q.points, 0) * b.pi2;
  }
  if (need_matrix && ((form.flux && !form.flux_derivative) || (form.source && !form.source_derivative) ||
                      (hess && !form.hessian_derivative)))
    throw ConfigError("matrix assembly needs derivative callbacks for every term");

  LocalTerms out;
  out.r = Vector::Zero(N);
  if (need_matrix) out.K = Matrix::Zero(N, N);
  PointState st;
  Matrix du, ddu;
  for (std::size_t p = 0; p < q.size(); ++p) {
    const double w = q.weights[p];
    const auto p0 = P0.middleRows(p * nc, nc);
    st.x = q.points[p];
    st.u = p0 * uloc;
    if (P1.size()) st.du = P1.middleRows(p * nc * 2, nc * 2) * uloc;
    if (P2.size()) st.d2u = P2.middleRows(p * 4, 4) * uloc;
    if (form.flux) {
      const auto p1 = P1.middleRows(p * nc * 2, nc * 2);
      out.r += w * p1.transpose() * form.flux(st);
      if (need_matrix) {
        form.flux_derivative(st, du, ddu);
        out.K += w * p1.transpose() * (du * p0 + ddu * p1);
      }
    }
    if (form.source) {
      out.r += w * p0.transpose() * form.source(st);
      if (need_matrix) {
        form.source_derivative(st, du, ddu);
        Matrix lin = du * p0;
        if (ddu.size() && P1.size()) lin += ddu * P1.middleRows(p * nc * 2, nc * 2);
        out.K += w * p0.transpose() * lin;
      }
    }
    if (hess) {
      const auto p2 = P2.middleRows(p * 4, 4);
      out.r += w * p2.transpose() * form.hessian_flux(st);
      if (need_matrix) out.K += w * p2.transpose() * form.hessian_derivative(st) * p2;
    }
  }

  if (form.stabilization != 0.0) {
    const Matrix S = stabilization_matrix(b);
    // element mean of the first component of Pi0 u
    Vector gbar = Vector::Zero(N);
    for (std::size_t p = 0; p < q.size(); ++p) gbar += q.weights[p] * P0.row(p * nc).transpose();
    gbar /= mesh.area(e);
    const double ubar = gbar.dot(uloc);
    const Point& xe = mesh.barycenter(e);
    const double h = mesh.diameter(e);
    double c = 0.0, dc = 0.0;
    if (space.fourth_order()) {
      const double hp = std::pow(h, form.fourth_order_power);
      c = eval(form.hessian_stab.value, xe, ubar) * hp;
      dc = eval(form.hessian_stab.derivative, xe, ubar) * hp;
    } else {
      c = eval(form.grad_stab.value, xe, ubar) + eval(form.mass_stab.value, xe, ubar) * h * h;
      dc = eval(form.grad_stab.derivative, xe, ubar) + eval(form.mass_stab.derivative, xe, ubar) * h * h;
    }
    c *= form.stabilization;
    dc *= form.stabilization;
    const Vector Su = S * uloc;
    out.r += c * Su;
    if (need_matrix) out.K += c * S + dc * Su * gbar.transpose();
  }
  return out;
}

}  // namespace

AssemblyResult element_operator(const Space& space, int e, const CoefficientForm& form, const Vector& local_state) {
  LocalTerms t = element_terms(space, e, form, local_state, true);
  AssemblyResult out;
  out.local = std::move(t.K);
  out.residual = std::move(t.r);
  return out;
}

Matrix stabilization_matrix(const ProjectionBlock& block) {
  const Matrix R = Matrix::Identity(block.atilde.rows(), block.atilde.rows()) - block.atilde * block.pi0;
  return R.transpose() * R;
}

AssemblyResult assemble_operator(const Space& space, const CoefficientForm& form, const Vector& state,
                                 bool need_matrix, int threads) {
  const int ne = space.num_elements();
  if (state.size() && state.size() != space.size()) throw ConfigError("state vector has the wrong size");
  std::vector<LocalTerms> local(ne);
  parallel_for(ne, threads, [&](int e) { local[e] = element_terms(space, e, form, gather(space, e, state), need_matrix); });
  AssemblyResult out;
  out.residual = Vector::Zero(space.size());
  std::vector<Triplet> trip;
  for (int e = 0; e < ne; ++e) {
    const auto& l2g = space.local_to_global(e);
    const int n = static_cast<int>(l2g.size());
    for (int i = 0; i < n; ++i) {
      out.residual[l2g[i]] += local[e].r[i];
      if (need_matrix)
        for (int j = 0; j < n; ++j)
          if (local[e].K(i, j) != 0.0) trip.emplace_back(l2g[i], l2g[j], local[e].K(i, j));
    }
  }
  if (need_matrix) {
    out.matrix.resize(space.size(), space.size());
    out.matrix.setFromTriplets(trip.begin(), trip.end());
  }
  return out;
}

Vector assemble_functional(const Space& space, const ValueFn& f, int quad_order) {
  Vector out = Vector::Zero(space.size());
  const Mesh& mesh = space.mesh();
  const int nc = space.components();
  for (int e = 0; e < space.num_elements(); ++e) {
    const VemTuple& t = space.tuple(e);
    const Quadrature q = mesh.element_quadrature(e, quad_order > 0 ? quad_order : default_order(t));
    const Matrix P0 = t.b0.evaluate(q.points, 0) * space.block(e).pi0;
    Vector loc = Vector::Zero(t.num_dofs());
    for (std::size_t p = 0; p < q.size(); ++p)
      loc += q.weights[p] * P0.middleRows(p * nc, nc).transpose() * f(q.points[p]);
    const auto& l2g = space.local_to_global(e);
    for (int i = 0; i < loc.size(); ++i) out[l2g[i]] += loc[i];
  }
  return out;
}

void assemble_boundary(const Space& space, double alpha, const ValueFn& g, SparseMatrix& matrix, Vector& rhs,
                       const std::function<bool(int)>& on) {
  if (space.fourth_order()) throw ConfigError("boundary terms on fourth order spaces are restricted to homogeneous data");
  const Mesh& mesh = space.mesh();
  const int nc = space.components();
  std::vector<Triplet> trip;
  for (int s = 0; s < static_cast<int>(mesh.num_edges()); ++s) {
    const Edge& ed = mesh.edge(s);
    if (!ed.boundary || (on && !on(s))) continue;
    const int e = ed.elements[0];
    const VemTuple& t = space.tuple(e);
    const EdgeTuple* et = nullptr;
    for (const auto& x : t.edges)
      if (x.edge == s) et = &x;
    if (!et) throw ConfigError("space has no edge projection for boundary terms");
    const Matrix& coeffs = space.block(e).edge_value[et->local];
    const int d = et->value.degree + 1;
    const Quadrature q = mesh.edge_quadrature(s, 2 * t.recipe.degree + 2);
    const Matrix pw = EdgeBasis(mesh, s, et->value.degree).values(q.points);
    const Vec2 n = mesh.edge_normal(s);
    const int N = t.num_dofs();
    Matrix K = Matrix::Zero(N, N);
    Vector r = Vector::Zero(N);
    for (std::size_t p = 0; p < q.size(); ++p) {
      Matrix T(nc, N);
      for (int c = 0; c < nc; ++c)
        T.row(c) = et->flux ? Matrix(n[c] * pw.row(p) * coeffs) : Matrix(pw.row(p) * coeffs.middleRows(c * d, d));
      K += q.weights[p] * alpha * T.transpose() * T;
      if (g) r += q.weights[p] * T.transpose() * g(q.points[p]);
    }
    const auto& l2g = space.local_to_global(e);
    for (int i = 0; i < N; ++i) {
      rhs[l2g[i]] += r[i];
      for (int j = 0; j < N; ++j)
        if (K(i, j) != 0.0) trip.emplace_back(l2g[i], l2g[j], K(i, j));
    }
  }
  if (alpha != 0.0) {
    SparseMatrix add(matrix.rows(), matrix.cols());
    add.setFromTriplets(trip.begin(), trip.end());
    matrix += add;
  }
}

void apply_dirichlet(SparseMatrix& A, Vector& b, const std::vector<int>& dofs, const Vector& values) {
  std::vector<char> fixed(A.rows(), 0);
  Vector full = Vector::Zero(A.rows());
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    fixed[dofs[i]] = 1;
    full[dofs[i]] = values[i];
  }
  const Vector shift = A * full;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    if (!fixed[i]) b[i] -= shift[i];
  for (Eigen::Index r = 0; r < A.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(A, r); it; ++it)
      if (fixed[it.row()] || fixed[it.col()]) it.valueRef() = 0.0;
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    A.coeffRef(dofs[i], dofs[i]) = 1.0;
    b[dofs[i]] = values[i];
  }
  A.prune(0.0);
}

Vector dirichlet_values(const Space& space, const std::vector<int>& dofs, const ValueFn& g, const GradientFn& dg) {
  const Vector all = space.interpolate(g, dg);
  Vector out(dofs.size());
  for (std::size_t i = 0; i < dofs.size(); ++i) out[i] = all[dofs[i]];
  return out;
}

ErrorNorms compute_error(const Space& space, const Vector& u, const ValueFn& value, const GradientFn& gradient,
                         const HessianFn& hessian, int quad_order) {
  const Mesh& mesh = space.mesh();
  const int nc = space.components();
  ErrorNorms err;
  for (int e = 0; e < space.num_elements(); ++e) {
    const VemTuple& t = space.tuple(e);
    const ProjectionBlock& b = space.block(e);
    const Quadrature q = mesh.element_quadrature(e, quad_order > 0 ? quad_order : default_order(t) + 2);
    const Vector loc = gather(space, e, u);
    const Vector v0 = t.b0.evaluate(q.points, 0) * (b.pi0 * loc);
    Vector v1, v2;
    if (gradient && b.pi1.size()) v1 = t.b1.evaluate(q.points, 0) * (b.pi1 * loc);
    if (hessian && t.has_hessian()) v2 = t.b2.evaluate(q.points, 0) * (b.pi2 * loc);
    for (std::size_t p = 0; p < q.size(); ++p) {
      const double w = q.weights[p];
      const Point& x = q.points[p];
      err.l2 += w * (v0.segment(p * nc, nc) - value(x)).squaredNorm();
      if (v1.size()) {
        const Matrix g = gradient(x);
        for (int c = 0; c < nc; ++c)
          for (int d = 0; d < 2; ++d) err.h1 += w * std::pow(v1[(p * nc + c) * 2 + d] - g(c, d), 2);
      }
      if (v2.size()) {
        const Matrix h = hessian(x);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) err.h2 += w * std::pow(v2[p * 4 + 2 * i + j] - h(i, j), 2);
      }
    }
  }
  err.l2 = std::sqrt(err.l2);
  err.h1 = std::sqrt(err.h1);
  err.h2 = std::sqrt(err.h2);
  return err;
}

SparseMatrix assemble_divergence(const Space& vs, const Space& ps, int threads) {
  if (vs.components() != 2 || ps.components() != 1) throw ConfigError("divergence coupling needs a vector and a scalar space");
  if (&vs.mesh() != &ps.mesh()) throw ConfigError("divergence coupling needs both spaces on one mesh");
  const Mesh& mesh = vs.mesh();
  const int ne = vs.num_elements();
  std::vector<Matrix> local(ne);
  parallel_for(ne, threads, [&](int e) {
    const VemTuple& tv = vs.tuple(e);
    const VemTuple& tp = ps.tuple(e);
    const Quadrature q = mesh.element_quadrature(e, default_order(tv) + tp.recipe.b0_order);
    const Matrix P1 = tv.b1.evaluate(q.points, 0) * vs.block(e).pi1;
    const Matrix Q0 = tp.b0.evaluate(q.points, 0) * ps.block(e).pi0;
    Matrix B = Matrix::Zero(tp.num_dofs(), tv.num_dofs());
    for (std::size_t p = 0; p < q.size(); ++p)
      B += q.weights[p] * Q0.row(p).transpose() * (P1.row(4 * p) + P1.row(4 * p + 3));
    local[e] = std::move(B);
  });
  std::vector<Triplet> trip;
  for (int e = 0; e < ne; ++e) {
    const auto& rows = ps.local_to_global(e);
    const auto& cols = vs.local_to_global(e);
    for (Eigen::Index i = 0; i < local[e].rows(); ++i)
      for (Eigen::Index j = 0; j < local[e].cols(); ++j)
        if (local[e](i, j) != 0.0) trip.emplace_back(rows[i], cols[j], local[e](i, j));
  }
  SparseMatrix B(ps.size(), vs.size());
  B.setFromTriplets(trip.begin(), trip.end());
  return B;
}

std::string format_coordinates(const SparseMatrix& m) {
  std::ostringstream os;
  os.precision(17);
  for (Eigen::Index r = 0; r < m.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
  return os.str();
}

}  // namespace vem
