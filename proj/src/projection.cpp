#include "vem/projection.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cstdio>

namespace vem {
namespace {

Matrix weighted_gram(const Matrix& table, int components, const Quadrature& q) {
  Matrix G = Matrix::Zero(table.cols(), table.cols());
  for (std::size_t p = 0; p < q.size(); ++p) {
    const auto block = table.middleRows(p * components, components);
    G += q.weights[p] * block.transpose() * block;
  }
  return G;
}

Matrix gram_solve(const Matrix& G, const Matrix& rhs) {
  Eigen::LLT<Matrix> llt(G);
  if (llt.info() != Eigen::Success) throw ConditioningError("projection Gram matrix is not positive definite");
  return llt.solve(rhs);
}

// Trace of Pi_s0 phi_k at points with given edge basis powers: rows
// p * nc + i for the value components i of the space.
Matrix edge_trace(const EdgeTuple& et, const Matrix& coeffs, const Matrix& powers, const Vec2& n, int nc) {
  Matrix out(powers.rows() * nc, coeffs.cols());
  const int d = et.value.degree + 1;
  for (Eigen::Index p = 0; p < powers.rows(); ++p)
    for (int i = 0; i < nc; ++i) {
      if (et.flux) out.row(p * nc + i) = n[i] * powers.row(p) * coeffs;
      else out.row(p * nc + i) = powers.row(p) * coeffs.middleRows(i * d, d);
    }
  return out;
}

}  // namespace

Matrix element_value_projection(const Matrix& atilde, const ConstraintSystem& cs) {
  const Matrix I = Matrix::Identity(atilde.rows(), atilde.rows());
  return solve_cls(atilde, I, cs.C, cs.D);
}

Matrix gradient_projection(const Mesh& mesh, const VemTuple& t, const ProjectionBlock& block) {
  const int e = t.element;
  const int N = t.num_dofs();
  const int nc = t.b0.components();
  const int nq = t.b1.components();
  if (nq != 2 * nc) throw ConfigError("gradient basis does not match the value rank");
  const int order = 2 * std::max(t.b0.order(), t.b1.order()) + 2;
  const Quadrature q = mesh.element_quadrature(e, order);
  const Matrix qv = t.b1.evaluate(q.points, 0);
  const Matrix qd = t.b1.evaluate(q.points, 1);
  const Matrix v0 = t.b0.evaluate(q.points, 0) * block.pi0;
  Matrix rhs = Matrix::Zero(t.b1.size(), N);
  for (std::size_t p = 0; p < q.size(); ++p)
    for (int i = 0; i < nc; ++i) {
      // (div q)_i = sum_j d_j q_ij
      Vector div = Vector::Zero(t.b1.size());
      for (int j = 0; j < 2; ++j) div += qd.row((p * nq + 2 * i + j) * 2 + j).transpose();
      rhs -= q.weights[p] * div * v0.row(p * nc + i);
    }
  for (const auto& et : t.edges) {
    const Quadrature eq = mesh.edge_quadrature(et.edge, order);
    const EdgeBasis eb(mesh, et.edge, et.value.degree);
    const Vec2 ng = mesh.edge_normal(et.edge);
    const Vec2 n = et.sign * ng;
    const Matrix trace = edge_trace(et, block.edge_value[et.local], eb.values(eq.points), ng, nc);
    const Matrix qe = t.b1.evaluate(eq.points, 0);
    for (std::size_t p = 0; p < eq.size(); ++p)
      for (int i = 0; i < nc; ++i) {
        const Vector qn = (qe.row(p * nq + 2 * i) * n.x() + qe.row(p * nq + 2 * i + 1) * n.y()).transpose();
        rhs += eq.weights[p] * qn * trace.row(p * nc + i);
      }
  }
  return gram_solve(weighted_gram(qv, nq, q), rhs);
}

Matrix hessian_projection(const Mesh& mesh, const VemTuple& t, const ProjectionBlock& block) {
  const int e = t.element;
  const int N = t.num_dofs();
  if (t.b0.components() != 1) throw ConfigError("hessian projection needs a scalar space");
  const int order = 2 * std::max({t.b0.order(), t.b1.order(), t.b2.order()}) + 2;
  const Quadrature q = mesh.element_quadrature(e, order);
  const Matrix qv = t.b2.evaluate(q.points, 0);
  const Matrix qd = t.b2.evaluate(q.points, 1);
  const Matrix g1 = t.b1.evaluate(q.points, 0) * block.pi1;
  Matrix rhs = Matrix::Zero(t.b2.size(), N);
  for (std::size_t p = 0; p < q.size(); ++p)
    for (int i = 0; i < 2; ++i) {
      Vector div = Vector::Zero(t.b2.size());
      for (int j = 0; j < 2; ++j) div += qd.row((p * 4 + 2 * i + j) * 2 + j).transpose();
      rhs -= q.weights[p] * div * g1.row(p * 2 + i);
    }
  for (const auto& et : t.edges) {
    const Quadrature eq = mesh.edge_quadrature(et.edge, order);
    const Vec2 ng = mesh.edge_normal(et.edge), tg = mesh.edge_tangent(et.edge);
    const Vec2 n = et.sign * ng;
    const EdgeBasis vb(mesh, et.edge, et.value.degree), nb(mesh, et.edge, et.normal.degree);
    const Matrix dt = vb.derivatives(eq.points) * block.edge_value[et.local];
    const Matrix dn = nb.values(eq.points) * block.edge_normal[et.local];
    const Matrix qe = t.b2.evaluate(eq.points, 0);
    for (std::size_t p = 0; p < eq.size(); ++p) {
      Vector nqn = Vector::Zero(t.b2.size()), tqn = Vector::Zero(t.b2.size());
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          nqn += ng[i] * n[j] * qe.row(p * 4 + 2 * i + j).transpose();
          tqn += tg[i] * n[j] * qe.row(p * 4 + 2 * i + j).transpose();
        }
      rhs += eq.weights[p] * (nqn * dn.row(p) + tqn * dt.row(p));
    }
  }
  return gram_solve(weighted_gram(qv, 4, q), rhs);
}

ProjectionBlock build_projections(const Mesh& mesh, const VemTuple& t) {
  ProjectionBlock b;
  b.atilde = dof_matrix(mesh, t);
  for (const auto& et : t.edges) {
    b.edge_value.push_back(solve_edge_cls(et.value));
    b.edge_normal.push_back(solve_edge_cls(et.normal));
  }
  b.constraints = constraint_matrix(mesh, t, b.atilde, b.edge_value, b.edge_normal);
  b.pi0 = element_value_projection(b.atilde, b.constraints);
  if (t.recipe.b1_order >= 0 && !t.edges.empty()) b.pi1 = gradient_projection(mesh, t, b);
  if (t.has_hessian()) b.pi2 = hessian_projection(mesh, t, b);
  return b;
}

Matrix evaluate_projected_basis(const VemTuple& t, const ProjectionBlock& block, int mu,
                                const std::vector<Point>& pts) {
  switch (mu) {
    case 0: return t.b0.evaluate(pts, 0) * block.pi0;
    case 1:
      if (block.pi1.size() == 0) throw ConfigError("no gradient projection for this space");
      return t.b1.evaluate(pts, 0) * block.pi1;
    case 2:
      if (!t.has_hessian()) throw ConfigError("hessian projection requested for a second order space");
      return t.b2.evaluate(pts, 0) * block.pi2;
    default: throw ConfigError("projection order must be 0, 1 or 2");
  }
}

Matrix reproduction_subspace(const Mesh& mesh, const VemTuple& t) {
  const int n0 = t.b0.size();
  switch (t.b0.structure()) {
    case Structure::Scalar: {
      const int k = poly_dim(std::min(t.b0.order(), t.recipe.degree));
      return Matrix::Identity(n0, k);
    }
    case Structure::Vector: {
      if (t.recipe.reduced_to < 0) return Matrix::Identity(n0, n0);
      // fields with constant divergence: kill the L2 projection of the
      // divergence onto the non-constant members of M_{l-1}
      const int e = t.element;
      const Quadrature q = mesh.element_quadrature(e, 2 * t.b0.order() + 2);
      const Matrix d = t.b0.evaluate(q.points, 1);
      const Matrix m = t.scalar->truncated(std::max(0, t.b0.order() - 1)).values(q.points);
      Matrix div(q.size(), n0);
      for (std::size_t p = 0; p < q.size(); ++p) div.row(p) = d.row((2 * p) * 2) + d.row((2 * p + 1) * 2 + 1);
      const Eigen::Map<const Vector> w(q.weights.data(), q.weights.size());
      const Matrix G = m.transpose() * w.asDiagonal() * m;
      const Matrix coef = G.ldlt().solve(m.transpose() * w.asDiagonal() * div);
      const Matrix nonconst = coef.bottomRows(coef.rows() - 1);
      Eigen::FullPivLU<Matrix> lu(nonconst);
      lu.setThreshold(1e-10);
      return lu.kernel();
    }
    default: return Matrix::Identity(n0, n0);
  }
}

ProjectionAudit audit_element(const Mesh& mesh, const VemTuple& t) {
  ProjectionAudit a;
  try {
    ProjectionBlock b;
    b.atilde = dof_matrix(mesh, t);
    for (const auto& et : t.edges) {
      b.edge_value.push_back(solve_edge_cls(et.value));
      b.edge_normal.push_back(solve_edge_cls(et.normal));
    }
    b.constraints = constraint_matrix(mesh, t, b.atilde, b.edge_value, b.edge_normal);
    a.ranks = check_solvability(b.atilde, b.constraints.C);
    if (!a.ranks.ok()) {
      a.error = "rank condition violated";
      return a;
    }
    b.pi0 = element_value_projection(b.atilde, b.constraints);
    if (b.constraints.C.rows() > 0)
      a.constraint_residual = (b.constraints.C * b.pi0 - b.constraints.D).cwiseAbs().maxCoeff();
    const Matrix Q = reproduction_subspace(mesh, t);
    if (Q.cols() > 0) a.reproduction_error = (b.pi0 * b.atilde * Q - Q).cwiseAbs().maxCoeff();
  } catch (const Error& ex) {
    a.error = ex.what();
  }
  return a;
}

std::string format_audit(int element, const ProjectionAudit& a) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "element %d: rank C %d/%d, rank [A;C] %d/%d, constraint residual %.2e, "
                "reproduction error %.2e%s%s", element, a.ranks.constraint_rank, a.ranks.constraints,
                a.ranks.stacked_rank, a.ranks.unknowns, a.constraint_residual, a.reproduction_error,
                a.error.empty() ? "" : ", ", a.error.c_str());
  return buf;
}

}  // namespace vem
