#pragma once

#include "vem/spaces.hpp"

#include <Eigen/Sparse>

#include <functional>

namespace vem {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Projected state at a quadrature point: u has nc entries, du holds
/// d_d u_c at c * 2 + d and d2u the hessian (scalar spaces) at 2i + j.
struct PointState {
  Point x;
  Vector u, du, d2u;
};

/// Stabilization coefficient evaluated at the element barycenter and the
/// mean of the projected state; the derivative is only needed for Newton.
struct StabCoefficient {
  std::function<double(const Point&, double ubar)> value;
  std::function<double(const Point&, double ubar)> derivative;
  static StabCoefficient constant(double c) {
    return {[c](const Point&, double) { return c; }, [](const Point&, double) { return 0.0; }};
  }
};

/// a^E(v, w) = int D(v, grad v) . grad w + m(v, grad v) w + K(hess v) : hess w
/// with projected arguments, plus (Dbar + mbar h^2) S^E on second order
/// spaces and Kbar h^p S^E on fourth order spaces.
struct CoefficientForm {
  std::function<Vector(const PointState&)> flux;    // nc * 2
  std::function<Vector(const PointState&)> source;  // nc
  std::function<Vector(const PointState&)> hessian_flux;  // 4
  // derivatives for Newton: (nc*2 x nc, nc*2 x nc*2), (nc x nc, nc x nc*2), 4 x 4
  std::function<void(const PointState&, Matrix& d_u, Matrix& d_du)> flux_derivative;
  std::function<void(const PointState&, Matrix& d_u, Matrix& d_du)> source_derivative;
  std::function<Matrix(const PointState&)> hessian_derivative;

  StabCoefficient grad_stab, mass_stab, hessian_stab;
  double stabilization = 1.0;     // global factor; 0 disables S^E
  double fourth_order_power = -2.0;  // exponent p of h_E in Kbar h^p
  int quad_order = -1;            // default 2 * order + 2
};

struct AssemblyResult {
  SparseMatrix matrix;  // Jacobian (the operator for linear forms)
  Vector residual;      // a(u, phi_k) for the given state
  Matrix local;         // element_operator only: dense local Jacobian
};

/// Residual and Jacobian at `state` (zero when empty). For linear forms the
/// Jacobian is the operator matrix.
AssemblyResult assemble_operator(const Space& space, const CoefficientForm& form, const Vector& state = {},
                                 bool need_matrix = true, int threads = 0);

/// Local Jacobian and residual of element e at the local state.
AssemblyResult element_operator(const Space& space, int e, const CoefficientForm& form, const Vector& local_state);

/// S^E = R^T R with R = I - A Pi0.
Matrix stabilization_matrix(const ProjectionBlock& block);

/// b_k = int f . Pi0 phi_k.
Vector assemble_functional(const Space& space, const ValueFn& f, int quad_order = -1);

/// Robin/Neumann terms int_s (alpha Pi_s v - g) Pi_s w on boundary edges
/// accepted by the predicate: alpha part into the matrix, g part into rhs.
void assemble_boundary(const Space& space, double alpha, const ValueFn& g, SparseMatrix& matrix, Vector& rhs,
                       const std::function<bool(int edge)>& on = {});

/// Symmetric elimination of the given dofs with prescribed values.
void apply_dirichlet(SparseMatrix& matrix, Vector& rhs, const std::vector<int>& dofs, const Vector& values);
/// Values of the interpolant of g on the boundary dofs.
Vector dirichlet_values(const Space& space, const std::vector<int>& dofs, const ValueFn& g,
                        const GradientFn& dg = {});

using HessianFn = std::function<Matrix(const Point&)>;  // 2 x 2, scalar spaces

struct ErrorNorms {
  double l2 = 0.0, h1 = 0.0, h2 = 0.0;
};

/// Norms of Pi_mu u_h - D^mu u through the projections.
ErrorNorms compute_error(const Space& space, const Vector& u, const ValueFn& value, const GradientFn& gradient = {},
                         const HessianFn& hessian = {}, int quad_order = -1);

/// B(j, k) = int tr(Pi1 phi_k) Pi0 psi_j for a vector space phi and a
/// scalar space psi on the same mesh.
SparseMatrix assemble_divergence(const Space& vector_space, const Space& scalar_space, int threads = 0);

/// Coordinate text dump "row col value" for debugging.
std::string format_coordinates(const SparseMatrix& m);

}  // namespace vem
