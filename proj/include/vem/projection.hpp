#pragma once

#include "vem/vemtuple.hpp"

#include <string>
#include <vector>

namespace vem {

/// All projection matrices of one element. Columns always run over the
/// local basis functions phi_k (one per local dof).
struct ProjectionBlock {
  Matrix atilde;  // dofs x |B0|
  ConstraintSystem constraints;
  Matrix pi0;  // |B0| x N
  Matrix pi1;  // |B1| x N
  Matrix pi2;  // |B2| x N, empty for second order spaces
  std::vector<Matrix> edge_value;   // per local edge: edge basis x N
  std::vector<Matrix> edge_normal;  // per local edge: normal derivative along n_s
};

Matrix element_value_projection(const Matrix& atilde, const ConstraintSystem& cs);
Matrix gradient_projection(const Mesh& mesh, const VemTuple& t, const ProjectionBlock& block);
Matrix hessian_projection(const Mesh& mesh, const VemTuple& t, const ProjectionBlock& block);

ProjectionBlock build_projections(const Mesh& mesh, const VemTuple& t);

/// Values of Pi_mu phi_k at the points. Rows follow TensorBasis::evaluate
/// with deriv 0 for the range basis of Pi_mu; columns are the k.
Matrix evaluate_projected_basis(const VemTuple& t, const ProjectionBlock& block, int mu,
                                const std::vector<Point>& pts);

/// Coefficient vectors (columns, over B0) spanning polynomials that lie in
/// the local space and must therefore be reproduced by Pi0.
Matrix reproduction_subspace(const Mesh& mesh, const VemTuple& t);

struct ProjectionAudit {
  SolvabilityReport ranks;
  double constraint_residual = 0.0;    // max |C Pi0 - D|
  double reproduction_error = 0.0;     // max |Pi0 A q - q| over the reproduction subspace
  std::string error;                   // set if a projection could not be built
  bool ok(double tol = 1e-9) const {
    return error.empty() && ranks.ok() && constraint_residual <= tol && reproduction_error <= tol;
  }
};

ProjectionAudit audit_element(const Mesh& mesh, const VemTuple& t);
std::string format_audit(int element, const ProjectionAudit& a);

}  // namespace vem
