#pragma once

#include "vem/basis.hpp"
#include "vem/cls.hpp"
#include "vem/dofs.hpp"

#include <memory>
#include <vector>

namespace vem {

/// Family independent description of a local space: dof layout, basis sets
/// and constraint set.
struct TupleRecipe {
  int degree = 1;  // polynomial order l of the space
  DofLayout layout;
  Structure b0_structure = Structure::Scalar;
  int b0_order = 1;  // for Structure::Gradient the order of the potential
  Structure b1_structure = Structure::Vector;
  int b1_order = 0;
  Structure b2_structure = Structure::Sym;
  int b2_order = -1;  // -1: no hessian projection
  /// Extra constraints int_E v . grad m for orthonormal m of degree in
  /// (reduced_from, reduced_to], evaluated by parts on the boundary.
  int reduced_from = -1;
  int reduced_to = -1;
  /// int_E Delta Pi0 v = sum_s int_s Pi_n v (lowest order C1 space).
  bool laplace_mean = false;
  bool orthonormalize = false;
  Scaling scaling = Scaling::BoundingBox;
  int quad_order = 4;
};

/// Rows of a one dimensional CLS problem on an edge: functionals applied
/// to the edge basis (A) and the same functionals in terms of the element
/// dofs (B). Rows listed in `constraints` are imposed exactly.
struct EdgeCls {
  int degree = -1;
  int components = 1;
  Matrix A;
  Matrix B;
  std::vector<int> constraints;
  int size() const { return degree < 0 ? 0 : components * (degree + 1); }
};

struct EdgeTuple {
  int edge = -1;
  int local = -1;
  double sign = 1.0;  // +1 if the global edge normal points out of the element
  bool flux = false;  // value projection approximates v . n_s instead of v
  EdgeCls value;
  EdgeCls normal;  // normal derivative projection (fourth order spaces)
};

/// The local tuple of one element.
struct VemTuple {
  int element = -1;
  TupleRecipe recipe;
  std::shared_ptr<ScalarBasis> scalar;
  TensorBasis b0, b1, b2;
  ElementDofs dofs;
  std::vector<EdgeTuple> edges;
  /// Local dofs whose values are imposed as element constraints.
  std::vector<int> constrained_dofs;

  int num_dofs() const { return dofs.size(); }
  bool has_hessian() const { return recipe.b2_order >= 0; }
};

VemTuple build_tuple(const Mesh& mesh, int e, const TupleRecipe& recipe);

/// Matrix of dof values of B0 members (rows: dofs, columns: B0).
Matrix dof_matrix(const Mesh& mesh, const VemTuple& t);

/// Dof values of a batch of polynomial or smooth fields sampled on the
/// tuple's dof points.
Matrix sample_tensor_basis_dofs(const VemTuple& t, const TensorBasis& basis);

/// Edge CLS solution: coefficients over the edge basis for every local
/// element basis function (columns).
Matrix solve_edge_cls(const EdgeCls& cls);

struct ConstraintSystem {
  Matrix C;  // constraints x |B0|
  Matrix D;  // constraints x N^E
};

/// Constraint rows of the element value projection. Boundary reduced rows
/// use the edge projections, computed here.
ConstraintSystem constraint_matrix(const Mesh& mesh, const VemTuple& t);
ConstraintSystem constraint_matrix(const Mesh& mesh, const VemTuple& t, const Matrix& dofs_of_b0,
                                   const std::vector<Matrix>& edge_values, const std::vector<Matrix>& edge_normals);

SolvabilityReport check_solvability(const Mesh& mesh, const VemTuple& t);

}  // namespace vem
