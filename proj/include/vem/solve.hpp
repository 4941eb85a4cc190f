#pragma once

#include "vem/assembly.hpp"

#include <vector>

namespace vem {

enum class LinearMethod { Auto, LU, CG, MINRES };
enum class UzawaMethod { CG, Richardson };

struct SolverSettings {
  LinearMethod method = LinearMethod::Auto;  // Auto: LU, CG from 20000 unknowns if symmetric
  double tolerance = 1e-12;                  // relative residual of iterative solvers
  int max_iterations = 20000;
  double newton_tolerance = 1e-10;           // residual norm relative to the initial one
  double newton_absolute_tolerance = 1e-13;  // or absolute, whichever is reached first
  int newton_max_steps = 30;
  UzawaMethod uzawa = UzawaMethod::CG;
  double uzawa_tolerance = 1e-9;  // absolute, on |B u - g|
  double uzawa_step = 1.0;        // Richardson step on the preconditioned Schur complement
  int uzawa_max_iterations = 2000;
  void validate() const;
};

LinearMethod parse_linear_method(const std::string& s);

/// Solves A x = b. Iterative solvers throw SolverError carrying the
/// residual history when the tolerance is not reached.
Vector linear_solve(const SparseMatrix& A, const Vector& b, const SolverSettings& settings = {});

struct NewtonResult {
  Vector u;
  int steps = 0;
  std::vector<double> residuals;
};

/// Newton for a(u, phi_k) = rhs_k on the free dofs with u fixed on
/// `fixed` to `values`. Halving line search (up to 10 halvings) whenever
/// the residual grows.
NewtonResult newton_solve(const Space& space, const CoefficientForm& form, const Vector& rhs,
                          const std::vector<int>& fixed, const Vector& values, const Vector& initial,
                          const SolverSettings& settings = {}, int threads = 0);

struct UzawaResult {
  Vector u, p;
  int iterations = 0;
  std::vector<double> residuals;  // |B u - g| per iteration
};

/// Saddle point [A B^T; B 0] (u, p) = (f, g) with A SPD. `kernel`, if
/// given, spans the pressure null space: the pressure is made orthogonal to
/// it and g is projected onto its complement.
UzawaResult uzawa_solve(const SparseMatrix& A, const SparseMatrix& B, const Vector& f, const Vector& g,
                        const SolverSettings& settings = {}, const Vector& kernel = {});

}  // namespace vem
