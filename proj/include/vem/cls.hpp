#pragma once

#include "vem/types.hpp"

namespace vem {

/// Ranks behind the unique solvability of a constrained least squares
/// problem: rank(C) must equal the number of constraints and rank([A; C])
/// the number of unknowns.
struct SolvabilityReport {
  int unknowns = 0;
  int constraints = 0;
  int constraint_rank = 0;
  int stacked_rank = 0;
  bool ok() const { return constraint_rank == constraints && stacked_rank == unknowns; }
};

/// Numerical ranks from singular values with a relative threshold.
SolvabilityReport check_solvability(const Matrix& A, const Matrix& C, double threshold = 1e-10);

/// Solve min ||A x - B|| subject to C x = D column by column (B and D have
/// the same number of columns) with the null-space method: a QR
/// factorization of C^T splits off the constrained part and the remaining
/// least squares problem is solved by a pivoted QR of A Q2. Throws
/// CLSRankError if either rank condition fails.
Matrix solve_cls(const Matrix& A, const Matrix& B, const Matrix& C, const Matrix& D, double threshold = 1e-10);

}  // namespace vem
