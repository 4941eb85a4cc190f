#include "vem/cls.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

namespace vem {
namespace {

int numerical_rank(const Matrix& M, double threshold) {
  if (M.rows() == 0 || M.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(M);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > threshold * s[0]) ++r;
  return r;
}

}  // namespace

SolvabilityReport check_solvability(const Matrix& A, const Matrix& C, double threshold) {
  SolvabilityReport r;
  r.unknowns = static_cast<int>(A.cols());
  r.constraints = static_cast<int>(C.rows());
  r.constraint_rank = numerical_rank(C, threshold);
  Matrix stacked(A.rows() + C.rows(), A.cols());
  stacked << A, C;
  r.stacked_rank = numerical_rank(stacked, threshold);
  return r;
}

Matrix solve_cls(const Matrix& A, const Matrix& B, const Matrix& C, const Matrix& D, double threshold) {
  const Eigen::Index n = A.cols();
  const Eigen::Index m = C.rows();
  const Eigen::Index k = B.cols();
  if (C.rows() > 0 && (C.cols() != n || D.rows() != m || D.cols() != k))
    throw ConfigError("solve_cls: inconsistent constraint dimensions");
  if (B.rows() != A.rows()) throw ConfigError("solve_cls: inconsistent least squares dimensions");

  auto fail = [&](const std::string& why) {
    const SolvabilityReport r = check_solvability(A, C, threshold);
    throw CLSRankError("constrained least squares: " + why + " (rank C = " + std::to_string(r.constraint_rank) +
                           "/" + std::to_string(m) + ", rank [A; C] = " + std::to_string(r.stacked_rank) + "/" +
                           std::to_string(n) + ")",
                       r.constraint_rank, r.stacked_rank);
  };
  if (m > n) fail("more constraints than unknowns");

  Matrix Q = Matrix::Identity(n, n);
  Matrix y1(m, k);
  if (m > 0) {
    // C^T P = Q R, so C = P R^T Q^T and C x = D becomes R1^T y1 = P^T D
    Eigen::ColPivHouseholderQR<Matrix> qr(C.transpose());
    qr.setThreshold(threshold);
    if (qr.rank() < m) fail("constraints are linearly dependent");
    Q = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix R1 = qr.matrixR().topLeftCorner(m, m).triangularView<Eigen::Upper>();
    const Matrix PtD = qr.colsPermutation().transpose() * D;
    y1 = R1.transpose().triangularView<Eigen::Lower>().solve(PtD);
  }
  Matrix x = Q.leftCols(m) * y1;
  if (m < n) {
    const Matrix AQ2 = A * Q.rightCols(n - m);
    Eigen::ColPivHouseholderQR<Matrix> qr(AQ2);
    // threshold relative to the largest column of A so that a null
    // direction of A Q2 is recognised even if A Q2 is tiny overall
    const double scale = std::max(A.norm(), 1e-300);
    qr.setThreshold(threshold * scale / std::max(AQ2.norm(), 1e-300));
    if (AQ2.rows() < AQ2.cols() || qr.rank() < n - m) fail("least squares part is rank deficient");
    const Matrix y2 = qr.solve(B - A * x);
    x += Q.rightCols(n - m) * y2;
  }
  return x;
}

}  // namespace vem
