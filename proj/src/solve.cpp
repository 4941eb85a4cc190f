#include "vem/solve.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include <cmath>

namespace vem {

void SolverSettings::validate() const {
  if (!(tolerance > 0) || !(newton_tolerance > 0) || !(uzawa_tolerance > 0) || !(uzawa_step > 0))
    throw ConfigError("solver tolerances and steps must be positive");
  if (max_iterations < 1 || newton_max_steps < 1 || uzawa_max_iterations < 1)
    throw ConfigError("solver iteration limits must be positive");
}

LinearMethod parse_linear_method(const std::string& s) {
  if (s == "auto") return LinearMethod::Auto;
  if (s == "lu") return LinearMethod::LU;
  if (s == "cg") return LinearMethod::CG;
  if (s == "minres") return LinearMethod::MINRES;
  throw ConfigError("unknown linear solver '" + s + "'");
}

namespace {

using ColMajor = Eigen::SparseMatrix<double>;

template <class Solver>
Vector iterate(Solver& solver, const SparseMatrix& A, const Vector& b, const SolverSettings& s) {
  const ColMajor Ac = A;
  solver.setTolerance(s.tolerance);
  solver.setMaxIterations(s.max_iterations);
  solver.compute(Ac);
  const Vector x = solver.solve(b);
  const double bn = std::max(b.norm(), 1e-300);
  const double res = (A * x - b).norm() / bn;
  // Eigen's own estimate can be slightly optimistic; accept a small margin
  if (solver.info() != Eigen::Success || res > 10 * s.tolerance)
    throw SolverError("iterative solver did not converge (relative residual " + std::to_string(res) + ")",
                      {1.0, res});
  return x;
}

}  // namespace

Vector linear_solve(const SparseMatrix& A, const Vector& b, const SolverSettings& s) {
  if (A.rows() != A.cols() || A.rows() != b.size()) throw SolverError("linear system has inconsistent sizes", {});
  LinearMethod m = s.method;
  if (m == LinearMethod::Auto) {
    // CG only pays off on large symmetric systems
    m = LinearMethod::LU;
    if (A.rows() >= 20000) {
      const SparseMatrix At = A.transpose();
      if ((A - At).norm() <= 1e-12 * A.norm()) m = LinearMethod::CG;
    }
  }
  switch (m) {
    case LinearMethod::CG: {
      Eigen::ConjugateGradient<ColMajor, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
      return iterate(cg, A, b, s);
    }
    case LinearMethod::MINRES: {
      Eigen::MINRES<ColMajor, Eigen::Lower | Eigen::Upper, Eigen::IdentityPreconditioner> mr;
      return iterate(mr, A, b, s);
    }
    default: {
      const ColMajor Ac = A;
      Eigen::SparseLU<ColMajor, Eigen::COLAMDOrdering<int>> lu;
      lu.compute(Ac);
      if (lu.info() != Eigen::Success) throw SolverError("sparse LU factorization failed: singular matrix", {});
      Vector x = lu.solve(b);
      if (lu.info() != Eigen::Success || !x.allFinite()) throw SolverError("sparse LU solve failed", {});
      return x;
    }
  }
}

NewtonResult newton_solve(const Space& space, const CoefficientForm& form, const Vector& rhs,
                          const std::vector<int>& fixed, const Vector& values, const Vector& initial,
                          const SolverSettings& s, int threads) {
  NewtonResult out;
  out.u = initial.size() ? initial : Vector(Vector::Zero(space.size()));
  for (std::size_t i = 0; i < fixed.size(); ++i) out.u[fixed[i]] = values[i];
  auto assemble = [&](const Vector& u, bool matrix) {
    AssemblyResult a = assemble_operator(space, form, u, matrix, threads);
    a.residual -= rhs;
    for (int i : fixed) a.residual[i] = 0.0;
    return a;
  };
  double r = assemble(out.u, false).residual.norm();
  out.residuals.push_back(r);
  const double target = std::max(s.newton_absolute_tolerance, s.newton_tolerance * r);
  const Vector zeros = Vector::Zero(fixed.size());
  while (r > target) {
    if (out.steps >= s.newton_max_steps)
      throw SolverError("Newton did not converge in " + std::to_string(s.newton_max_steps) + " steps", out.residuals);
    AssemblyResult a = assemble(out.u, true);
    Vector b = -a.residual;
    apply_dirichlet(a.matrix, b, fixed, zeros);
    const Vector du = linear_solve(a.matrix, b, s);
    double step = 1.0;
    Vector trial = out.u + du;
    double rt = assemble(trial, false).residual.norm();
    for (int k = 0; k < 10 && !(rt < r); ++k) {
      step *= 0.5;
      trial = out.u + step * du;
      rt = assemble(trial, false).residual.norm();
    }
    if (!std::isfinite(rt)) throw SolverError("Newton produced a non-finite residual", out.residuals);
    if (!(rt < r)) {
      // no decrease possible: accept only if already at roundoff level
      if (rt <= 1e3 * target) {
        out.residuals.push_back(rt);
        break;
      }
      throw SolverError("Newton line search failed", out.residuals);
    }
    out.u = trial;
    ++out.steps;
    r = rt;
    out.residuals.push_back(r);
  }
  return out;
}

UzawaResult uzawa_solve(const SparseMatrix& A, const SparseMatrix& B, const Vector& f, const Vector& g,
                        const SolverSettings& s, const Vector& kernel) {
  const ColMajor Ac = A;
  Eigen::SimplicialLDLT<ColMajor> ldlt(Ac);
  if (ldlt.info() != Eigen::Success) throw SolverError("Uzawa: velocity block is not SPD", {});
  const Vector z = kernel.size() ? Vector(kernel / kernel.norm()) : Vector();
  auto project = [&](Vector v) {
    if (z.size()) v -= z.dot(v) * z;
    return v;
  };
  const Vector gp = project(g);
  UzawaResult out;
  out.p = Vector::Zero(B.rows());
  auto velocity = [&](const Vector& p) { return Vector(ldlt.solve(f - B.transpose() * p)); };
  // diagonal of the Schur complement approximated by diag(B diag(A)^-1 B^T)
  Vector dinv = A.diagonal().cwiseInverse();
  Vector prec = Vector::Zero(B.rows());
  for (Eigen::Index r = 0; r < B.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(B, r); it; ++it) prec[r] += it.value() * it.value() * dinv[it.col()];
  for (Eigen::Index i = 0; i < prec.size(); ++i) prec[i] = prec[i] > 0 ? 1.0 / prec[i] : 0.0;

  out.u = velocity(out.p);
  Vector res = project(B * out.u - gp);  // = -(S p - rhs)
  double rn = res.norm();
  out.residuals.push_back(rn);
  if (s.uzawa == UzawaMethod::Richardson) {
    while (rn > s.uzawa_tolerance) {
      if (out.iterations >= s.uzawa_max_iterations) throw SolverError("Uzawa did not converge", out.residuals);
      out.p += s.uzawa_step * project(prec.cwiseProduct(res));
      out.u = velocity(out.p);
      res = project(B * out.u - gp);
      rn = res.norm();
      out.residuals.push_back(rn);
      ++out.iterations;
    }
    return out;
  }
  // preconditioned CG on S p = B A^-1 f - g with S = B A^-1 B^T
  Vector zr = project(prec.cwiseProduct(res));
  Vector d = zr;
  double rz = res.dot(zr);
  while (rn > s.uzawa_tolerance) {
    if (out.iterations >= s.uzawa_max_iterations) throw SolverError("Uzawa did not converge", out.residuals);
    const Vector Sd = project(B * Vector(ldlt.solve(B.transpose() * d)));
    const double alpha = rz / d.dot(Sd);
    out.p += alpha * d;
    // recompute the velocity and the true residual instead of updating
    out.u = velocity(out.p);
    res = project(B * out.u - gp);
    rn = res.norm();
    out.residuals.push_back(rn);
    ++out.iterations;
    zr = project(prec.cwiseProduct(res));
    const double rz_new = res.dot(zr);
    d = zr + (rz_new / rz) * d;
    rz = rz_new;
  }
  return out;
}

}  // namespace vem
