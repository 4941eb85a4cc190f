#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "vem/problems.hpp"

#include <Eigen/Dense>

#include <random>

using namespace vem;
using namespace testing;

namespace {

SparseMatrix sparse(const Matrix& m) { return m.sparseView(); }

// SPD matrix with a known spectrum
Matrix spd(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Matrix X(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) X(i, j) = g(rng);
  return X * X.transpose() + n * Matrix::Identity(n, n);
}

Vector random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

}  // namespace

TEST_CASE("linear solvers agree with a dense factorization") {
  const Matrix A = spd(30, 1);
  const Vector b = random_vector(30, 2);
  const Vector ref = A.ldlt().solve(b);
  for (LinearMethod m : {LinearMethod::Auto, LinearMethod::LU, LinearMethod::CG, LinearMethod::MINRES}) {
    SolverSettings s;
    s.method = m;
    s.tolerance = 1e-13;
    const Vector x = linear_solve(sparse(A), b, s);
    CHECK((x - ref).norm() / ref.norm() < 1e-10);
  }
  CHECK(linear_solve(sparse(Matrix::Identity(4, 4)), Vector::Ones(4)).isApprox(Vector::Ones(4)));
  Matrix two(2, 2);
  two << 2, 1, 1, 3;
  const Vector x = linear_solve(sparse(two), Vector(Vec2(1, 2)));
  CHECK(x[0] == doctest::Approx(0.2));
  CHECK(x[1] == doctest::Approx(0.6));
}

TEST_CASE("linear solver failures") {
  Matrix sing = Matrix::Zero(3, 3);
  sing(0, 0) = 1;
  CHECK_THROWS_AS(linear_solve(sparse(sing), Vector::Ones(3)), SolverError);
  CHECK_THROWS_AS(linear_solve(sparse(Matrix::Identity(3, 3)), Vector::Ones(2)), SolverError);
  SolverSettings s;
  s.method = LinearMethod::CG;
  s.max_iterations = 1;
  s.tolerance = 1e-14;
  try {
    linear_solve(sparse(spd(40, 3)), random_vector(40, 4), s);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(!e.residual_history.empty());
  }
  SolverSettings bad;
  bad.tolerance = -1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK(parse_linear_method("minres") == LinearMethod::MINRES);
  CHECK_THROWS_AS(parse_linear_method("gmres"), ConfigError);
}

TEST_CASE("Newton solves linear problems in one step") {
  auto mesh = voronoi_mesh(16);
  SpaceSpec s;
  s.order = 2;
  Space sp(mesh, s);
  const auto bd = sp.boundary_dofs();
  const Exact ex = laplace_exact(1.0, 1.1);
  const Vector rhs = assemble_functional(sp, ex.forcing);
  const NewtonResult r = newton_solve(sp, diffusion_form([](const Point&) { return 1.0; }), rhs, bd,
                                      dirichlet_values(sp, bd, ex.value), {});
  CHECK(r.steps == 1);
  // same as eliminating and solving directly
  SparseMatrix A = assemble_operator(sp, diffusion_form([](const Point&) { return 1.0; })).matrix;
  Vector b = rhs;
  apply_dirichlet(A, b, bd, dirichlet_values(sp, bd, ex.value));
  const Vector x = linear_solve(A, b);
  CHECK((x - r.u).norm() / x.norm() < 1e-10);
}

TEST_CASE("Newton converges quadratically on the nonlinear problem") {
  auto mesh = voronoi_mesh(25);
  SpaceSpec s;
  s.order = 2;
  Space sp(mesh, s);
  const Exact ex = nonlinear_exact();
  const auto bd = sp.boundary_dofs();
  const Vector rhs = assemble_functional(sp, ex.forcing);
  const NewtonResult r =
      newton_solve(sp, nonlinear_form(), rhs, bd, dirichlet_values(sp, bd, ex.value), {});
  CHECK(r.steps <= 8);
  CHECK(r.residuals.back() <= std::max(1e-13, 1e-10 * r.residuals.front()));
  // quadratic phase in relative terms
  for (std::size_t i = 1; i + 1 < r.residuals.size(); ++i)
    if (r.residuals[i] < 1e-3 * r.residuals.front())
      CHECK(r.residuals[i + 1] < 10 * r.residuals[i] * r.residuals[i] / r.residuals.front() + 1e-12);
  const ErrorNorms e = compute_error(sp, r.u, ex.value, ex.gradient);
  CHECK(e.l2 < 1e-2);
  SolverSettings st;
  st.newton_max_steps = 1;
  CHECK_THROWS_AS(newton_solve(sp, nonlinear_form(), rhs, bd, dirichlet_values(sp, bd, ex.value), {}, st),
                  SolverError);
}

TEST_CASE("Uzawa matches the monolithic saddle point solve") {
  const int n = 24, m = 7;
  const Matrix A = spd(n, 5);
  std::mt19937 rng(6);
  std::normal_distribution<double> g;
  Matrix B(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = g(rng);
  const Vector f = random_vector(n, 7), gv = random_vector(m, 8);
  Matrix K = Matrix::Zero(n + m, n + m);
  K.topLeftCorner(n, n) = A;
  K.topRightCorner(n, m) = B.transpose();
  K.bottomLeftCorner(m, n) = B;
  Vector rhs(n + m);
  rhs << f, gv;
  const Vector ref = K.fullPivLu().solve(rhs);
  for (UzawaMethod method : {UzawaMethod::CG, UzawaMethod::Richardson}) {
    SolverSettings s;
    s.uzawa = method;
    s.uzawa_tolerance = 1e-11;
    s.uzawa_max_iterations = 20000;
    if (method == UzawaMethod::Richardson) s.uzawa_step = 0.3;
    const UzawaResult r = uzawa_solve(sparse(A), sparse(B), f, gv, s);
    CHECK((r.u - ref.head(n)).norm() < 1e-8);
    CHECK((r.p - ref.tail(m)).norm() < 1e-8);
    CHECK(r.residuals.back() <= 1e-11);
    if (method == UzawaMethod::CG) CHECK(r.iterations <= m + 2);
  }
}

TEST_CASE("Uzawa with a pressure kernel and a zero constraint") {
  const int n = 10;
  const Matrix A = spd(n, 9);
  // rows sum to a dependent row: the kernel (1, 1, -1) of B^T
  Matrix B = Matrix::Zero(3, n);
  for (int j = 0; j < n; ++j) {
    B(0, j) = std::sin(j + 1.0);
    B(1, j) = std::cos(j + 1.0);
    B(2, j) = B(0, j) + B(1, j);
  }
  const Vector kernel = Eigen::Vector3d(1, 1, -1);
  const Vector f = random_vector(n, 10);
  const Vector gv = Eigen::Vector3d(0.1, -0.2, -0.1);
  const UzawaResult r = uzawa_solve(sparse(A), sparse(B), f, gv, {}, kernel);
  CHECK((B * r.u - gv).norm() < 1e-8);
  CHECK(std::abs(kernel.dot(r.p)) < 1e-10);
  CHECK((A * r.u + B.transpose() * r.p - f).norm() < 1e-8);
  // B = 0: the velocity is A^-1 f, no iterations needed
  const UzawaResult z = uzawa_solve(sparse(A), SparseMatrix(2, n), f, Vector::Zero(2));
  CHECK(z.iterations == 0);
  CHECK((z.u - A.ldlt().solve(f)).norm() < 1e-12);
  SolverSettings s;
  s.uzawa_max_iterations = 1;
  s.uzawa_tolerance = 1e-14;
  CHECK_THROWS_AS(uzawa_solve(sparse(A), sparse(B.topRows(2)), f, gv.head(2), s), SolverError);
}
