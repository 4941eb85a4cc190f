#include "vem/problems.hpp"

#include <cmath>

namespace vem {

Exact laplace_exact(double Lx, double Ly) {
  const double a = 2 * M_PI / Lx, b = 3 * M_PI / Ly;
  Exact ex;
  ex.value = [=](const Point& x) { return Vector::Constant(1, std::sin(a * x.x()) * std::sin(b * x.y())); };
  ex.gradient = [=](const Point& x) {
    Matrix g(1, 2);
    g << a * std::cos(a * x.x()) * std::sin(b * x.y()), b * std::sin(a * x.x()) * std::cos(b * x.y());
    return g;
  };
  ex.hessian = [=](const Point& x) {
    const double s = std::sin(a * x.x()) * std::sin(b * x.y());
    const double c = a * b * std::cos(a * x.x()) * std::cos(b * x.y());
    Matrix h(2, 2);
    h << -a * a * s, c, c, -b * b * s;
    return h;
  };
  ex.forcing = [=](const Point& x) {
    return Vector::Constant(1, (a * a + b * b) * std::sin(a * x.x()) * std::sin(b * x.y()));
  };
  return ex;
}

double varcoeff_kappa(const Point& x) { return 10.0 / (0.01 + x.squaredNorm()); }

namespace {

// derivatives of sin^2(k t): A^(n)
double sin2(int n, double t) {
  const double k = 2 * M_PI;
  switch (n) {
    case 0: return std::pow(std::sin(k * t), 2);
    case 1: return k * std::sin(2 * k * t);
    case 2: return 2 * k * k * std::cos(2 * k * t);
    case 3: return -4 * k * k * k * std::sin(2 * k * t);
    default: return -8 * k * k * k * k * std::cos(2 * k * t);
  }
}

// d^i/dx^i d^j/dy^j of (sin 2 pi x sin 2 pi y)^2
double dv(int i, int j, const Point& x) { return sin2(i, x.x()) * sin2(j, x.y()); }

}  // namespace

Exact varcoeff_exact(int order) {
  if (order != 2 && order != 4) throw ConfigError("variable coefficient problem order must be 2 or 4");
  Exact ex;
  ex.value = [](const Point& x) { return Vector::Constant(1, dv(0, 0, x)); };
  ex.gradient = [](const Point& x) {
    Matrix g(1, 2);
    g << dv(1, 0, x), dv(0, 1, x);
    return g;
  };
  ex.hessian = [](const Point& x) {
    Matrix h(2, 2);
    h << dv(2, 0, x), dv(1, 1, x), dv(1, 1, x), dv(0, 2, x);
    return h;
  };
  if (order == 2) {
    ex.forcing = [](const Point& x) {
      const double g = 0.01 + x.squaredNorm();
      const double k = 10.0 / g;
      const Vec2 dk = -20.0 * x / (g * g);
      const double lap = dv(2, 0, x) + dv(0, 2, x);
      return Vector::Constant(1, -(dk.x() * dv(1, 0, x) + dk.y() * dv(0, 1, x) + k * lap));
    };
  } else {
    ex.forcing = [](const Point& x) {
      const double g = 0.01 + x.squaredNorm();
      const double k = 10.0 / g;
      const Vec2 dk = -20.0 * x / (g * g);
      Mat2 ddk = -20.0 / (g * g) * Mat2::Identity() + 80.0 / (g * g * g) * x * x.transpose();
      Mat2 h;
      h << dv(2, 0, x), dv(1, 1, x), dv(1, 1, x), dv(0, 2, x);
      const Vec2 grad_lap(dv(3, 0, x) + dv(1, 2, x), dv(2, 1, x) + dv(0, 3, x));
      const double bilap = dv(4, 0, x) + 2 * dv(2, 2, x) + dv(0, 4, x);
      return Vector::Constant(1, (ddk.array() * h.array()).sum() + 2 * dk.dot(grad_lap) + k * bilap);
    };
  }
  return ex;
}

Exact nonlinear_exact() {
  Exact ex;
  const double p = M_PI;
  ex.value = [=](const Point& x) { return Vector::Constant(1, std::sin(p * x.x()) * std::sin(p * x.y())); };
  ex.gradient = [=](const Point& x) {
    Matrix g(1, 2);
    g << p * std::cos(p * x.x()) * std::sin(p * x.y()), p * std::sin(p * x.x()) * std::cos(p * x.y());
    return g;
  };
  ex.hessian = [=](const Point& x) {
    const double s = std::sin(p * x.x()) * std::sin(p * x.y());
    const double c = p * p * std::cos(p * x.x()) * std::cos(p * x.y());
    Matrix h(2, 2);
    h << -p * p * s, c, c, -p * p * s;
    return h;
  };
  // f = -div((1 + u^2) grad u) + 2u + cos u - cos(x . x)
  ex.forcing = [=](const Point& x) {
    const double u = std::sin(p * x.x()) * std::sin(p * x.y());
    const double gx = p * std::cos(p * x.x()) * std::sin(p * x.y());
    const double gy = p * std::sin(p * x.x()) * std::cos(p * x.y());
    const double lap = -2 * p * p * u;
    const double f = -(2 * u * (gx * gx + gy * gy) + (1 + u * u) * lap) + 2 * u + std::cos(u) - std::cos(x.squaredNorm());
    return Vector::Constant(1, f);
  };
  return ex;
}

CoefficientForm diffusion_form(const ScalarField& kappa, double mass) {
  CoefficientForm f;
  f.flux = [kappa](const PointState& s) { return Vector(kappa(s.x) * s.du); };
  f.flux_derivative = [kappa](const PointState& s, Matrix& du, Matrix& ddu) {
    du = Matrix::Zero(s.du.size(), s.u.size());
    ddu = kappa(s.x) * Matrix::Identity(s.du.size(), s.du.size());
  };
  if (mass != 0.0) {
    f.source = [mass](const PointState& s) { return Vector(mass * s.u); };
    f.source_derivative = [mass](const PointState& s, Matrix& du, Matrix& ddu) {
      du = mass * Matrix::Identity(s.u.size(), s.u.size());
      ddu.resize(0, 0);
    };
  }
  f.grad_stab = {[kappa](const Point& x, double) { return kappa(x); }, [](const Point&, double) { return 0.0; }};
  f.mass_stab = StabCoefficient::constant(mass);
  return f;
}

CoefficientForm hessian_form(const ScalarField& kappa, double h_power) {
  CoefficientForm f;
  f.hessian_flux = [kappa](const PointState& s) { return Vector(kappa(s.x) * s.d2u); };
  f.hessian_derivative = [kappa](const PointState& s) { return Matrix(kappa(s.x) * Matrix::Identity(4, 4)); };
  f.hessian_stab = {[kappa](const Point& x, double) { return kappa(x); }, [](const Point&, double) { return 0.0; }};
  f.fourth_order_power = h_power;
  return f;
}

CoefficientForm nonlinear_form() {
  CoefficientForm f;
  f.flux = [](const PointState& s) { return Vector((1 + s.u[0] * s.u[0]) * s.du); };
  f.flux_derivative = [](const PointState& s, Matrix& du, Matrix& ddu) {
    du = 2 * s.u[0] * s.du;
    ddu = (1 + s.u[0] * s.u[0]) * Matrix::Identity(2, 2);
  };
  f.source = [](const PointState& s) {
    return Vector::Constant(1, 2 * s.u[0] + std::cos(s.u[0]) - std::cos(s.x.squaredNorm()));
  };
  f.source_derivative = [](const PointState& s, Matrix& du, Matrix& ddu) {
    du = Matrix::Constant(1, 1, 2 - std::sin(s.u[0]));
    ddu.resize(0, 0);
  };
  f.grad_stab = {[](const Point&, double u) { return 1 + u * u; }, [](const Point&, double u) { return 2 * u; }};
  f.mass_stab = {[](const Point&, double u) { return 2 - std::sin(u); }, [](const Point&, double u) { return -std::cos(u); }};
  return f;
}

CoefficientForm mass_form() {
  CoefficientForm f;
  f.source = [](const PointState& s) { return s.u; };
  f.source_derivative = [](const PointState& s, Matrix& du, Matrix& ddu) {
    du = Matrix::Identity(s.u.size(), s.u.size());
    ddu.resize(0, 0);
  };
  f.mass_stab = StabCoefficient::constant(1.0);
  return f;
}

}  // namespace vem
