#pragma once

#include "vem/solve.hpp"

namespace vem {

/// A smooth exact solution with its derivatives and the matching forcing.
struct Exact {
  ValueFn value;
  GradientFn gradient;
  HessianFn hessian;
  ValueFn forcing;
};

using ScalarField = std::function<double(const Point&)>;

/// sin(2 pi x / Lx) sin(3 pi y / Ly), forcing for -Laplace u = f.
Exact laplace_exact(double Lx, double Ly);

/// kappa(x) = 10 / (0.01 + x . x)
double varcoeff_kappa(const Point& x);

/// u = (sin 2 pi x sin 2 pi y)^2 with forcing for -div(kappa grad u) = f
/// (order 2) or div div(kappa hess u) = f (order 4).
Exact varcoeff_exact(int order);

/// u = sin(pi x) sin(pi y) for the nonlinear problem below.
Exact nonlinear_exact();

/// int kappa grad u . grad v + mass u v for scalar or vector spaces, with
/// stabilization Dbar = kappa(x_E), mbar = mass.
CoefficientForm diffusion_form(const ScalarField& kappa, double mass = 0.0);

/// int kappa hess u : hess v with stabilization Kbar = kappa(x_E).
CoefficientForm hessian_form(const ScalarField& kappa, double h_power = -2.0);

/// D = (1 + u^2) grad u, m = 2u + cos(u) - cos(x . x). Stabilization uses
/// D and dm/du at the element mean of the state.
CoefficientForm nonlinear_form();

/// int u . v, for flux spaces of the mixed method.
CoefficientForm mass_form();

}  // namespace vem
