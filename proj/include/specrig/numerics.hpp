#pragma once

#include <functional>
#include <vector>

namespace specrig {

/// Adaptive composite Gauss-Legendre quadrature of f over [a, b].
/// Panels are bisected until the two-half estimate agrees with the one-panel
/// estimate to rel_tol (relative to the running integral scale) or the depth
/// cap is hit. Integrands with an absorbed endpoint singularity (smooth after
/// substitution) converge in a handful of panels.
double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-11, int max_depth = 24);

/// Bisection for f(x) = 0 on a bracket [lo, hi] with f(lo)*f(hi) <= 0.
/// Stops when |f| <= f_tol or the interval shrinks below x_tol.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double x_tol = 1e-14, double f_tol = 0.0, int max_iter = 200);

/// Second-order first derivative of samples on a uniform grid:
/// centered in the interior, one-sided three-point stencils at the ends.
std::vector<double> derivative_uniform(const std::vector<double>& y, double h);

inline double sq(double x) { return x * x; }

/// sin(x)/x with the removable singularity filled in.
double sinc(double x);

} // namespace specrig
