#pragma once

#include <functional>
#include <vector>

namespace odr::solvers {

// Root of f on [lo, hi]; f(lo) and f(hi) must bracket a sign change.
// Bisection down to x_tol, then a few secant polish steps. Throws
// NumericError when no bracket exists or the iteration cap is reached.
double bisect_root(const std::function<double(double)>& f, double lo,
                   double hi, double x_tol = 1e-15);

// Golden-section minimizer on [lo, hi] for a unimodal objective; returns
// the abscissa of the minimum to within x_tol.
double golden_min(const std::function<double(double)>& f, double lo,
                  double hi, double x_tol = 1e-9);

struct QuadratureNode {
  double x;
  double w;
};

// Gauss-Hermite rule: sum_i w_i f(x_i) ~ integral of exp(-x^2) f(x) over
// the real line. Nodes by Newton iteration on the Hermite recurrence.
std::vector<QuadratureNode> gauss_hermite(int n);

// E[g(theta)] for theta ~ Normal(0, sigma^2), fixed-order Gauss-Hermite.
double normal_expectation(const std::function<double(double)>& g,
                          double sigma, int order = 21);

}  // namespace odr::solvers
