#include "odr/solvers.hpp"

#include <cmath>
#include <cstdlib>

#include "odr/errors.hpp"

namespace odr::solvers {

double bisect_root(const std::function<double(double)>& f, double lo,
                   double hi, double x_tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw NumericError("bisect_root: no sign change on bracket");

  for (int it = 0; it < 200 && (hi - lo) > x_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval at machine resolution
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }

  // Secant polish inside the final bracket.
  double x = (std::abs(flo) < std::abs(fhi)) ? lo : hi;
  double x_prev = (x == lo) ? hi : lo;
  double fx = f(x);
  double fx_prev = f(x_prev);
  for (int it = 0; it < 8 && fx != 0.0 && fx != fx_prev; ++it) {
    const double x_next = x - fx * (x - x_prev) / (fx - fx_prev);
    if (!std::isfinite(x_next) || x_next < lo || x_next > hi) break;
    x_prev = x;
    fx_prev = fx;
    x = x_next;
    fx = f(x);
  }
  return (std::abs(fx) <= std::abs(flo) && std::abs(fx) <= std::abs(fhi))
             ? x
             : (std::abs(flo) < std::abs(fhi) ? lo : hi);
}

double golden_min(const std::function<double(double)>& f, double lo,
                  double hi, double x_tol) {
  if (!(lo < hi)) throw NumericError("golden_min: empty bracket");
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > x_tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

std::vector<QuadratureNode> gauss_hermite(int n) {
  if (n < 1) throw NumericError("gauss_hermite: order must be >= 1");
  std::vector<QuadratureNode> nodes(n);
  const double sqrt_pi_4 = 0.7511255444649425;  // pi^(-1/4)
  const int half = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    // Stroud-Secrest style initial guesses for the i-th largest root.
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * nodes[0].x;
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * nodes[1].x;
    } else {
      z = 2.0 * z - nodes[i - 2].x;
    }
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Orthonormal Hermite recurrence evaluated at z.
      double p1 = sqrt_pi_4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
             std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;  // derivative of H~_n at z
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    nodes[i].x = z;
    nodes[i].w = 2.0 / (pp * pp);
    nodes[n - 1 - i].x = -z;
    nodes[n - 1 - i].w = nodes[i].w;
  }
  if (n % 2 == 1) nodes[half - 1].x = 0.0;  // exact central node
  return nodes;
}

double normal_expectation(const std::function<double(double)>& g,
                          double sigma, int order) {
  if (sigma == 0.0) return g(0.0);
  static thread_local int cached_order = -1;
  static thread_local std::vector<QuadratureNode> cached;
  if (cached_order != order) {
    cached = gauss_hermite(order);
    cached_order = order;
  }
  const double inv_sqrt_pi = 0.5641895835477563;
  double acc = 0.0;
  for (const auto& node : cached)
    acc += node.w * g(std::sqrt(2.0) * sigma * node.x);
  return acc * inv_sqrt_pi;
}

}  // namespace odr::solvers
