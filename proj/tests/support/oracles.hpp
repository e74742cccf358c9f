#pragma once

// Independent numerical oracles used only by tests: deliberately different
// algorithms from the library (adaptive Simpson instead of fixed Gauss rules,
// the one-sided integral form of the first solution derivative instead of the
// Ornstein-Uhlenbeck representation).

#include <cmath>
#include <functional>

#include "test_function.hpp"

namespace stein_bounds::test_oracles {

inline double simpson(const std::function<double(double)>& f, double a, double b) {
  return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = simpson(f, a, m);
  const double right = simpson(f, m, b);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int depth = 48) {
  return adaptive_simpson_rec(f, a, b, simpson(f, a, b), tol, depth);
}

// f'(w) for the solution of f'' - w f' = h - phi, via the one-sided integral
//   w >= 0:  f'(w) = -int_0^inf (h(w+u) - phi) e^{-wu - u^2/2} du
//   w <= 0:  f'(w) = +int_0^inf (h(w-u) - phi) e^{+wu - u^2/2} du
inline double stein_fprime_oracle(const TestFunction& h, double w) {
  const double phi = *h.phi_h();
  const double cut = 14.0;
  if (w >= 0.0) {
    auto f = [&](double u) { return (h.evaluate(0, w + u) - phi) * std::exp(-w * u - 0.5 * u * u); };
    return -adaptive_simpson(f, 0.0, cut);
  }
  auto f = [&](double u) { return (h.evaluate(0, w - u) - phi) * std::exp(w * u - 0.5 * u * u); };
  return adaptive_simpson(f, 0.0, cut);
}

}  // namespace stein_bounds::test_oracles
