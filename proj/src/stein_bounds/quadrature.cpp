#include "quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "kernels.hpp"

namespace stein_bounds::quadrature {

namespace {

void require_order(int n) {
  if (n < 1) throw std::domain_error("quadrature: order must be >= 1");
  if (n > 512) throw std::domain_error("quadrature: order above supported range (512)");
}

}  // namespace

Rule gauss_legendre(int n) {
  require_order(n);
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-based initial guess, then Newton on the recurrence.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;  // exact symmetry for the centre node
  return rule;
}

Rule gauss_legendre(int n, double a, double b) {
  if (!(a < b)) throw std::domain_error("gauss_legendre: need a < b");
  Rule rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + hw * rule.nodes[i];
    rule.weights[i] *= hw;
  }
  return rule;
}

Rule gauss_hermite_prob(int n) {
  require_order(n);
  // Physicists' rule (weight e^{-x^2}) built on the orthonormal recurrence,
  // then rescaled to the N(0,1) expectation form.
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double norm0 = 0.7511255444649425;  // pi^{-1/4}
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Initial guesses per root index, largest root first.
    double x;
    if (i == 0)
      x = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    else if (i == 1)
      x = rule.nodes[n - 1] - 1.14 * std::pow(n, 0.426) / rule.nodes[n - 1];
    else if (i == 2)
      x = 1.86 * rule.nodes[n - 2] - 0.86 * rule.nodes[n - 1];
    else if (i == 3)
      x = 1.91 * rule.nodes[n - 3] - 0.91 * rule.nodes[n - 2];
    else
      x = 2.0 * rule.nodes[n - i] - rule.nodes[n - i + 1];

    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = norm0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = x * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(double(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dx = p1 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    const double w = 2.0 / (pp * pp);
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  // x -> sqrt(2) x, w -> w / sqrt(pi) turns the e^{-x^2} rule into E g(Z).
  const double inv_sqrt_pi = 0.5641895835477563;
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] *= M_SQRT2;
    rule.weights[i] *= inv_sqrt_pi;
  }
  return rule;
}

double integrate(const Rule& rule, const std::function<double(double)>& f) {
  std::vector<double> values(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) values[i] = f(rule.nodes[i]);
  return kernels::dot(rule.weights, values);
}

}  // namespace stein_bounds::quadrature
