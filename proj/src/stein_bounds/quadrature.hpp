#pragma once

#include <functional>
#include <vector>

namespace stein_bounds::quadrature {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1].
Rule gauss_legendre(int n);

// n-point Gauss-Legendre rule mapped to [a, b].
Rule gauss_legendre(int n, double a, double b);

// n-point probabilists' Gauss-Hermite rule: sum_i w_i g(x_i) ~ E g(Z) for
// Z ~ N(0,1); weights sum to 1.
Rule gauss_hermite_prob(int n);

// sum_i w_i f(x_i)
double integrate(const Rule& rule, const std::function<double(double)>& f);

}  // namespace stein_bounds::quadrature
