#pragma once

// Gamma-function machinery and the closed-form normal-moment constants that
// every bound evaluator is built from.
namespace stein_bounds::specfun {

// Gamma(x) for x > 0; relative error <= ~1e-13 up to the overflow edge
// (x ~ 171.6). Throws std::domain_error for x <= 0.
double gamma_fn(double x);

// log Gamma(x) for x > 0; use instead of gamma_fn whenever the result may
// overflow.
double log_gamma(double x);

// k!! with the empty-product conventions 0!! = (-1)!! = 1. Exact integer
// arithmetic in double up to k = 40, log-space evaluation beyond.
double double_factorial(int k);

// E Z^k for Z ~ N(0,1): 0 for odd k, (k-1)!! for even k.
double normal_moment(int k);

// E |Z|^k = 2^{k/2} Gamma((k+1)/2) / sqrt(pi).
double normal_abs_moment(int k);

// integral_0^inf e^{-ks} / sqrt(1 - e^{-2s}) ds = sqrt(pi) Gamma(k/2) / (2 Gamma((k+1)/2))
double stein_integral_constant(int k);

struct GammaRatioConstant {
  int k;
  double value;  // Gamma(k/2) / (sqrt(2) Gamma((k+1)/2)), sandwiched by 1/sqrt(k) and 1/sqrt(k - 1/2)
};

GammaRatioConstant gamma_ratio_constant(int k);

}  // namespace stein_bounds::specfun
