#pragma once

#include <cstddef>
#include <span>

// Data-parallel inner loops used by the quadrature, moment and distance
// computations. Scalar reference implementations always exist; on x86-64 an
// AVX2+FMA variant and on aarch64 a NEON variant are selected at runtime.
// Set STEIN_BOUNDS_ISA=scalar (or avx2/neon) to override the selection.
namespace stein_bounds::kernels {

// sum of x
double sum(std::span<const double> x);

// inner product <x, y>; sizes must match
double dot(std::span<const double> x, std::span<const double> y);

// y[i] += a * x[i]
void axpy(double a, std::span<const double> x, std::span<double> y);

// out[i] = a * x[i] + b
void affine(double a, double b, std::span<const double> x, std::span<double> out);

// sum_i w[i] * x[i]^k, integer k >= 0
double weighted_pow_sum(std::span<const double> w, std::span<const double> x, int k);

// sum_i w[i] * |x[i]|^k, integer k >= 0
double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> x, int k);

// name of the implementation currently dispatched: "scalar", "avx2" or "neon"
const char* active_isa();

// force a specific implementation ("scalar"/"avx2"/"neon"); returns false if
// the requested one is unavailable on this machine (selection then unchanged)
bool force_isa(const char* name);

namespace scalar {
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void affine(double a, double b, std::span<const double> x, std::span<double> out);
double weighted_pow_sum(std::span<const double> w, std::span<const double> x, int k);
double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> x, int k);
}  // namespace scalar

}  // namespace stein_bounds::kernels
