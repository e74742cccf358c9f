#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <span>

// NEON kernel variants; double-precision NEON is baseline on aarch64.
namespace stein_bounds::kernels::neon {

namespace {

inline float64x2_t ipow(float64x2_t x, int k) {
  float64x2_t p = vdupq_n_f64(1.0);
  for (int j = 0; j < k; ++j) p = vmulq_f64(p, x);
  return p;
}

}  // namespace

bool available() { return true; }

double sum(std::span<const double> x) {
  std::size_t i = 0;
  float64x2_t acc = vdupq_n_f64(0.0);
  for (; i + 2 <= x.size(); i += 2) acc = vaddq_f64(acc, vld1q_f64(&x[i]));
  double tail = 0.0;
  for (; i < x.size(); ++i) tail += x[i];
  return vaddvq_f64(acc) + tail;
}

double dot(std::span<const double> x, std::span<const double> y) {
  std::size_t i = 0;
  float64x2_t acc = vdupq_n_f64(0.0);
  for (; i + 2 <= x.size(); i += 2)
    acc = vfmaq_f64(acc, vld1q_f64(&x[i]), vld1q_f64(&y[i]));
  double tail = 0.0;
  for (; i < x.size(); ++i) tail += x[i] * y[i];
  return vaddvq_f64(acc) + tail;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  std::size_t i = 0;
  const float64x2_t va = vdupq_n_f64(a);
  for (; i + 2 <= x.size(); i += 2)
    vst1q_f64(&y[i], vfmaq_f64(vld1q_f64(&y[i]), va, vld1q_f64(&x[i])));
  for (; i < x.size(); ++i) y[i] += a * x[i];
}

void affine(double a, double b, std::span<const double> x, std::span<double> out) {
  std::size_t i = 0;
  const float64x2_t va = vdupq_n_f64(a);
  const float64x2_t vb = vdupq_n_f64(b);
  for (; i + 2 <= x.size(); i += 2)
    vst1q_f64(&out[i], vfmaq_f64(vb, va, vld1q_f64(&x[i])));
  for (; i < x.size(); ++i) out[i] = a * x[i] + b;
}

double weighted_pow_sum(std::span<const double> w, std::span<const double> x, int k) {
  std::size_t i = 0;
  float64x2_t acc = vdupq_n_f64(0.0);
  for (; i + 2 <= x.size(); i += 2)
    acc = vfmaq_f64(acc, vld1q_f64(&w[i]), ipow(vld1q_f64(&x[i]), k));
  double tail = 0.0;
  for (; i < x.size(); ++i) {
    double p = 1.0;
    for (int j = 0; j < k; ++j) p *= x[i];
    tail += w[i] * p;
  }
  return vaddvq_f64(acc) + tail;
}

double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> x, int k) {
  std::size_t i = 0;
  float64x2_t acc = vdupq_n_f64(0.0);
  for (; i + 2 <= x.size(); i += 2)
    acc = vfmaq_f64(acc, vld1q_f64(&w[i]), vabsq_f64(ipow(vld1q_f64(&x[i]), k)));
  double tail = 0.0;
  for (; i < x.size(); ++i) {
    double p = 1.0;
    for (int j = 0; j < k; ++j) p *= x[i];
    tail += w[i] * std::fabs(p);
  }
  return vaddvq_f64(acc) + tail;
}

}  // namespace stein_bounds::kernels::neon

#endif  // __aarch64__
