#if defined(__x86_64__)

#include <immintrin.h>

#include <cmath>
#include <span>

// AVX2+FMA kernel variants. Compiled with per-function target attributes so
// the rest of the build keeps the baseline ISA; only reached after the
// dispatcher confirms cpu support.
namespace stein_bounds::kernels::avx2 {

#define SB_AVX2 __attribute__((target("avx2,fma")))

namespace {

SB_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

SB_AVX2 inline __m256d ipow(__m256d x, int k) {
  __m256d p = _mm256_set1_pd(1.0);
  for (int j = 0; j < k; ++j) p = _mm256_mul_pd(p, x);
  return p;
}

}  // namespace

bool available() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

SB_AVX2 double sum(std::span<const double> x) {
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= x.size(); i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(&x[i]));
  double tail = 0.0;
  for (; i < x.size(); ++i) tail += x[i];
  return hsum(acc) + tail;
}

SB_AVX2 double dot(std::span<const double> x, std::span<const double> y) {
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= x.size(); i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i]), acc);
  double tail = 0.0;
  for (; i < x.size(); ++i) tail += x[i] * y[i];
  return hsum(acc) + tail;
}

SB_AVX2 void axpy(double a, std::span<const double> x, std::span<double> y) {
  std::size_t i = 0;
  const __m256d va = _mm256_set1_pd(a);
  for (; i + 4 <= x.size(); i += 4) {
    __m256d vy = _mm256_loadu_pd(&y[i]);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(&x[i]), vy);
    _mm256_storeu_pd(&y[i], vy);
  }
  for (; i < x.size(); ++i) y[i] += a * x[i];
}

SB_AVX2 void affine(double a, double b, std::span<const double> x, std::span<double> out) {
  std::size_t i = 0;
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  for (; i + 4 <= x.size(); i += 4)
    _mm256_storeu_pd(&out[i], _mm256_fmadd_pd(va, _mm256_loadu_pd(&x[i]), vb));
  for (; i < x.size(); ++i) out[i] = a * x[i] + b;
}

SB_AVX2 double weighted_pow_sum(std::span<const double> w, std::span<const double> x, int k) {
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= x.size(); i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(&w[i]), ipow(_mm256_loadu_pd(&x[i]), k), acc);
  double tail = 0.0;
  for (; i < x.size(); ++i) {
    double p = 1.0;
    for (int j = 0; j < k; ++j) p *= x[i];
    tail += w[i] * p;
  }
  return hsum(acc) + tail;
}

SB_AVX2 double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> x,
                                    int k) {
  std::size_t i = 0;
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= x.size(); i += 4) {
    __m256d p = _mm256_and_pd(ipow(_mm256_loadu_pd(&x[i]), k), abs_mask);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(&w[i]), p, acc);
  }
  double tail = 0.0;
  for (; i < x.size(); ++i) {
    double p = 1.0;
    for (int j = 0; j < k; ++j) p *= x[i];
    tail += w[i] * std::fabs(p);
  }
  return hsum(acc) + tail;
}

#undef SB_AVX2

}  // namespace stein_bounds::kernels::avx2

#endif  // __x86_64__
