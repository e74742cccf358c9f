#include "kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace stein_bounds::kernels {

namespace scalar {

double sum(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void affine(double a, double b, std::span<const double> x, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b;
}

double weighted_pow_sum(std::span<const double> w, std::span<const double> x, int k) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double p = 1.0;
    for (int j = 0; j < k; ++j) p *= x[i];
    acc += w[i] * p;
  }
  return acc;
}

double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> x, int k) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double p = 1.0;
    for (int j = 0; j < k; ++j) p *= x[i];
    acc += w[i] * std::fabs(p);
  }
  return acc;
}

}  // namespace scalar

#if defined(__x86_64__)
namespace avx2 {
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void affine(double a, double b, std::span<const double> x, std::span<double> out);
double weighted_pow_sum(std::span<const double> w, std::span<const double> x, int k);
double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> x, int k);
bool available();
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void affine(double a, double b, std::span<const double> x, std::span<double> out);
double weighted_pow_sum(std::span<const double> w, std::span<const double> x, int k);
double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> x, int k);
bool available();
}  // namespace neon
#endif

namespace {

struct Table {
  const char* name;
  double (*sum)(std::span<const double>);
  double (*dot)(std::span<const double>, std::span<const double>);
  void (*axpy)(double, std::span<const double>, std::span<double>);
  void (*affine)(double, double, std::span<const double>, std::span<double>);
  double (*weighted_pow_sum)(std::span<const double>, std::span<const double>, int);
  double (*weighted_abs_pow_sum)(std::span<const double>, std::span<const double>, int);
};

constexpr Table kScalar = {"scalar",       scalar::sum,
                           scalar::dot,    scalar::axpy,
                           scalar::affine, scalar::weighted_pow_sum,
                           scalar::weighted_abs_pow_sum};

#if defined(__x86_64__)
constexpr Table kAvx2 = {"avx2",       avx2::sum,
                         avx2::dot,    avx2::axpy,
                         avx2::affine, avx2::weighted_pow_sum,
                         avx2::weighted_abs_pow_sum};
#endif
#if defined(__aarch64__)
constexpr Table kNeon = {"neon",       neon::sum,
                         neon::dot,    neon::axpy,
                         neon::affine, neon::weighted_pow_sum,
                         neon::weighted_abs_pow_sum};
#endif

const Table* lookup(const char* name) {
  if (std::strcmp(name, "scalar") == 0) return &kScalar;
#if defined(__x86_64__)
  if (std::strcmp(name, "avx2") == 0 && avx2::available()) return &kAvx2;
#endif
#if defined(__aarch64__)
  if (std::strcmp(name, "neon") == 0 && neon::available()) return &kNeon;
#endif
  return nullptr;
}

const Table* resolve() {
  if (const char* env = std::getenv("STEIN_BOUNDS_ISA")) {
    if (const Table* t = lookup(env)) return t;
  }
#if defined(__x86_64__)
  if (avx2::available()) return &kAvx2;
#endif
#if defined(__aarch64__)
  if (neon::available()) return &kNeon;
#endif
  return &kScalar;
}

const Table*& active() {
  static const Table* table = resolve();
  return table;
}

}  // namespace

double sum(std::span<const double> x) { return active()->sum(x); }

double dot(std::span<const double> x, std::span<const double> y) {
  return active()->dot(x, y);
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  active()->axpy(a, x, y);
}

void affine(double a, double b, std::span<const double> x, std::span<double> out) {
  active()->affine(a, b, x, out);
}

double weighted_pow_sum(std::span<const double> w, std::span<const double> x, int k) {
  return active()->weighted_pow_sum(w, x, k);
}

double weighted_abs_pow_sum(std::span<const double> w, std::span<const double> x, int k) {
  return active()->weighted_abs_pow_sum(w, x, k);
}

const char* active_isa() { return active()->name; }

bool force_isa(const char* name) {
  const Table* t = lookup(name);
  if (!t) return false;
  active() = t;
  return true;
}

}  // namespace stein_bounds::kernels
