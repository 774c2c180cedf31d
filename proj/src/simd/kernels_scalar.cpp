#include <cmath>

#include "pdl/simd/kernels.hpp"

namespace pdl::simd {
namespace {

void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = a + r * cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
    y[r] += acc;
  }
}

void gemv_t(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = a + r * cols;
    const double xr = x[r];
    if (xr == 0.0) continue;
    for (std::size_t c = 0; c < cols; ++c) y[c] += row[c] * xr;
  }
}

void ger(double* a, std::size_t rows, std::size_t cols, const double* x, const double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double xr = x[r];
    if (xr == 0.0) continue;
    double* row = a + r * cols;
    for (std::size_t c = 0; c < cols; ++c) row[c] += xr * y[c];
  }
}

double dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void adam(double* w, const double* g, double* m, double* v, std::size_t n, const AdamStep& s) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * g[i];
    v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * g[i] * g[i];
    w[i] -= s.lr * (m[i] * s.correction1) / (std::sqrt(v[i] * s.correction2) + s.epsilon);
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{Isa::Scalar, gemv, gemv_t, ger, dot, axpy, adam};
  return k;
}

}  // namespace pdl::simd
