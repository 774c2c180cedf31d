#pragma once

// Dense double-precision kernels used by the LSTM. Matrices are row-major.
// A scalar reference set is always available; an AVX2+FMA set is selected at
// runtime when the CPU supports it. PDL_SIMD=scalar forces the reference set.

#include <cstddef>
#include <string>

namespace pdl::simd {

enum class Isa { Scalar, Avx2 };

struct AdamStep {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double correction1 = 1.0;  // 1 / (1 - beta1^t)
  double correction2 = 1.0;  // 1 / (1 - beta2^t)
};

struct Kernels {
  Isa isa;
  // y += A x, A is rows x cols
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
  // y += A^T x
  void (*gemv_t)(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
  // A += x y^T
  void (*ger)(double* a, std::size_t rows, std::size_t cols, const double* x, const double* y);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += alpha x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  void (*adam)(double* w, const double* g, double* m, double* v, std::size_t n, const AdamStep& step);
};

const Kernels& scalar_kernels();
// nullptr when the AVX2 set was not compiled in or the CPU lacks AVX2/FMA.
const Kernels* avx2_kernels();

const Kernels& active();
// Throws pdl::Error when `isa` is unavailable on this machine.
void select(Isa isa);

std::string to_string(Isa isa);

}  // namespace pdl::simd
