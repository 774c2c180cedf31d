#include <atomic>
#include <cstdlib>
#include <string_view>

#include "pdl/error.hpp"
#include "pdl/simd/kernels.hpp"

namespace pdl::simd {

#ifdef PDL_HAVE_AVX2
const Kernels& avx2_kernel_table();
#endif

const Kernels* avx2_kernels() {
#ifdef PDL_HAVE_AVX2
  static const bool usable = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return usable ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const Kernels* initial() {
  const char* env = std::getenv("PDL_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") return &scalar_kernels();
  if (const Kernels* k = avx2_kernels()) return k;
  return &scalar_kernels();
}

std::atomic<const Kernels*>& current() {
  static std::atomic<const Kernels*> k{initial()};
  return k;
}

}  // namespace

const Kernels& active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) {
  if (isa == Isa::Scalar) {
    current().store(&scalar_kernels(), std::memory_order_release);
    return;
  }
  const Kernels* k = avx2_kernels();
  if (k == nullptr) throw Error("AVX2 kernels are not available on this machine");
  current().store(k, std::memory_order_release);
}

std::string to_string(Isa isa) { return isa == Isa::Scalar ? "scalar" : "avx2"; }

}  // namespace pdl::simd
