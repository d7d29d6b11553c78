#include <schrolab/simd.hpp>

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace schrolab::simd {

#ifndef SCHROLAB_WITH_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

Backend detect() {
  const bool avx2_ok = avx2_kernels() != nullptr && cpu_has_avx2();
  if (const char* env = std::getenv("SCHROLAB_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Backend::Scalar;
    if (want == "avx2" && avx2_ok) return Backend::Avx2;
  }
  return avx2_ok ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<int>& backend_slot() {
  static std::atomic<int> slot{static_cast<int>(detect())};
  return slot;
}

}  // namespace

Backend active_backend() { return static_cast<Backend>(backend_slot().load()); }

void set_backend(Backend b) {
  if (b == Backend::Avx2 && (avx2_kernels() == nullptr || !cpu_has_avx2()))
    throw std::runtime_error("AVX2 backend not available on this host");
  backend_slot().store(static_cast<int>(b));
}

std::string_view backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

const KernelTable& kernels() {
  if (active_backend() == Backend::Avx2) return *avx2_kernels();
  return scalar_kernels();
}

}  // namespace schrolab::simd
