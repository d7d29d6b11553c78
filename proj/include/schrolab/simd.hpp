#pragma once

// Data-parallel inner loops used by the quadrature and operator layers.
//
// Every kernel has a scalar reference implementation and, on x86-64 hosts
// with AVX2+FMA, a vectorized variant. The variant is chosen once at first
// use from CPUID and can be overridden with set_backend() or the
// SCHROLAB_SIMD environment variable ("scalar" / "avx2").

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace schrolab::simd {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i (a[i] - c[i]) * f[i]; a may be null (treated as zeros)
  double (*diff_dot)(const double* a, const double* c, const double* f, std::size_t n);
  // sum_i (bx - b[i])^m * (a[i] - c[i]) * f[i]; a may be null
  double (*pow_diff_dot)(double bx, const double* b, const double* a, const double* c,
                         const double* f, std::size_t n, int m);
  // sum_k v[idx[k]]
  double (*gather_sum)(const double* v, const std::uint32_t* idx, std::size_t n);
  // sum_k v[idx[k]] * w[idx[k]]
  double (*gather_dot)(const double* v, const double* w, const std::uint32_t* idx, std::size_t n);
};

const KernelTable& scalar_kernels();
// Null when the library was built without AVX2 support.
const KernelTable* avx2_kernels();

bool cpu_has_avx2();
Backend active_backend();
void set_backend(Backend b);  // throws if the backend is unavailable
std::string_view backend_name(Backend b);
const KernelTable& kernels();

inline double dot(std::span<const double> a, std::span<const double> b) {
  return kernels().dot(a.data(), b.data(), a.size());
}

inline double gather_sum(std::span<const double> v, std::span<const std::uint32_t> idx) {
  return kernels().gather_sum(v.data(), idx.data(), idx.size());
}

inline double gather_dot(std::span<const double> v, std::span<const double> w,
                         std::span<const std::uint32_t> idx) {
  return kernels().gather_dot(v.data(), w.data(), idx.data(), idx.size());
}

}  // namespace schrolab::simd
