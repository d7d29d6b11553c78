// Compiled with -mavx2 -mfma; only reached after a CPUID check.

#include <schrolab/simd.hpp>

#include <immintrin.h>

namespace schrolab::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double diff_dot_avx2(const double* a, const double* c, const double* f, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  if (a == nullptr) {
    for (; i + 4 <= n; i += 4)
      acc = _mm256_fnmadd_pd(_mm256_loadu_pd(c + i), _mm256_loadu_pd(f + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s -= c[i] * f[i];
    return s;
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d k = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(c + i));
    acc = _mm256_fmadd_pd(k, _mm256_loadu_pd(f + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += (a[i] - c[i]) * f[i];
  return s;
}

double pow_diff_dot_avx2(double bx, const double* b, const double* a, const double* c,
                         const double* f, std::size_t n, int m) {
  const __m256d vbx = _mm256_set1_pd(bx);
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d db = _mm256_sub_pd(vbx, _mm256_loadu_pd(b + i));
    __m256d p = _mm256_set1_pd(1.0);
    for (int k = 0; k < m; ++k) p = _mm256_mul_pd(p, db);
    const __m256d av = a ? _mm256_loadu_pd(a + i) : zero;
    const __m256d k_entry = _mm256_sub_pd(av, _mm256_loadu_pd(c + i));
    acc = _mm256_fmadd_pd(_mm256_mul_pd(p, k_entry), _mm256_loadu_pd(f + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double db = bx - b[i];
    double p = 1.0;
    for (int k = 0; k < m; ++k) p *= db;
    s += p * ((a ? a[i] : 0.0) - c[i]) * f[i];
  }
  return s;
}

double gather_sum_avx2(const double* v, const std::uint32_t* idx, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m128i ix = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + k));
    acc = _mm256_add_pd(acc, _mm256_i32gather_pd(v, ix, 8));
  }
  double s = hsum(acc);
  for (; k < n; ++k) s += v[idx[k]];
  return s;
}

double gather_dot_avx2(const double* v, const double* w, const std::uint32_t* idx,
                       std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m128i ix = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + k));
    acc = _mm256_fmadd_pd(_mm256_i32gather_pd(v, ix, 8), _mm256_i32gather_pd(w, ix, 8), acc);
  }
  double s = hsum(acc);
  for (; k < n; ++k) s += v[idx[k]] * w[idx[k]];
  return s;
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{dot_avx2, diff_dot_avx2, pow_diff_dot_avx2, gather_sum_avx2,
                                 gather_dot_avx2};
  return &table;
}

}  // namespace schrolab::simd
