#include <schrolab/simd.hpp>

namespace schrolab::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double diff_dot_scalar(const double* a, const double* c, const double* f, std::size_t n) {
  double s = 0.0;
  if (a == nullptr) {
    for (std::size_t i = 0; i < n; ++i) s -= c[i] * f[i];
    return s;
  }
  for (std::size_t i = 0; i < n; ++i) s += (a[i] - c[i]) * f[i];
  return s;
}

double pow_diff_dot_scalar(double bx, const double* b, const double* a, const double* c,
                           const double* f, std::size_t n, int m) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double db = bx - b[i];
    double p = 1.0;
    for (int k = 0; k < m; ++k) p *= db;
    const double k_entry = (a ? a[i] : 0.0) - c[i];
    s += p * k_entry * f[i];
  }
  return s;
}

double gather_sum_scalar(const double* v, const std::uint32_t* idx, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += v[idx[k]];
  return s;
}

double gather_dot_scalar(const double* v, const double* w, const std::uint32_t* idx,
                         std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += v[idx[k]] * w[idx[k]];
  return s;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{dot_scalar, diff_dot_scalar, pow_diff_dot_scalar,
                                 gather_sum_scalar, gather_dot_scalar};
  return table;
}

}  // namespace schrolab::simd
