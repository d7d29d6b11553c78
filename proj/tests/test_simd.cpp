#include <doctest.h>

#include <schrolab/simd.hpp>

#include <cmath>
#include <random>
#include <vector>

using namespace schrolab;

namespace {

std::vector<double> randn(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> nd;
  std::vector<double> v(n);
  for (auto& x : v) x = nd(rng);
  return v;
}

// Tolerance for reassociated sums: a few ulps of the absolute-value sum.
double reassoc_tol(const std::vector<double>& terms) {
  double s = 0.0;
  for (double t : terms) s += std::abs(t);
  return 64.0 * 2.2e-16 * s + 1e-300;
}

}  // namespace

TEST_CASE("scalar table is always present and the dispatcher picks a usable backend") {
  const auto& k = simd::scalar_kernels();
  CHECK(k.dot != nullptr);
  CHECK(k.pow_diff_dot != nullptr);
  const auto b = simd::active_backend();
  if (b == simd::Backend::Avx2) CHECK(simd::cpu_has_avx2());
  CHECK(simd::backend_name(simd::Backend::Scalar) == "scalar");
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  const auto* avx = simd::avx2_kernels();
  if (!avx || !simd::cpu_has_avx2()) {
    MESSAGE("AVX2 unavailable; equivalence skipped");
    return;
  }
  const auto& sc = simd::scalar_kernels();
  std::mt19937_64 rng(42);
  // Lengths straddle the vector width and the unrolled tails.
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 31u, 100u, 4913u}) {
    const auto a = randn(rng, n), b = randn(rng, n), c = randn(rng, n), f = randn(rng, n);
    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i) terms[i] = a[i] * b[i];
    CHECK(std::abs(avx->dot(a.data(), b.data(), n) - sc.dot(a.data(), b.data(), n)) <= reassoc_tol(terms));

    for (std::size_t i = 0; i < n; ++i) terms[i] = (a[i] - c[i]) * f[i];
    CHECK(std::abs(avx->diff_dot(a.data(), c.data(), f.data(), n) - sc.diff_dot(a.data(), c.data(), f.data(), n)) <=
          reassoc_tol(terms));
    for (std::size_t i = 0; i < n; ++i) terms[i] = c[i] * f[i];
    CHECK(std::abs(avx->diff_dot(nullptr, c.data(), f.data(), n) - sc.diff_dot(nullptr, c.data(), f.data(), n)) <=
          reassoc_tol(terms));

    for (int m : {1, 2, 3, 5}) {
      const double bx = 0.3;
      for (std::size_t i = 0; i < n; ++i) terms[i] = std::pow(bx - b[i], m) * (a[i] - c[i]) * f[i];
      const double ref = sc.pow_diff_dot(bx, b.data(), a.data(), c.data(), f.data(), n, m);
      CHECK(std::abs(avx->pow_diff_dot(bx, b.data(), a.data(), c.data(), f.data(), n, m) - ref) <=
            reassoc_tol(terms));
      const double ref0 = sc.pow_diff_dot(bx, b.data(), nullptr, c.data(), f.data(), n, m);
      CHECK(std::abs(avx->pow_diff_dot(bx, b.data(), nullptr, c.data(), f.data(), n, m) - ref0) <=
            reassoc_tol(terms) + 1e-12 * std::abs(ref0));
    }

    std::vector<std::uint32_t> idx;
    for (std::size_t i = 0; i < n; i += 2) idx.push_back(static_cast<std::uint32_t>(i));
    std::vector<double> gt;
    for (auto i : idx) gt.push_back(a[i] * b[i]);
    CHECK(std::abs(avx->gather_dot(a.data(), b.data(), idx.data(), idx.size()) -
                   sc.gather_dot(a.data(), b.data(), idx.data(), idx.size())) <= reassoc_tol(gt));
    gt.clear();
    for (auto i : idx) gt.push_back(a[i]);
    CHECK(std::abs(avx->gather_sum(a.data(), idx.data(), idx.size()) -
                   sc.gather_sum(a.data(), idx.data(), idx.size())) <= reassoc_tol(gt));
  }
}

TEST_CASE("kernels are exact on small integers") {
  const std::vector<double> a{1, 2, 3, 4, 5, 6, 7, 8, 9}, b{1, 1, 1, 1, 1, 1, 1, 1, 1};
  for (auto be : {simd::Backend::Scalar, simd::Backend::Avx2}) {
    if (be == simd::Backend::Avx2 && (!simd::avx2_kernels() || !simd::cpu_has_avx2())) continue;
    const auto prev = simd::active_backend();
    simd::set_backend(be);
    CHECK(simd::dot(a, b) == 45.0);
    const std::vector<std::uint32_t> idx{0, 8, 4};
    CHECK(simd::gather_sum(a, idx) == 15.0);
    CHECK(simd::gather_dot(a, a, idx) == 1.0 + 81.0 + 25.0);
    // sum (2 - b)^2 (a - 0) * 1 with b = 1
    CHECK(simd::kernels().pow_diff_dot(2.0, b.data(), a.data(), std::vector<double>(9, 0.0).data(), b.data(), 9,
                                       2) == 45.0);
    simd::set_backend(prev);
  }
}
