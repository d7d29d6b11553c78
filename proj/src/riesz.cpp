#include <schrolab/riesz.hpp>
#include <schrolab/simd.hpp>

#include <cblas.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>
#include <string>

namespace schrolab {

namespace {

constexpr char kCacheMagic[8] = {'S', 'L', 'E', 'I', 'G', '0', '0', '1'};

// OpenBLAS 0.3.20 selects level-3 kernels on some AVX-512 hosts that return
// wrong results for n >= 64 (dsyevd residuals O(10)). Pin the AVX2 kernels
// unless the user chose a core type. Must run before OpenBLAS's own
// constructor, hence the static link and the early priority.
#if defined(__x86_64__)
__attribute__((constructor(101))) void pin_blas_core() {
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) setenv("OPENBLAS_CORETYPE", "Haswell", 0);
}
#endif

void check_grid(const Grid& a, const Grid& b) {
  if (a != b) throw std::invalid_argument("grid mismatch");
}

bool has_upper_neighbor(const Grid& g, std::size_t x, int axis) {
  return g.axis_index(x, axis) + 1 < g.points_per_axis();
}

struct Eigen {
  std::vector<double> values;
  std::vector<double> vectors;  // row-major, column k = eigenvector k
};

std::filesystem::path cache_path(const std::filesystem::path& dir, std::uint64_t key) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx.eig", static_cast<unsigned long long>(key));
  return dir / buf;
}

bool read_cache(const std::filesystem::path& path, std::size_t n, std::uint64_t key, Eigen& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  char magic[8];
  std::uint64_t hn = 0, hkey = 0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&hn), sizeof hn);
  in.read(reinterpret_cast<char*>(&hkey), sizeof hkey);
  if (!in || std::memcmp(magic, kCacheMagic, 8) != 0 || hn != n || hkey != key) return false;
  out.values.resize(n);
  out.vectors.resize(n * n);
  in.read(reinterpret_cast<char*>(out.values.data()), static_cast<std::streamsize>(n * sizeof(double)));
  in.read(reinterpret_cast<char*>(out.vectors.data()), static_cast<std::streamsize>(n * n * sizeof(double)));
  return static_cast<bool>(in);
}

void write_cache(const std::filesystem::path& path, std::size_t n, std::uint64_t key, const Eigen& e) {
  std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write eigen cache: " + tmp.string());
    const std::uint64_t hn = n;
    out.write(kCacheMagic, 8);
    out.write(reinterpret_cast<const char*>(&hn), sizeof hn);
    out.write(reinterpret_cast<const char*>(&key), sizeof key);
    out.write(reinterpret_cast<const char*>(e.values.data()), static_cast<std::streamsize>(n * sizeof(double)));
    out.write(reinterpret_cast<const char*>(e.vectors.data()),
              static_cast<std::streamsize>(n * n * sizeof(double)));
    if (!out) throw std::runtime_error("cannot write eigen cache: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// Dense L = D^T D + diag(V), row-major.
std::vector<double> assemble(const Grid& g, std::span<const double> V) {
  const std::size_t n = g.size();
  const double ih2 = 1.0 / (g.spacing() * g.spacing());
  std::vector<double> A(n * n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    A[x * n + x] += V[x];
    for (int j = 0; j < g.dim(); ++j) {
      A[x * n + x] += ih2;
      if (!has_upper_neighbor(g, x, j)) continue;
      const std::size_t y = x + g.stride(j);
      A[y * n + y] += ih2;
      A[x * n + y] -= ih2;
      A[y * n + x] -= ih2;
    }
  }
  return A;
}

// out = (U diag(s)) (U diag(s))^T, full symmetric.
void scaled_gram(const std::vector<double>& U, std::span<const double> s, std::size_t n, std::vector<double>& W,
                 std::vector<double>& out) {
  W.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) W[i * n + k] = U[i * n + k] * s[k];
  out.assign(n * n, 0.0);
  const int ni = static_cast<int>(n);
  cblas_dsyrk(CblasRowMajor, CblasUpper, CblasNoTrans, ni, ni, 1.0, W.data(), ni, 0.0, out.data(), ni);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < i; ++k) out[i * n + k] = out[k * n + i];
}

double l2(std::span<const double> v) { return std::sqrt(simd::dot(v, v)); }

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = nd(rng);
  return v;
}

}  // namespace

std::uint64_t operator_cache_key(const ScalarField& V, const std::string& descriptor) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  const std::string gd = V.grid.descriptor();
  mix(gd.data(), gd.size());
  mix(descriptor.data(), descriptor.size());
  mix(V.values.data(), V.values.size() * sizeof(double));
  return h;
}

SpectralOperator SpectralOperator::build(const Potential& V, const OperatorOptions& opts) {
  return build_from_samples(V.field, V.descriptor, opts);
}

SpectralOperator SpectralOperator::build_from_samples(const ScalarField& V, const std::string& descriptor,
                                                      const OperatorOptions& opts) {
  for (double v : V.values)
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("potential must be finite and >= 0");
  const Grid& g = V.grid;
  const std::size_t n = g.size();
  if (n > opts.max_size)
    throw std::invalid_argument("grid size " + std::to_string(n) + " exceeds dense cap " +
                                std::to_string(opts.max_size));
  SpectralOperator op(g);
  op.potential_ = std::make_shared<const std::vector<double>>(V.values);

  Eigen e;
  const std::uint64_t key = operator_cache_key(V, descriptor);
  const bool use_cache = !opts.cache_dir.empty();
  if (use_cache && read_cache(cache_path(opts.cache_dir, key), n, key, e)) {
    op.from_cache_ = true;
  } else {
    e.vectors = assemble(g, V.values);
    e.values.resize(n);
    const int info = LAPACKE_dsyevd(LAPACK_ROW_MAJOR, 'V', 'U', static_cast<lapack_int>(n), e.vectors.data(),
                                    static_cast<lapack_int>(n), e.values.data());
    if (info != 0) throw std::runtime_error("eigendecomposition failed, info=" + std::to_string(info));
    if (use_cache) write_cache(cache_path(opts.cache_dir, key), n, key, e);
  }
  if (!(e.values.front() > 0.0)) throw std::runtime_error("operator not positive");

  std::vector<double> W, G;
  std::vector<double> s(n);
  if (opts.check_reconstruction) {
    for (std::size_t k = 0; k < n; ++k) s[k] = std::sqrt(e.values[k]);
    scaled_gram(e.vectors, s, n, W, G);
    // Compare against the stencil entries without materializing L again.
    const double ih2 = 1.0 / (g.spacing() * g.spacing());
    double err = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      double* row = G.data() + x * n;
      row[x] -= V.values[x] + g.dim() * ih2;
      for (int j = 0; j < g.dim(); ++j) {
        if (has_upper_neighbor(g, x, j)) {
          row[x + g.stride(j)] += ih2;
          G[(x + g.stride(j)) * n + (x + g.stride(j))] -= ih2;
        }
        if (g.axis_index(x, j) > 0) row[x - g.stride(j)] += ih2;
      }
    }
    for (double v : G) err = std::max(err, std::abs(v));
    op.reconstruction_error_ = err;
    if (!(err <= 1e-8 * e.values.back()))
      throw std::runtime_error("inaccurate eigendecomposition: ||L - U Lambda U^T||_max = " + format_double(err) +
                               " (check the BLAS/LAPACK build)");
  }
  for (std::size_t k = 0; k < n; ++k) s[k] = std::pow(e.values[k], -0.25);
  scaled_gram(e.vectors, s, n, W, G);
  op.inv_sqrt_ = std::make_shared<const std::vector<double>>(std::move(G));
  op.eigenvalues_ = std::make_shared<const std::vector<double>>(std::move(e.values));
  return op;
}

std::vector<double> SpectralOperator::apply_inv_sqrt(std::span<const double> f) const {
  if (f.size() != size()) throw std::invalid_argument("grid mismatch");
  std::vector<double> out(size(), 0.0);
  const int ni = static_cast<int>(size());
  cblas_dgemv(CblasRowMajor, CblasNoTrans, ni, ni, 1.0, inv_sqrt_->data(), ni, f.data(), 1, 0.0, out.data(), 1);
  return out;
}

std::vector<double> SpectralOperator::apply_L(std::span<const double> f) const {
  if (f.size() != size()) throw std::invalid_argument("grid mismatch");
  std::vector<double> out(size());
  for (std::size_t x = 0; x < size(); ++x) out[x] = (*potential_)[x] * f[x];
  for (int j = 0; j < grid_.dim(); ++j) {
    const auto dj = gradient(f, j);
    const auto back = gradient_adjoint(dj, j);
    for (std::size_t x = 0; x < size(); ++x) out[x] += back[x];
  }
  return out;
}

std::vector<double> SpectralOperator::gradient(std::span<const double> u, int axis) const {
  const double ih = 1.0 / grid_.spacing();
  const std::size_t s = grid_.stride(axis);
  std::vector<double> out(size());
  for (std::size_t x = 0; x < size(); ++x) {
    const double up = has_upper_neighbor(grid_, x, axis) ? u[x + s] : 0.0;
    out[x] = (up - u[x]) * ih;
  }
  return out;
}

std::vector<double> SpectralOperator::gradient_adjoint(std::span<const double> g, int axis) const {
  const double ih = 1.0 / grid_.spacing();
  const std::size_t s = grid_.stride(axis);
  std::vector<double> out(size());
  for (std::size_t x = 0; x < size(); ++x) {
    const double down = grid_.axis_index(x, axis) > 0 ? g[x - s] : 0.0;
    out[x] = (down - g[x]) * ih;
  }
  return out;
}

const char* transform_name(Transform t) { return t == Transform::Riesz ? "R" : "R*"; }

VectorField apply_riesz(const SpectralOperator& op, const ScalarField& f) {
  check_grid(op.grid(), f.grid);
  const auto u = op.apply_inv_sqrt(f.values);
  std::vector<std::vector<double>> comps;
  for (int j = 0; j < op.grid().dim(); ++j) comps.push_back(op.gradient(u, j));
  return VectorField(op.grid(), std::move(comps));
}

VectorField apply_dual_riesz(const SpectralOperator& op, const ScalarField& f) {
  check_grid(op.grid(), f.grid);
  std::vector<std::vector<double>> comps;
  for (int j = 0; j < op.grid().dim(); ++j) comps.push_back(op.apply_inv_sqrt(op.gradient_adjoint(f.values, j)));
  return VectorField(op.grid(), std::move(comps));
}

ScalarField apply_riesz_adjoint(const SpectralOperator& op, const VectorField& g) {
  check_grid(op.grid(), g.grid);
  if (g.components.size() != static_cast<std::size_t>(op.grid().dim()))
    throw std::invalid_argument("component count mismatch");
  std::vector<double> div(op.size(), 0.0);
  for (int j = 0; j < op.grid().dim(); ++j) {
    const auto t = op.gradient_adjoint(g.components[static_cast<std::size_t>(j)], j);
    for (std::size_t x = 0; x < op.size(); ++x) div[x] += t[x];
  }
  return ScalarField(op.grid(), op.apply_inv_sqrt(div));
}

VectorField apply_transform(const SpectralOperator& op, Transform t, const ScalarField& f) {
  return t == Transform::Riesz ? apply_riesz(op, f) : apply_dual_riesz(op, f);
}

double transform_entry(const SpectralOperator& op, Transform t, int axis, std::size_t x, std::size_t y) {
  if (t == Transform::DualRiesz) std::swap(x, y);
  const Grid& g = op.grid();
  const double up = has_upper_neighbor(g, x, axis) ? op.inv_sqrt(x + g.stride(axis), y) : 0.0;
  return (up - op.inv_sqrt(x, y)) / g.spacing();
}

double transform_kernel(const SpectralOperator& op, Transform t, int axis, std::size_t x, std::size_t y) {
  return transform_entry(op, t, axis, x, y) / op.grid().cell_volume();
}

VectorField commutator_apply(const SpectralOperator& op, const Symbol& b, const ScalarField& f, int m,
                             Transform t) {
  check_grid(op.grid(), f.grid);
  check_grid(op.grid(), b.field.grid);
  if (m < 1) throw std::invalid_argument("commutator order must be >= 1");
  const Grid& g = op.grid();
  const std::size_t n = op.size();
  const auto& bv = b.field.values;
  if (m == 1) {
    std::vector<double> bf(n);
    for (std::size_t x = 0; x < n; ++x) bf[x] = bv[x] * f.values[x];
    auto Tf = apply_transform(op, t, f);
    const auto Tbf = apply_transform(op, t, ScalarField(g, std::move(bf)));
    for (std::size_t j = 0; j < Tf.components.size(); ++j)
      for (std::size_t x = 0; x < n; ++x)
        Tf.components[j][x] = bv[x] * Tf.components[j][x] - Tbf.components[j][x];
    return Tf;
  }
  const auto& K = simd::kernels();
  const double ih = 1.0 / g.spacing();
  std::vector<std::vector<double>> comps(static_cast<std::size_t>(g.dim()), std::vector<double>(n));
  std::vector<double> shifted(n);
  for (int j = 0; j < g.dim(); ++j) {
    const std::size_t s = g.stride(j);
    auto& out = comps[static_cast<std::size_t>(j)];
    for (std::size_t x = 0; x < n; ++x) {
      const double* c = op.inv_sqrt_row(x).data();
      const double* a = nullptr;
      if (t == Transform::Riesz) {
        // T[x, y] = (M[x + e_j, y] - M[x, y]) / h
        if (has_upper_neighbor(g, x, j)) a = op.inv_sqrt_row(x + s).data();
      } else {
        // T[x, y] = (M[x, y + e_j] - M[x, y]) / h
        for (std::size_t y = 0; y < n; ++y) shifted[y] = has_upper_neighbor(g, y, j) ? c[y + s] : 0.0;
        a = shifted.data();
      }
      out[x] = ih * K.pow_diff_dot(bv[x], bv.data(), a, c, f.values.data(), n, m);
    }
  }
  return VectorField(g, std::move(comps));
}

VectorField commutator_nested(const SpectralOperator& op, const Symbol& b, const ScalarField& f, int m,
                              Transform t) {
  if (m < 1) throw std::invalid_argument("commutator order must be >= 1");
  if (m == 1) return commutator_apply(op, b, f, 1, t);
  // C_m f = b C_{m-1} f - C_{m-1}(b f)
  const std::size_t n = op.size();
  auto outer = commutator_nested(op, b, f, m - 1, t);
  std::vector<double> bf(n);
  for (std::size_t x = 0; x < n; ++x) bf[x] = b.field.values[x] * f.values[x];
  const auto inner = commutator_nested(op, b, ScalarField(op.grid(), std::move(bf)), m - 1, t);
  for (std::size_t j = 0; j < outer.components.size(); ++j)
    for (std::size_t x = 0; x < n; ++x)
      outer.components[j][x] = b.field.values[x] * outer.components[j][x] - inner.components[j][x];
  return outer;
}

CheckReport riesz_norm_check(const SpectralOperator& op, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  int arg = -1;
  for (int k = 0; k < count; ++k) {
    ScalarField f(op.grid(), random_vector(rng, op.size()));
    const auto Rf = apply_riesz(op, f);
    double s = 0.0;
    for (const auto& c : Rf.components) s += simd::dot(c, c);
    const double ratio = std::sqrt(s) / l2(f.values);
    if (ratio > worst) worst = ratio, arg = k;
  }
  CheckReport rep;
  rep.name = "riesz_spectral_bound";
  rep.set_measured("max_ratio", worst).set_measured("samples", count);
  rep.set_constant("bound", 1.0 + 1e-8);
  rep.pass = worst <= 1.0 + 1e-8;
  rep.witness = "f#" + std::to_string(arg);
  return rep;
}

CheckReport riesz_adjoint_check(const SpectralOperator& op, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int d = op.grid().dim();
  double worst = 0.0;
  for (int k = 0; k < count; ++k) {
    ScalarField f(op.grid(), random_vector(rng, op.size()));
    std::vector<std::vector<double>> gc;
    for (int j = 0; j < d; ++j) gc.push_back(random_vector(rng, op.size()));
    VectorField g(op.grid(), std::move(gc));
    const auto Rf = apply_riesz(op, f);
    const auto Rsg = apply_riesz_adjoint(op, g);
    double lhs = 0.0, scale = 0.0;
    for (int j = 0; j < d; ++j) {
      const auto& a = Rf.components[static_cast<std::size_t>(j)];
      const auto& c = g.components[static_cast<std::size_t>(j)];
      lhs += simd::dot(a, c);
      scale += simd::dot(c, c);
    }
    const double rhs = simd::dot(f.values, Rsg.values);
    // relative to ||f|| ||g||, which bounds both sides
    const double rel = std::abs(lhs - rhs) / (l2(f.values) * std::sqrt(scale));
    worst = std::max(worst, rel);
  }
  CheckReport rep;
  rep.name = "riesz_adjoint_identity";
  rep.set_measured("max_rel_error", worst).set_measured("samples", count);
  rep.pass = worst <= 1e-8;
  return rep;
}

CheckReport kernel_decay_check(const SpectralOperator& op, const CriticalRadiusField& rho,
                               std::span<const int> n_list) {
  rho.require_valid();
  check_grid(op.grid(), rho.grid);
  const Grid& g = op.grid();
  const std::size_t n = op.size();
  const int d = g.dim();
  const double cv = g.cell_volume();
  const double ih = 1.0 / g.spacing();
  const std::size_t nn = n_list.size();
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> logK(nn, neg_inf), logKs(nn, neg_inf);
  std::vector<double> mag2(n);
  for (std::size_t x = 0; x < n; ++x) {
    std::fill(mag2.begin(), mag2.end(), 0.0);
    const auto cx = op.inv_sqrt_row(x);
    for (int j = 0; j < d; ++j) {
      const bool up = has_upper_neighbor(g, x, j);
      const double* a = up ? op.inv_sqrt_row(x + g.stride(j)).data() : nullptr;
      for (std::size_t y = 0; y < n; ++y) {
        const double e = ((a ? a[y] : 0.0) - cx[y]) * ih / cv;
        mag2[y] += e * e;
      }
    }
    const auto px = g.coords(x);
    const double rx = rho.at(x);
    for (std::size_t y = 0; y < n; ++y) {
      if (y == x || mag2[y] == 0.0) continue;
      const auto py = g.coords(y);
      double dist2 = 0.0;
      for (int k = 0; k < d; ++k) dist2 += (px[k] - py[k]) * (px[k] - py[k]);
      const double dist = std::sqrt(dist2);
      const double base = 0.5 * std::log(mag2[y]) + d * std::log(dist);
      const double lx = std::log1p(dist / rx);
      const double ly = std::log1p(dist / rho.at(y));
      for (std::size_t i = 0; i < nn; ++i) {
        // K(x, y) with rho(x); the same magnitude is K*(y, x), paired with rho(y).
        logK[i] = std::max(logK[i], base + n_list[i] * lx);
        logKs[i] = std::max(logKs[i], base + n_list[i] * ly);
      }
    }
  }
  CheckReport rep;
  rep.name = "kernel_decay";
  bool ok = true;
  for (std::size_t i = 0; i < nn; ++i) {
    const double ck = std::exp(logK[i]), cks = std::exp(logKs[i]);
    rep.set_measured("C_" + std::to_string(n_list[i]) + "_K", ck);
    rep.set_measured("C_" + std::to_string(n_list[i]) + "_Kstar", cks);
    ok = ok && std::isfinite(ck) && std::isfinite(cks);
    if (i > 0 && n_list[i] >= n_list[i - 1])
      ok = ok && logK[i] >= logK[i - 1] && logKs[i] >= logKs[i - 1];
  }
  if (nn >= 2) {
    rep.set_measured("growth_K", std::exp(logK[nn - 1] - logK[0]));
    rep.set_measured("growth_Kstar", std::exp(logKs[nn - 1] - logKs[0]));
  }
  rep.pass = ok;
  return rep;
}

CheckReport translation_variation_check(const SpectralOperator& op, double limit) {
  const Grid& g = op.grid();
  const int d = g.dim();
  const int n = g.points_per_axis();
  const int lo = n / 4, hi = n - 1 - n / 4;
  auto inner = [&](std::size_t x) {
    for (int k = 0; k < d; ++k) {
      const int i = g.axis_index(x, k);
      if (i < lo || i > hi) return false;
    }
    return true;
  };
  auto magnitude = [&](std::size_t x, std::size_t y) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) {
      const double e = transform_kernel(op, Transform::Riesz, j, x, y);
      s += e * e;
    }
    return std::sqrt(s);
  };
  double worst = 0.0;
  std::string witness;
  for (int j = 0; j < d; ++j) {
    for (int step = 1; step <= 2; ++step) {
      double mn = INFINITY, mx = 0.0;
      for (std::size_t x = 0; x < g.size(); ++x) {
        if (!inner(x) || g.axis_index(x, j) + step > hi) continue;
        const double v = magnitude(x, x + step * g.stride(j));
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
      if (!(mx > 0.0)) continue;
      const double var = (mx - mn) / mx;
      if (var > worst) {
        worst = var;
        witness = "offset=" + std::to_string(step) + "e_" + std::to_string(j + 1);
      }
    }
  }
  CheckReport rep;
  rep.name = "kernel_translation_variation";
  rep.set_measured("max_relative_variation", worst).set_constant("limit", limit);
  rep.pass = worst <= limit;
  rep.witness = witness;
  return rep;
}

CheckReport tail_bound_check(const SpectralOperator& op, Transform t, const CriticalRadiusField& rho,
                             const Ball& ball, const ScalarField& f, int N, int n0) {
  check_grid(op.grid(), f.grid);
  check_grid(op.grid(), ball.grid());
  const Grid& g = op.grid();
  const Ball twice = dilate(ball, 2.0);
  for (auto i : twice.members())
    if (f.values[i] != 0.0) throw std::invalid_argument("f must vanish on 2B");
  const double r = ball.radius();
  const double rho0 = rho.at_center(ball);

  // Farthest lattice point from the center bounds the dyadic range.
  double reach = 0.0;
  for (std::size_t x = 0; x < g.size(); ++x) {
    double s = 0.0;
    const auto p = g.coords(x);
    for (int k = 0; k < g.dim(); ++k) s += (p[k] - ball.center()[k]) * (p[k] - ball.center()[k]);
    reach = std::max(reach, std::sqrt(s));
  }
  std::vector<double> absf(f.values.size());
  for (std::size_t i = 0; i < absf.size(); ++i) absf[i] = std::abs(f.values[i]);
  const ScalarField af(g, std::move(absf));
  const double front = std::pow(1.0 + r / rho0, N * n0 / (n0 + 1.0));
  double rhs = 0.0;
  int kmax = 0;
  for (int k = 1;; ++k) {
    const double R = std::ldexp(r, k + 1);
    const Ball Bk(g, ball.center(), R);
    const double vol = Bk.inside_domain() ? Bk.discrete_volume() : continuum_ball_volume(g.dim(), R);
    rhs += integrate(af, Bk) / vol * front * std::pow(1.0 + R / rho0, -N);
    kmax = k;
    if (R > reach) break;
  }

  const auto Tf = apply_transform(op, t, f).magnitude();
  double lhs = 0.0;
  std::size_t arg = 0;
  for (auto i : ball.members())
    if (Tf.values[i] > lhs) lhs = Tf.values[i], arg = i;

  CheckReport rep;
  rep.name = std::string("tail_bound_") + (t == Transform::Riesz ? "R" : "Rstar");
  rep.set_measured("lhs_max", lhs).set_measured("rhs_unit", rhs).set_measured("k_max", kmax);
  rep.set_measured("N", N).set_measured("N0", n0);
  const double need = lhs == 0.0 ? 0.0 : (rhs > 0.0 ? lhs / rhs : INFINITY);
  rep.set_measured("required_C", need);
  const auto cs = ladder::default_constants();
  const auto c = ladder::smallest_at_least(cs, need);
  rep.pass = c.has_value();
  if (c) rep.set_constant("C", *c);
  rep.witness = "x=" + std::to_string(arg);
  return rep;
}

}  // namespace schrolab
