#pragma once

// Discrete Schrödinger operator L = D^T D + V, its inverse square root by
// dense eigendecomposition, the Riesz transforms R_j = D_j L^{-1/2}, their
// exact adjoints, and commutators with a multiplication symbol.
//
// D_j is the node forward difference (f(x + e_j) - f(x)) / h with f = 0
// beyond the upper face of the box, so L is positive definite even for V = 0.

#include <schrolab/grid.hpp>
#include <schrolab/orlicz.hpp>
#include <schrolab/potentials.hpp>
#include <schrolab/report.hpp>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace schrolab {

struct OperatorOptions {
  std::size_t max_size = 35937;       // dense factorization cap on n^d
  std::filesystem::path cache_dir;    // empty: no eigendecomposition cache
  bool check_reconstruction = true;   // compute ||L - U Lambda U^T||_max
};

// Eigendecomposition cache file layout (native endian):
//   char[8] "SLEIG001" | uint64 N | uint64 key | double[N] eigenvalues
//   | double[N*N] eigenvectors, row-major, column k = k-th eigenvector.
// key = FNV-1a over the grid descriptor, the potential descriptor and the raw
// potential samples.
std::uint64_t operator_cache_key(const ScalarField& V, const std::string& descriptor);

class SpectralOperator {
 public:
  // Throws std::invalid_argument above the cap and std::runtime_error("operator
  // not positive") if lambda_min <= 0.
  static SpectralOperator build(const Potential& V, const OperatorOptions& opts = {});
  // Any V >= 0, including V = 0 (the box boundary alone keeps L positive).
  static SpectralOperator build_from_samples(const ScalarField& V, const std::string& descriptor,
                                             const OperatorOptions& opts = {});

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return grid_.size(); }
  const std::vector<double>& potential() const { return *potential_; }
  std::span<const double> eigenvalues() const { return *eigenvalues_; }
  double lambda_min() const { return eigenvalues_->front(); }
  double lambda_max() const { return eigenvalues_->back(); }
  // Negative when the check was skipped.
  double reconstruction_error() const { return reconstruction_error_; }
  bool from_cache() const { return from_cache_; }

  // Row x of L^{-1/2} (symmetric, so also column x).
  std::span<const double> inv_sqrt_row(std::size_t x) const {
    return {inv_sqrt_->data() + x * size(), size()};
  }
  double inv_sqrt(std::size_t x, std::size_t y) const { return (*inv_sqrt_)[x * size() + y]; }

  std::vector<double> apply_inv_sqrt(std::span<const double> f) const;
  std::vector<double> apply_L(std::span<const double> f) const;
  // D_j u and D_j^T g.
  std::vector<double> gradient(std::span<const double> u, int axis) const;
  std::vector<double> gradient_adjoint(std::span<const double> g, int axis) const;

 private:
  SpectralOperator(Grid g) : grid_(std::move(g)) {}

  Grid grid_;
  std::shared_ptr<const std::vector<double>> potential_;
  std::shared_ptr<const std::vector<double>> eigenvalues_;
  std::shared_ptr<const std::vector<double>> inv_sqrt_;
  double reconstruction_error_ = -1.0;
  bool from_cache_ = false;
};

// R: the Riesz transform. DualRiesz: f -> (R_j^T f)_j, whose kernel is
// K*(x, y) = K(y, x).
enum class Transform { Riesz, DualRiesz };
const char* transform_name(Transform t);

VectorField apply_riesz(const SpectralOperator& op, const ScalarField& f);
VectorField apply_dual_riesz(const SpectralOperator& op, const ScalarField& f);
// Exact adjoint of the stacked R: g -> sum_j R_j^T g_j.
ScalarField apply_riesz_adjoint(const SpectralOperator& op, const VectorField& g);
VectorField apply_transform(const SpectralOperator& op, Transform t, const ScalarField& f);

// Matrix entries T_j[x, y]; the kernel is entry / cell_volume.
double transform_entry(const SpectralOperator& op, Transform t, int axis, std::size_t x, std::size_t y);
double transform_kernel(const SpectralOperator& op, Transform t, int axis, std::size_t x, std::size_t y);

// m = 1: b T f - T(b f). m >= 2: sum_y (b(x) - b(y))^m T[x, y] f(y).
VectorField commutator_apply(const SpectralOperator& op, const Symbol& b, const ScalarField& f, int m,
                             Transform t);
// m-fold nested [b, [b, ..., [b, T]]] f built from first-order commutators.
VectorField commutator_nested(const SpectralOperator& op, const Symbol& b, const ScalarField& f, int m,
                              Transform t);

// max ||R f||_2 / ||f||_2 over `count` random f, against 1 + 1e-8.
CheckReport riesz_norm_check(const SpectralOperator& op, int count, std::uint64_t seed);
// max relative |<R f, g> - <f, R* g>| over `count` random pairs, against 1e-8.
CheckReport riesz_adjoint_check(const SpectralOperator& op, int count, std::uint64_t seed);

// C_N = max_{x != y} |K(x, y)| |x - y|^d (1 + |x - y|/rho(x))^N for K and K*,
// |K| the Euclidean norm over components. Reports the table; passes when
// every entry is finite and non-decreasing in N.
CheckReport kernel_decay_check(const SpectralOperator& op, const CriticalRadiusField& rho,
                               std::span<const int> n_list);

// Max relative variation of K(x, x + o) over x in the inner half box, per
// offset o in {e_j, 2 e_j}; regression guard against the boundary.
CheckReport translation_variation_check(const SpectralOperator& op, double limit = 0.10);

// For f vanishing on 2B and every x in B:
//   |T f(x)| <= C sum_{k>=1} avg_{2^{k+1}B} |f| (1 + r/rho_0)^{N N0/(N0+1)} (1 + 2^{k+1} r/rho_0)^{-N}
// with C the smallest rung of the default constant ladder.
CheckReport tail_bound_check(const SpectralOperator& op, Transform t, const CriticalRadiusField& rho,
                             const Ball& ball, const ScalarField& f, int N, int n0);

}  // namespace schrolab
