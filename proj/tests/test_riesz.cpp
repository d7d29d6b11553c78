#include <doctest.h>

#include <schrolab/riesz.hpp>

#include <cmath>
#include <filesystem>
#include <random>

using namespace schrolab;

namespace {

ScalarField random_field(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<double> v(g.size());
  for (auto& x : v) x = nd(rng);
  return ScalarField(g, std::move(v));
}

double max_abs_diff(const VectorField& a, const VectorField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.components.size(); ++j)
    for (std::size_t x = 0; x < a.components[j].size(); ++x)
      m = std::max(m, std::abs(a.components[j][x] - b.components[j][x]));
  return m;
}

double max_abs(const VectorField& a) {
  double m = 0.0;
  for (const auto& c : a.components)
    for (double v : c) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("zero potential still gives a positive operator") {
  Grid g(2, 9, 4.0);
  const auto op = SpectralOperator::build_from_samples(ScalarField::constant(g, 0.0), "zero");
  CHECK(op.lambda_min() > 0.0);
  CHECK(op.eigenvalues().size() == g.size());
  CHECK(op.reconstruction_error() >= 0.0);
  CHECK(op.reconstruction_error() <= 1e-8 * op.lambda_max());
  CHECK_THROWS(SpectralOperator::build_from_samples(ScalarField::constant(g, -1.0), "neg"));
}

TEST_CASE("inverse square root squares to the inverse") {
  Grid g(2, 9, 4.0);
  const auto op = SpectralOperator::build(Potential::power(g, 2.0));
  const auto f = random_field(g, 5);
  const auto u = op.apply_L(op.apply_inv_sqrt(op.apply_inv_sqrt(f.values)));
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(u[i] - f.values[i])),
                                             scale = std::max(scale, std::abs(f.values[i]));
  CHECK(err <= 1e-6 * scale);
}

TEST_CASE("spectral bound and adjoint identity") {
  Grid g(3, 7, 4.0);
  const auto op = SpectralOperator::build(Potential::constant(g, 1.0));
  const auto n = riesz_norm_check(op, 100, 1);
  CHECK(n.pass);
  CHECK(n.get_measured("max_ratio") <= 1.0 + 1e-8);
  CHECK(riesz_adjoint_check(op, 20, 2).pass);
  const auto zero = apply_riesz(op, ScalarField::constant(g, 0.0));
  CHECK(max_abs(zero) == 0.0);
}

TEST_CASE("dual kernel is the transpose") {
  Grid g(2, 9, 4.0);
  const auto op = SpectralOperator::build(Potential::power(g, 2.0));
  for (std::size_t x : {std::size_t{0}, std::size_t{13}, g.center_index()})
    for (std::size_t y : {std::size_t{3}, std::size_t{40}, g.size() - 1})
      for (int j = 0; j < 2; ++j)
        CHECK(transform_kernel(op, Transform::DualRiesz, j, x, y) ==
              transform_kernel(op, Transform::Riesz, j, y, x));
  // dual transform applied to f agrees with the entrywise kernel sum
  const auto f = random_field(g, 9);
  const auto Tf = apply_dual_riesz(op, f);
  const std::size_t x = 17;
  double s = 0.0;
  for (std::size_t y = 0; y < g.size(); ++y) s += transform_entry(op, Transform::DualRiesz, 1, x, y) * f.values[y];
  CHECK(Tf.components[1][x] == doctest::Approx(s).epsilon(1e-10));
}

TEST_CASE("commutators") {
  Grid g(2, 9, 4.0);
  const auto op = SpectralOperator::build(Potential::constant(g, 1.0));
  const auto f = random_field(g, 21);
  for (auto t : {Transform::Riesz, Transform::DualRiesz}) {
    for (int m : {1, 2, 3}) {
      const auto c = commutator_apply(op, Symbol::constant(g, 3.0), f, m, t);
      CHECK(max_abs(c) <= 1e-12 * std::max(1.0, max_abs(apply_transform(op, t, f))));
    }
    const auto b = Symbol::log_bracket(g);
    // linearity in f
    auto f2 = f.values;
    for (auto& v : f2) v *= -2.5;
    const auto a = commutator_apply(op, b, f, 2, t);
    const auto a2 = commutator_apply(op, b, ScalarField(g, f2), 2, t);
    auto scaled = a;
    for (auto& comp : scaled.components)
      for (auto& v : comp) v *= -2.5;
    CHECK(max_abs_diff(scaled, a2) <= 1e-12 * max_abs(a2));
    // kernel form against the nested definition
    for (int k = 0; k < 20; ++k) {
      const auto h = random_field(g, 100 + static_cast<std::uint64_t>(k));
      for (int m : {1, 2}) {
        const auto kern = commutator_apply(op, b, h, m, t);
        const auto nest = commutator_nested(op, b, h, m, t);
        CHECK(max_abs_diff(kern, nest) <= 1e-8 * std::max(1.0, max_abs(nest)));
      }
    }
  }
  CHECK_THROWS(commutator_apply(op, Symbol::log_bracket(g), f, 0, Transform::Riesz));
}

TEST_CASE("kernel decay table is finite and monotone in N") {
  Grid g(2, 9, 4.0);
  const auto V = Potential::power(g, 2.0);
  const auto op = SpectralOperator::build(V);
  const auto rho = rho_field(V);
  const std::vector<int> ns{0, 1, 2, 4};
  const auto rep = kernel_decay_check(op, rho, ns);
  CHECK(rep.pass);
  CHECK(rep.get_measured("C_4_K") >= rep.get_measured("C_0_K"));
  CHECK(std::isfinite(rep.get_measured("C_4_Kstar")));
}

TEST_CASE("translation variation in the interior") {
  Grid g(2, 17, 4.0);
  const auto op = SpectralOperator::build(Potential::constant(g, 1.0));
  const auto rep = translation_variation_check(op);
  CHECK(rep.pass);
  MESSAGE("variation " << rep.get_measured("max_relative_variation"));
}

TEST_CASE("tail bound for f supported away from 2B") {
  Grid g(2, 17, 4.0);
  const auto V = Potential::constant(g, 1.0);
  const auto op = SpectralOperator::build(V);
  const auto rho = rho_field(V);
  const Ball b = Ball::at_index(g, g.center_index(), 0.5);
  const auto f = ScalarField::sample(g, [](std::span<const double> x) {
    return std::hypot(x[0], x[1]) > 2.5 ? 1.0 + x[0] : 0.0;
  });
  for (auto t : {Transform::Riesz, Transform::DualRiesz}) CHECK(tail_bound_check(op, t, rho, b, f, 1, 1).pass);
  CHECK_THROWS(tail_bound_check(op, Transform::Riesz, rho, b, ScalarField::constant(g, 1.0), 1, 1));
}

TEST_CASE("eigendecomposition cache round trip and size cap") {
  Grid g(2, 9, 4.0);
  const auto dir = std::filesystem::temp_directory_path() / "schrolab_test_eigcache";
  std::filesystem::remove_all(dir);
  OperatorOptions o;
  o.cache_dir = dir;
  const auto V = Potential::power(g, 2.0);
  const auto a = SpectralOperator::build(V, o);
  const auto b = SpectralOperator::build(V, o);
  CHECK_FALSE(a.from_cache());
  CHECK(b.from_cache());
  for (std::size_t x = 0; x < g.size(); ++x)
    for (std::size_t y = 0; y < g.size(); ++y) REQUIRE(a.inv_sqrt(x, y) == b.inv_sqrt(x, y));
  CHECK(operator_cache_key(V.field, V.descriptor) != operator_cache_key(V.field, "other"));
  std::filesystem::remove_all(dir);

  OperatorOptions small;
  small.max_size = 10;
  CHECK_THROWS_AS(SpectralOperator::build(V, small), std::invalid_argument);
}
