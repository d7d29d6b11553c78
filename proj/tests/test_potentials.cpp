#include <doctest.h>

#include <schrolab/potentials.hpp>

#include <cmath>
#include <numbers>

using namespace schrolab;

TEST_CASE("potential validation") {
  Grid g(2, 5, 1.0);
  CHECK_THROWS(Potential::constant(g, 0.0));
  CHECK_THROWS(Potential::constant(g, -1.0));
  CHECK_NOTHROW(Potential::power(g, 2.0));
  CHECK(Potential::power(g, 2.0).field.values[g.center_index()] == 0.0);
}

TEST_CASE("rho closed form for constant V in three dimensions") {
  // r^{-1} * c * (4/3) pi r^3 = 1  =>  rho = (3 / (4 pi c))^{1/2}
  Grid g(3, 17, 4.0);
  const auto V = Potential::constant(g, 1.0);
  const double exact = std::sqrt(3.0 / (4.0 * std::numbers::pi));
  const double r = compute_rho(V, g.center_index());
  CHECK(std::abs(r - exact) / exact < 0.05);
  const auto V4 = Potential::constant(g, 4.0);
  CHECK(compute_rho(V4, g.center_index()) == doctest::Approx(r / 2.0).epsilon(0.02));
}

TEST_CASE("rho of a power potential shrinks away from the origin") {
  Grid g(3, 9, 4.0);
  const auto V = Potential::power(g, 2.0);
  const auto rho = rho_field(V);
  CHECK(rho.valid());
  const std::vector<double> far{4.0, 0.0, 0.0};
  CHECK(compute_rho(V, far) < rho.at(g.center_index()));
  // origin: r^{-1} * 4 pi r^5 / 5 = 1
  const double exact = std::pow(5.0 / (4.0 * std::numbers::pi), 0.25);
  CHECK(rho.at(g.center_index()) == doctest::Approx(exact).epsilon(0.05));
}

TEST_CASE("rho beyond the box is an error and is masked in the field") {
  Grid g(3, 5, 1.0);
  const auto V = Potential::constant(g, 1e-6);
  CHECK_THROWS_AS(compute_rho(V, g.center_index()), RhoError);
  const auto field = rho_field(V);
  CHECK_FALSE(field.valid());
  CHECK_THROWS(field.require_valid());
}

TEST_CASE("full scan agrees with the monotone search for monotone functionals") {
  Grid g(3, 9, 4.0);
  const auto V = Potential::constant(g, 1.0);
  RhoOptions full;
  full.full_scan = true;
  const double a = compute_rho(V, g.center_index());
  const double b = compute_rho(V, g.center_index(), full);
  CHECK(a == doctest::Approx(b).epsilon(1e-4));
}

TEST_CASE("comparability passes for constant and quadratic potentials") {
  Grid g(3, 9, 4.0);
  for (const auto& V : {Potential::constant(g, 1.0), Potential::power(g, 2.0)}) {
    const auto rep = check_rho_comparability(rho_field(V));
    CHECK(rep.pass);
    CHECK(rep.constant("C") >= 1.0);
    CHECK(rep.constant("N0") >= 1.0);
  }
  CHECK(check_rho_comparability(CriticalRadiusField::constant(g, 0.7)).constant("C") == 1.0);
}

TEST_CASE("reverse Hoelder report") {
  Grid g(2, 9, 2.0);
  BallFamilyPolicy p;
  p.center_stride = 2;
  p.radii = {0.5, 1.0};
  p.include_boundary = true;
  const auto fam = generate_ball_family(g, p);
  const auto c = reverse_holder_report(Potential::constant(g, 3.0), 2.0, fam);
  CHECK(c.constant == doctest::Approx(1.0));
  const auto q = reverse_holder_report(Potential::power(g, 2.0), 2.0, fam);
  CHECK(q.constant >= 1.0);
  CHECK(q.ratio_at_least_one);
}
