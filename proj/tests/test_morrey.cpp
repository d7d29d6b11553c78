#include <doctest.h>

#include <schrolab/morrey.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

using namespace schrolab;

namespace {

BallFamily family(const Grid& g, bool box = false) {
  BallFamilyPolicy p;
  p.center_stride = 2;
  p.radii = {0.5, 1.0, 2.0};
  p.include_box_ball = box;
  return generate_ball_family(g, p);
}

MorreyParams params(double p, double kappa, double theta, MorreyFlavor fl = MorreyFlavor::Strong) {
  MorreyParams m;
  m.p = p;
  m.kappa = kappa;
  m.theta = theta;
  m.flavor = fl;
  return m;
}

ScalarField bumpy(const Grid& g) {
  return ScalarField::sample(g, [](std::span<const double> x) { return std::sin(2 * x[0]) + 0.3 * x[1] * x[1]; });
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS(params(0.5, 0, 0).validate());
  CHECK_THROWS(params(2, 1.0, 0).validate());
  CHECK_THROWS(params(2, 0.3, -1).validate());
  CHECK_THROWS(params(2, 0.3, 0, MorreyFlavor::Weak).validate());
  CHECK_NOTHROW(params(1, 0.3, 0, MorreyFlavor::LlogL).validate());
  Grid g(2, 9, 2.0);
  const auto rho = CriticalRadiusField::constant(g, 1.0);
  CHECK_THROWS(morrey_norm(bumpy(g), Weight::constant(g, 1.0), params(1, 0, 0, MorreyFlavor::Weak), rho, family(g)));
}

TEST_CASE("zero function has zero norm in every flavor") {
  Grid g(2, 9, 2.0);
  const auto rho = CriticalRadiusField::constant(g, 1.0);
  const auto w = Weight::power(g, 1.0);
  const auto z = ScalarField::constant(g, 0.0);
  CHECK(morrey_norm(z, w, params(2, 0.3, 0), rho, family(g)).value == 0.0);
  CHECK(weak_morrey_norm(z, w, params(1, 0.3, 0, MorreyFlavor::Weak), rho, family(g)).value == 0.0);
  CHECK(lloglog_morrey_norm(z, w, params(1, 0.3, 0, MorreyFlavor::LlogL), rho, family(g)).value == 0.0);
}

TEST_CASE("constant function entries are closed form") {
  Grid g(2, 9, 2.0);
  const auto rho = rho_field(Potential::power(g, 2.0));
  const auto w = Weight::power(g, 1.0);
  const auto fam = family(g);
  const double c = 2.5, kappa = 0.3;
  const auto f = ScalarField::constant(g, c);
  const auto weak = weak_morrey_norm(f, w, params(1, kappa, 0.5, MorreyFlavor::Weak), rho, fam);
  const auto ll = lloglog_morrey_norm(f, w, params(1, kappa, 0.5, MorreyFlavor::LlogL), rho, fam);
  const auto st = morrey_norm(f, w, params(2, kappa, 0.5), rho, fam);
  REQUIRE(weak.entries.size() == ll.entries.size());
  for (std::size_t i = 0; i < weak.entries.size(); ++i) {
    const Ball& B = fam.balls[weak.entries[i].ball];
    const double wB = measure(w.field, B);
    const double factor = std::pow(1.0 + B.radius() / rho.at_center(B), -0.5);
    CHECK(weak.entries[i].factor == doctest::Approx(factor).epsilon(1e-14));
    CHECK(weak.entries[i].entry == doctest::Approx(c * std::pow(wB, 1 - kappa) * factor).epsilon(1e-12));
    CHECK(ll.entries[i].entry == doctest::Approx(c * std::pow(wB, 1 - kappa) * factor).epsilon(1e-6));
    CHECK(st.entries[i].local == doctest::Approx(c * std::pow(wB, (1 - kappa) / 2)).epsilon(1e-12));
  }
}

TEST_CASE("orderings, homogeneity and theta monotonicity") {
  Grid g(2, 17, 4.0);
  const auto rho = rho_field(Potential::power(g, 2.0));
  const auto w = Weight::bracket_power(g, 1.0);
  const auto fam = family(g);
  const auto f = bumpy(g);
  for (double kappa : {0.0, 0.3}) {
    const double weak = weak_morrey_norm(f, w, params(1, kappa, 0, MorreyFlavor::Weak), rho, fam).value;
    const double st = morrey_norm(f, w, params(1, kappa, 0), rho, fam).value;
    const double ll = lloglog_morrey_norm(f, w, params(1, kappa, 0, MorreyFlavor::LlogL), rho, fam).value;
    CHECK(weak <= st * (1 + 1e-12));
    CHECK(st <= ll * (1 + 1e-9));
    double prev = INFINITY;
    for (double theta : {0.0, 0.5, 1.0, 3.0}) {
      const double v = morrey_norm(f, w, params(2, kappa, theta), rho, fam).value;
      CHECK(v <= prev);
      prev = v;
    }
  }
  auto f3 = f.values;
  for (auto& v : f3) v *= -3.0;
  const auto P = params(2, 0.3, 1.0);
  CHECK(morrey_norm(ScalarField(g, f3), w, P, rho, fam).value ==
        doctest::Approx(3.0 * morrey_norm(f, w, P, rho, fam).value).epsilon(1e-12));
}

TEST_CASE("a larger family never lowers the norm") {
  Grid g(2, 17, 4.0);
  const auto rho = CriticalRadiusField::constant(g, 1.0);
  const auto w = Weight::constant(g, 1.0);
  const auto f = bumpy(g);
  const auto P = params(2, 0.2, 0.0);
  CHECK(morrey_norm(f, w, P, rho, family(g, true)).value >= morrey_norm(f, w, P, rho, family(g)).value);
}

TEST_CASE("box ball with kappa = theta = 0 recovers the global weighted Lp norm") {
  Grid g(2, 9, 2.0);
  const auto rho = CriticalRadiusField::constant(g, 1.0);
  const auto w = Weight::power(g, 1.0);
  const auto f = bumpy(g);
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += f.values[i] * f.values[i] * w.field.values[i];
  const double global = std::sqrt(s * g.cell_volume());
  CHECK(morrey_norm(f, w, params(2, 0, 0), rho, family(g, true)).value == doctest::Approx(global).epsilon(1e-12));
}

TEST_CASE("csv export") {
  Grid g(2, 9, 2.0);
  const auto rho = CriticalRadiusField::constant(g, 1.0);
  const auto fam = family(g);
  const auto r = morrey_norm(bumpy(g), Weight::constant(g, 1.0), params(2, 0.3, 1), rho, fam);
  REQUIRE(r.argmax_ball.has_value());
  const auto path = std::filesystem::temp_directory_path() / "schrolab_morrey_test.csv";
  write_morrey_csv(r, fam, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "ball,x1,x2,radius,local,factor,entry");
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == r.entries.size());
  std::filesystem::remove(path);
  CHECK(std::string(flavor_name(MorreyFlavor::LlogL)) == "llogl");
}
