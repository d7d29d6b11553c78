#include <doctest.h>

#include <schrolab/grid.hpp>

#include <cmath>
#include <filesystem>
#include <numbers>

using namespace schrolab;

TEST_CASE("grid geometry and index convention") {
  Grid g(3, 5, 2.0);
  CHECK(g.size() == 125);
  CHECK(g.spacing() == doctest::Approx(1.0));
  CHECK(g.cell_volume() == doctest::Approx(1.0));
  CHECK(g.stride(0) == 1);
  CHECK(g.stride(2) == 25);
  const std::vector<int> multi{1, 2, 3};
  const auto idx = g.index_of(multi);
  CHECK(idx == 1 + 2 * 5 + 3 * 25);
  CHECK(g.axis_index(idx, 1) == 2);
  const auto p = g.point(idx);
  CHECK(p[0] == doctest::Approx(-1.0));
  CHECK(p[2] == doctest::Approx(1.0));
  CHECK(g.index_at(p).value() == idx);
  CHECK(g.norm(g.center_index()) == 0.0);
  CHECK(g.diagonal() == doctest::Approx(4.0 * std::sqrt(3.0)));
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS(Grid(0, 5, 1.0));
  CHECK_THROWS(Grid(2, 1, 1.0));
  CHECK_THROWS(Grid(2, 5, -1.0));
}

TEST_CASE("descriptor and field I/O round-trip") {
  Grid g(2, 7, 3.5);
  CHECK(Grid::from_descriptor(g.descriptor()) == g);
  const auto dir = std::filesystem::temp_directory_path() / "schrolab_grid_io";
  std::filesystem::create_directories(dir);
  write_grid_descriptor(g, dir / "grid.txt");
  CHECK(read_grid_descriptor(dir / "grid.txt") == g);
  const auto f = ScalarField::sample(g, [](std::span<const double> x) { return std::sin(x[0]) + x[1] / 3.0; });
  write_field_text(f, dir / "f.txt");
  write_field_binary(f, dir / "f.bin");
  CHECK(read_field_text(g, dir / "f.txt").values == f.values);
  CHECK(read_field_binary(g, dir / "f.bin").values == f.values);
  CHECK_THROWS(read_field_binary(Grid(2, 9, 3.5), dir / "f.bin"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("ball membership is strict and sorted") {
  Grid g(2, 5, 2.0);  // h = 1
  const Ball b = Ball::at_index(g, g.center_index(), 1.0);
  // |x| < 1 on the integer lattice: only the origin.
  CHECK(b.count() == 1);
  const Ball b2 = Ball::at_index(g, g.center_index(), 1.5);
  CHECK(b2.count() == 9);
  CHECK(std::is_sorted(b2.members().begin(), b2.members().end()));
  CHECK(b2.discrete_volume() == doctest::Approx(9.0));
  CHECK(b2.inside_domain());
  CHECK_FALSE(b2.inside_domain(2.0));
  CHECK_THROWS(dilate(b2, 0.0));
}

TEST_CASE("integrals, measures and means") {
  Grid g(2, 9, 2.0);
  const auto one = ScalarField::constant(g, 1.0);
  const Ball b = Ball::at_index(g, g.center_index(), 1.2);
  CHECK(integrate(one, b) == doctest::Approx(b.discrete_volume()));
  CHECK(ball_mean(ScalarField::constant(g, 0.1), b) == 0.1);  // exact for constants
  const auto neg = ScalarField::constant(g, -1.0);
  CHECK_THROWS_WITH(measure(neg, b), doctest::Contains("not a weight"));
  CHECK_THROWS_WITH(integrate(ScalarField::constant(Grid(2, 5, 2.0), 1.0), b), doctest::Contains("grid mismatch"));
}

TEST_CASE("coverage integral is continuous and matches the ball volume") {
  Grid g(3, 33, 2.0);
  const auto one = ScalarField::constant(g, 1.0);
  const double h = g.spacing();
  const std::vector<double> c{0.0, 0.0, 0.0};
  for (double r : {0.3 * h, 0.7 * h, 1.9 * h, 5.3 * h}) {
    const double exact = 4.0 / 3.0 * std::numbers::pi * r * r * r;
    CHECK(coverage_integral(one, c, r) == doctest::Approx(exact).epsilon(0.01));
  }
  // no jumps across lattice shells
  const double a = coverage_integral(one, c, h * (1.0 - 1e-9));
  const double b = coverage_integral(one, c, h * (1.0 + 1e-9));
  CHECK(std::abs(a - b) < 1e-6 * a);
}

TEST_CASE("ball families") {
  Grid g(2, 17, 4.0);
  BallFamilyPolicy p;
  p.center_stride = 4;
  p.radii = {0.5, 1.0, 2.0};
  const auto fam = generate_ball_family(g, p);
  CHECK(fam.size() > 0);
  for (const auto& b : fam.balls) CHECK(b.inside_domain(2.0));
  p.include_boundary = true;
  CHECK(generate_ball_family(g, p).size() == family_centers(g, 4).size() * 3);
  p.include_box_ball = true;
  const auto with_box = generate_ball_family(g, p);
  CHECK(with_box.balls.back().count() == g.size());
  p.radii = {1.0, 0.5};
  CHECK_THROWS(generate_ball_family(g, p));
  p.radii = {};
  CHECK_THROWS(generate_ball_family(g, p));
  const auto r = geometric_radii(0.25, 4);
  CHECK(r.back() == doctest::Approx(2.0));
}

TEST_CASE("vector field magnitude") {
  Grid g(1, 3, 1.0);
  VectorField v(g, {{3, 0, 1}, {4, 0, 1}});
  const auto m = v.magnitude();
  CHECK(m.values[0] == 5.0);
  CHECK(m.values[1] == 0.0);
  CHECK(m.values[2] == doctest::Approx(std::sqrt(2.0)));
}
