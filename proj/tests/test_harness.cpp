#include <doctest.h>

#include <schrolab/harness.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

using namespace schrolab;

namespace {

struct Fixture {
  Grid g{2, 9, 4.0};
  Potential V = Potential::constant(g, 1.0);
  SpectralOperator op = SpectralOperator::build(V);
  CriticalRadiusField rho = rho_field(V);
  BallFamily fam = [this] {
    BallFamilyPolicy p;
    p.center_stride = 2;
    p.radii = {0.5, 1.0, 2.0};
    return generate_ball_family(g, p);
  }();
  std::vector<TestFunction> suite(int count, std::uint64_t seed = 1) const {
    TestFunctionSuite s;
    s.count = count;
    s.seed = seed;
    return s.generate(g, &op);
  }
};

MorreyParams params(double p, double kappa, double theta) {
  MorreyParams m;
  m.p = p;
  m.kappa = kappa;
  m.theta = theta;
  return m;
}

}  // namespace

TEST_CASE("suites are deterministic, finite and nonzero") {
  Fixture fx;
  const auto a = fx.suite(12, 7), b = fx.suite(12, 7), c = fx.suite(12, 8);
  REQUIRE(a.size() == 12);
  bool differs = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].name == b[k].name);
    CHECK(a[k].f.values == b[k].f.values);
    differs = differs || a[k].f.values != c[k].f.values;
    CHECK(std::all_of(a[k].f.values.begin(), a[k].f.values.end(), [](double v) { return std::isfinite(v); }));
    CHECK(std::any_of(a[k].f.values.begin(), a[k].f.values.end(), [](double v) { return v != 0.0; }));
  }
  CHECK(differs);
  TestFunctionSuite only_kernel;
  only_kernel.generators = {Generator::KernelColumn};
  CHECK_THROWS(only_kernel.generate(fx.g));
  CHECK(generator_from_name("shell") == Generator::ShellIndicator);
  CHECK_THROWS(generator_from_name("nope"));
}

TEST_CASE("unweighted L2 ratios respect the spectral bound") {
  Fixture fx;
  const auto s = fx.suite(20);
  const auto rep = lebesgue_boundedness_suite(fx.op, Transform::Riesz, Weight::constant(fx.g, 1.0), 2.0, s);
  CHECK(rep.pass);
  CHECK(rep.max_ratio() <= 1.0 + 1e-8);
  CHECK(rep.ratios.size() == s.size());
  const auto j = rep.to_json();
  CHECK(j["record"] == "boundedness");
  CHECK(j["fitted"].contains("C"));
}

TEST_CASE("Morrey suite is invariant under scaling of the inputs") {
  Fixture fx;
  const auto s = fx.suite(10);
  auto s2 = s;
  for (auto& tf : s2)
    for (auto& v : tf.f.values) v *= 2.0;
  const auto w = Weight::power(fx.g, 1.0);
  const auto P = params(2, 0.3, 1.0);
  const auto a = morrey_boundedness_suite(fx.op, Transform::Riesz, w, P, fx.rho, fx.fam, s);
  const auto b = morrey_boundedness_suite(fx.op, Transform::Riesz, w, P, fx.rho, fx.fam, s2);
  CHECK(a.pass);
  REQUIRE(a.ratios.size() == b.ratios.size());
  for (std::size_t k = 0; k < a.ratios.size(); ++k) CHECK(a.ratios[k] == doctest::Approx(b.ratios[k]).epsilon(1e-12));
  CHECK(a.constant == b.constant);
  CHECK(a.exponent == b.exponent);
}

TEST_CASE("constant symbol gives vanishing commutator ratios") {
  Fixture fx;
  const auto s = fx.suite(6);
  const auto rep = commutator_boundedness_suite(fx.op, Transform::Riesz, Symbol::constant(fx.g, 2.0), 1,
                                                Weight::constant(fx.g, 1.0), params(2, 0.3, 0.0), fx.rho, fx.fam, s);
  CHECK(rep.pass);
  CHECK(rep.max_ratio() <= 1e-12);
}

TEST_CASE("weak and endpoint suites run and pass on a small instance") {
  Fixture fx;
  const auto s = fx.suite(6);
  const auto w = Weight::power(fx.g, 1.0);
  CHECK(weak_morrey_boundedness_suite(fx.op, Transform::DualRiesz, w, 0.3, 1.0, fx.rho, fx.fam, s).pass);
  const auto e = endpoint_lloglog_suite(fx.op, Transform::Riesz, Symbol::log_bracket(fx.g), 1, w, 0.3, 0.0, fx.rho,
                                        fx.fam, s);
  CHECK(e.pass);
  CHECK(e.theorem.size() > 0);
}

TEST_CASE("report emission") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto jsonl = dir / "schrolab_harness_test.jsonl";
  const auto summary = dir / "schrolab_harness_test.txt";
  Json header{{"tool", "schrolab"}};
  emit_report(header, {}, jsonl, summary);
  {
    std::ifstream in(jsonl);
    std::string line;
    REQUIRE(std::getline(in, line));
    const auto h = Json::parse(line);
    CHECK(h["record"] == "header");
    CHECK(h["count"] == 0);
    CHECK_FALSE(std::getline(in, line));
  }
  std::vector<Json> recs{Json{{"name", "a"}, {"pass", true}}, Json{{"name", "b"}, {"pass", false}},
                         Json{{"record", "stats"}}};
  emit_report(header, recs, jsonl, summary);
  std::ifstream in(summary);
  std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(all.find("records: 3  pass: 1  fail: 1") != std::string::npos);
  std::filesystem::remove(jsonl);
  std::filesystem::remove(summary);
}
