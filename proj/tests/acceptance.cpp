// Acceptance runner: one PASS/FAIL line per criterion, tolerances pinned here.
// Uses the eigendecomposition cache in $SCHROLAB_CACHE_DIR when set.

#include <schrolab/commands.hpp>
#include <schrolab/config.hpp>
#include <schrolab/harness.hpp>
#include <schrolab/morrey.hpp>
#include <schrolab/orlicz.hpp>
#include <schrolab/potentials.hpp>
#include <schrolab/riesz.hpp>
#include <schrolab/weights.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace schrolab;

namespace {

constexpr double kRhoTol17 = 0.05;
constexpr double kRhoTol33 = 0.02;
constexpr double kSpectralBound = 1.0 + 1e-8;
constexpr double kAdjointTol = 1e-8;
constexpr double kDualityTol = 1e-10;
constexpr double kLuxemburgTol = 1e-6;
constexpr double kNestedTol = 1e-8;
constexpr double kChainTol = 0.05;
constexpr int kRandomCases = 100;
constexpr int kSuiteCount = 50;
constexpr int kEndpointCount = 10;

const Grid kGrid(3, 17, 4.0);

int failures = 0;

void report(const char* id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s  %-4s %s  [%s]\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

OperatorOptions op_options() {
  OperatorOptions o;
  if (const char* dir = std::getenv("SCHROLAB_CACHE_DIR")) o.cache_dir = dir;
  return o;
}

BallFamily default_family(const Grid& g, bool box = false) {
  BallFamilyPolicy p;
  p.center_stride = 4;
  p.radii = {0.5, 1.0, 2.0};
  p.include_box_ball = box;
  return generate_ball_family(g, p);
}

struct Instance {
  Potential V;
  CriticalRadiusField rho;
};

std::vector<Instance> potentials() {
  std::vector<Instance> out;
  for (auto V : {Potential::constant(kGrid, 1.0), Potential::power(kGrid, 2.0)}) {
    auto rho = rho_field(V);
    out.push_back({std::move(V), std::move(rho)});
  }
  return out;
}

std::vector<Weight> weights() { return {Weight::constant(kGrid, 1.0), Weight::power(kGrid, 1.0)}; }
std::vector<Symbol> symbols() { return {Symbol::constant(kGrid, 1.0), Symbol::log_bracket(kGrid)}; }

void criterion_rho() {
  const double exact = std::sqrt(3.0 / (4.0 * std::numbers::pi));
  const Grid g17(3, 17, 4.0), g33(3, 33, 4.0);
  const double r17 = compute_rho(Potential::constant(g17, 1.0), g17.center_index());
  const double r33 = compute_rho(Potential::constant(g33, 1.0), g33.center_index());
  const double e17 = std::abs(r17 - exact) / exact, e33 = std::abs(r33 - exact) / exact;
  report("1a", e17 <= kRhoTol17, "rho(V=1) closed form at n=17 within 5%",
         "rho=" + fmt(r17) + " exact=" + fmt(exact) + " rel=" + fmt(e17));
  report("1b", e33 <= kRhoTol33, "rho(V=1) closed form at n=33 within 2%",
         "rho=" + fmt(r33) + " rel=" + fmt(e33));
  // rho(4V) = rho(V)/2; each side carries the n=33 discretization tolerance.
  const double r4 = compute_rho(Potential::constant(g33, 4.0), g33.center_index());
  const double rel = std::abs(r4 - r33 / 2.0) / (r33 / 2.0);
  report("1c", rel <= 2 * kRhoTol33, "scaling rho(4V) = rho(V)/2",
         "rho(4V)=" + fmt(r4) + " rho(V)/2=" + fmt(r33 / 2) + " rel=" + fmt(rel));
}

void criterion_spectral(const std::vector<Instance>& inst) {
  for (const auto& in : inst) {
    const auto op = SpectralOperator::build(in.V, op_options());
    const auto n = riesz_norm_check(op, kRandomCases, 1);
    const auto a = riesz_adjoint_check(op, kRandomCases, 2);
    const double ratio = n.get_measured("max_ratio"), err = a.get_measured("max_rel_error");
    report("2a", ratio <= kSpectralBound, "max ||Rf||/||f|| <= 1+1e-8 over 100 f, V=" + in.V.descriptor,
           "max_ratio=" + fmt(ratio));
    report("2b", err <= kAdjointTol, "adjoint identity within 1e-8, V=" + in.V.descriptor, "max_rel=" + fmt(err));
  }
}

void criterion_weights(const std::vector<Instance>& inst) {
  const auto fam = default_family(kGrid);
  bool exact = true, dual = true, mono = true;
  double worst_dual = 0.0;
  for (const auto& in : inst) {
    for (double p : {1.0, 1.5, 2.0, 3.0})
      exact = exact && ap_characteristic(Weight::constant(kGrid, 1.0), p, 0.0, in.rho, fam).value == 1.0;
    for (const auto& w : weights()) {
      for (double p : {1.5, 2.0, 3.0}) {
        const double pp = p / (p - 1.0);
        double prev = INFINITY;
        for (double theta : {0.0, 0.5, 1.0, 2.0}) {
          const double a = ap_characteristic(w, p, theta, in.rho, fam).value;
          const double b = ap_characteristic(w.dual(p), pp, theta, in.rho, fam).value;
          const double rel = std::abs(a - b) / a;
          worst_dual = std::max(worst_dual, rel);
          dual = dual && rel <= kDualityTol;
          mono = mono && a <= prev;
          prev = a;
        }
      }
    }
  }
  report("3a", exact, "ap(w=1) == 1 exactly", "p in {1,1.5,2,3}");
  report("3b", dual, "A_p duality within 1e-10", "max_rel=" + fmt(worst_dual));
  report("3c", mono, "A_p characteristic non-increasing in theta", "theta in {0,0.5,1,2}");
}

void criterion_orlicz() {
  bool consts = true;
  double worst = 0.0;
  for (double c : {1e-3, 0.5, 1.0, 3.0, 100.0}) {
    const std::vector<double> v(kGrid.size(), c), m(kGrid.size(), 1.0);
    for (const auto& A : {YoungFunction::identity(), YoungFunction::llogl()}) {
      const double rel = std::abs(luxemburg_norm(v, m, A) - c) / c;
      worst = std::max(worst, rel);
      consts = consts && rel <= kLuxemburgTol;
    }
  }
  report("4a", consts, "Luxemburg norm of a constant c is c (t and Phi)", "max_rel=" + fmt(worst));

  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<std::size_t> pick(0, kGrid.size() - 1);
  std::uniform_real_distribution<double> rad(0.5, 2.5);
  int ordered = 0, holder = 0;
  for (int k = 0; k < kRandomCases; ++k) {
    std::vector<double> f(kGrid.size()), w(kGrid.size()), h(kGrid.size());
    for (auto& x : f) x = nd(rng) * 3;
    for (auto& x : w) x = std::exp(nd(rng));
    for (auto& x : h) x = nd(rng);
    const Ball B = Ball::at_index(kGrid, pick(rng), rad(rng));
    const ScalarField F(kGrid, f), W(kGrid, w), H(kGrid, h);
    if (weighted_luxemburg_norm(F, B, YoungFunction::identity(), W) <=
        weighted_luxemburg_norm(F, B, YoungFunction::llogl(), W) * (1 + ladder::kSlack))
      ++ordered;
    if (holder_orlicz_check(F, H, B).pass) ++holder;
  }
  report("4b", ordered == kRandomCases, "||f||_L(w),B <= ||f||_LlogL(w),B on 100 random cases",
         std::to_string(ordered) + "/" + std::to_string(kRandomCases));
  report("4c", holder == kRandomCases, "Orlicz Hoelder with constant 2 on 100 random pairs",
         std::to_string(holder) + "/" + std::to_string(kRandomCases));
}

void criterion_lemmas(const std::vector<Instance>& inst) {
  MorreyParams params;
  params.p = 2.0;
  params.kappa = 0.3;
  const auto fam = default_family(kGrid);
  for (const auto& in : inst)
    for (const auto& w : weights())
      for (const auto& b : symbols()) {
        const auto reps = lemma_checks(w, b, params, in.rho, fam);
        std::string failed;
        for (const auto& r : reps)
          if (!r.pass) failed += r.name + " ";
        report("5", failed.empty(),
               "lemma checks V=" + in.V.descriptor + " w=" + w.descriptor + " b=" + b.descriptor,
               failed.empty() ? std::to_string(reps.size()) + " checks" : "failed: " + failed);
      }
}

std::string fitted(const BoundednessReport& r) {
  return "C=" + fmt(r.constant) + " vartheta=" + fmt(r.exponent) + " max_ratio=" + fmt(r.max_ratio());
}

void criterion_theorems(const std::vector<Instance>& inst) {
  const auto fam = default_family(kGrid);
  for (const auto& in : inst) {
    const auto op = SpectralOperator::build(in.V, op_options());
    TestFunctionSuite ts;
    ts.count = kSuiteCount;
    const auto suite = ts.generate(kGrid, &op);
    const std::span<const TestFunction> end_suite(suite.data(), kEndpointCount);
    for (auto t : {Transform::Riesz, Transform::DualRiesz}) {
      const std::string tag = std::string(" T=") + transform_name(t) + " V=" + in.V.descriptor;
      const auto outs = transform_outputs(op, t, suite);
      for (const auto& w : weights())
        for (double theta : {0.0, 1.0}) {
          const MorreyParams P{2.0, 0.3, theta, MorreyFlavor::Strong};
          const std::string wt = tag + " w=" + w.descriptor + " theta=" + fmt(theta);
          const auto s = morrey_boundedness_from_outputs("morrey_strong", transform_name(t), w, P, in.rho, fam,
                                                         suite, outs);
          report("6a", s.pass, "Morrey boundedness" + wt, fitted(s));
          const auto wk = weak_morrey_from_outputs("morrey_weak", transform_name(t), w,
                                                   {1.0, 0.3, theta, MorreyFlavor::Weak}, in.rho, fam, suite, outs);
          report("6b", wk.pass, "weak Morrey boundedness" + wt, fitted(wk));
        }
      for (const auto& b : symbols())
        for (int m : {1, 2}) {
          const auto couts = commutator_outputs(op, t, b, m, suite);
          const std::span<const ScalarField> end_outs(couts.data(), kEndpointCount);
          for (const auto& w : weights())
            for (double theta : {0.0, 1.0}) {
              const MorreyParams P{2.0, 0.3, theta, MorreyFlavor::Strong};
              const std::string wt = tag + " b=" + b.descriptor + " m=" + std::to_string(m) + " w=" + w.descriptor +
                                     " theta=" + fmt(theta);
              const auto c = morrey_boundedness_from_outputs("commutator_m" + std::to_string(m), transform_name(t),
                                                             w, P, in.rho, fam, suite, couts);
              report("6c", c.pass, "commutator boundedness" + wt, fitted(c));
              const auto e = endpoint_from_outputs("endpoint_m" + std::to_string(m), transform_name(t), m, w, 0.3,
                                                   theta, in.rho, fam, end_suite, end_outs);
              report("6d", e.pass, "endpoint LlogL estimate" + wt, fitted(e));
            }
        }
    }
  }
}

void criterion_chain() {
  // kappa = theta = 0, w = 1, V = 1; the box ball makes the family max the global norm.
  const auto V = Potential::constant(kGrid, 1.0);
  const auto rho = rho_field(V);
  const auto op = SpectralOperator::build(V, op_options());
  const auto fam = default_family(kGrid, true);
  const auto w = Weight::constant(kGrid, 1.0);
  TestFunctionSuite ts;
  ts.count = kSuiteCount;
  const auto suite = ts.generate(kGrid, &op);
  for (auto t : {Transform::Riesz, Transform::DualRiesz}) {
    const auto leb = lebesgue_boundedness_suite(op, t, w, 2.0, suite);
    const auto mor = morrey_boundedness_suite(op, t, w, {2.0, 0.0, 0.0, MorreyFlavor::Strong}, rho, fam, suite);
    const double rel = std::abs(mor.max_ratio() - leb.max_ratio()) / leb.max_ratio();
    report("6e", rel <= kChainTol, std::string("specialization chain strong, T=") + transform_name(t),
           "morrey=" + fmt(mor.max_ratio()) + " lebesgue=" + fmt(leb.max_ratio()) + " rel=" + fmt(rel));
    const auto lebw = lebesgue_boundedness_suite(op, t, w, 1.0, suite);
    const auto weak = weak_morrey_boundedness_suite(op, t, w, 0.0, 0.0, rho, fam, suite);
    const double relw = std::abs(weak.max_ratio() - lebw.max_ratio()) / lebw.max_ratio();
    report("6f", relw <= kChainTol, std::string("specialization chain weak, T=") + transform_name(t),
           "morrey=" + fmt(weak.max_ratio()) + " lebesgue=" + fmt(lebw.max_ratio()) + " rel=" + fmt(relw));
  }
}

void criterion_exact(const std::vector<Instance>& inst) {
  const Grid g1(1, 2, 0.5);  // h = 1
  const double two = weak_l1_quasinorm(ScalarField(g1, {3.0, 1.0}), ScalarField(g1, {0.1, 0.9}));
  report("7a", two == 1.0, "weak quasinorm two-level example is exactly 1.0", "value=" + fmt(two));

  const auto op = SpectralOperator::build(inst.back().V, op_options());
  const auto b = Symbol::log_bracket(kGrid);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    std::vector<double> f(kGrid.size());
    for (auto& x : f) x = nd(rng);
    const ScalarField F(kGrid, std::move(f));
    const auto t = k % 2 ? Transform::DualRiesz : Transform::Riesz;
    const auto kern = commutator_apply(op, b, F, 2, t);
    const auto nest = commutator_nested(op, b, F, 2, t);
    double diff = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < kern.components.size(); ++j)
      for (std::size_t x = 0; x < kGrid.size(); ++x) {
        diff = std::max(diff, std::abs(kern.components[j][x] - nest.components[j][x]));
        scale = std::max(scale, std::abs(nest.components[j][x]));
      }
    worst = std::max(worst, diff / scale);
  }
  report("7b", worst <= kNestedTol, "m=2 kernel form matches nested commutator on 20 instances",
         "max_rel=" + fmt(worst));
}

void criterion_determinism() {
  auto cfg = Config::parse("[potential]\nkind = \"power\"\nexponent = 2\n[weight]\nkind = \"power\"\n"
                           "[params]\nm = 2\ntheta = 1\n[suite]\ncount = 12\n");
  if (const char* dir = std::getenv("SCHROLAB_CACHE_DIR")) cfg.set("operator", "cache_dir", std::string(dir));
  auto dump = [&] {
    const auto e = Experiment::from_config(cfg, std::nullopt, 11);
    std::ostringstream os;
    os << e.describe().dump() << '\n';
    for (const auto& r : run_verify(e, "all")) os << r.dump() << '\n';
    return os.str();
  };
  const auto a = dump(), b = dump();
  report("8", a == b && !a.empty(), "identical JSON records across two runs",
         std::to_string(a.size()) + " bytes");
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_rho();
  const auto inst = potentials();
  criterion_spectral(inst);
  criterion_weights(inst);
  criterion_orlicz();
  criterion_lemmas(inst);
  criterion_theorems(inst);
  criterion_chain();
  criterion_exact(inst);
  criterion_determinism();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("acceptance: %d failure(s), %.0f s\n", failures, secs);
  return failures == 0 ? 0 : 1;
}
