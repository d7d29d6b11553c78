#include <schrolab/weights.hpp>
#include <schrolab/simd.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace schrolab {

namespace {

double abs_pow(double x, double p) {
  const double a = std::abs(x);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  return std::pow(a, p);
}

void check_grid(const Grid& a, const Grid& b) {
  if (a != b) throw std::invalid_argument("grid mismatch");
}

}  // namespace

Weight::Weight(ScalarField f, std::string desc) : field(std::move(f)), descriptor(std::move(desc)) {
  for (double v : field.values)
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("weight samples must be finite and positive");
}

Weight Weight::constant(const Grid& g, double c) {
  return Weight(ScalarField::constant(g, c), "constant(c=" + format_double(c) + ")");
}

Weight Weight::power(const Grid& g, double alpha) {
  const double off = g.spacing() / 3.0;
  return Weight(ScalarField::sample(g,
                                    [alpha, off](std::span<const double> x) {
                                      double s = 0.0;
                                      for (double xi : x) s += (xi + off) * (xi + off);
                                      return std::pow(std::sqrt(s), alpha);
                                    }),
                "power(alpha=" + format_double(alpha) + ")");
}

Weight Weight::bracket_power(const Grid& g, double beta) {
  return Weight(ScalarField::sample(g,
                                    [beta](std::span<const double> x) {
                                      double s = 0.0;
                                      for (double xi : x) s += xi * xi;
                                      return std::pow(1.0 + std::sqrt(s), beta);
                                    }),
                "bracket_power(beta=" + format_double(beta) + ")");
}

Weight Weight::rho_modulated(const CriticalRadiusField& rho, double gamma) {
  rho.require_valid();
  const Grid& g = rho.grid;
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::pow(1.0 + g.norm(i) / rho.at(i), gamma);
  return Weight(ScalarField(g, std::move(v)), "rho_modulated(gamma=" + format_double(gamma) + ")");
}

Weight Weight::dual(double p) const {
  if (!(p > 1.0)) throw std::invalid_argument("dual weight needs p > 1");
  const double e = -1.0 / (p - 1.0);
  std::vector<double> v(field.values.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(field.values[i], e);
  return Weight(ScalarField(field.grid, std::move(v)), "dual(p=" + format_double(p) + "," + descriptor + ")");
}

ApCharacteristic ap_characteristic(const Weight& w, double p, double theta, const CriticalRadiusField& rho,
                                   const BallFamily& family) {
  if (!(p >= 1.0)) throw std::invalid_argument("A_p needs p >= 1");
  if (!(theta >= 0.0)) throw std::invalid_argument("theta must be >= 0");
  rho.require_valid();
  check_grid(w.field.grid, rho.grid);
  ApCharacteristic out;
  out.p = p;
  out.theta = theta;
  out.products.assign(family.size(), std::numeric_limits<double>::quiet_NaN());
  const double sigma_exp = p > 1.0 ? -1.0 / (p - 1.0) : 0.0;
  for (std::size_t bi = 0; bi < family.size(); ++bi) {
    const Ball& B = family.balls[bi];
    if (B.count() == 0) {
      out.skipped_balls.push_back(bi);
      continue;
    }
    const double n = static_cast<double>(B.count());
    // The product is invariant under w -> w / w0; normalizing makes a
    // constant weight give exactly 1.
    const double w0 = w.field.values[B.members().front()];
    double sw = 0.0;
    double product;
    if (p == 1.0) {
      double mn = std::numeric_limits<double>::infinity();
      for (auto i : B.members()) {
        sw += w.field.values[i] / w0;
        mn = std::min(mn, w.field.values[i] / w0);
      }
      product = (sw / n) / mn;
    } else {
      double ss = 0.0;
      for (auto i : B.members()) {
        sw += w.field.values[i] / w0;
        ss += std::pow(w.field.values[i] / w0, sigma_exp);
      }
      product = std::pow(sw / n, 1.0 / p) * std::pow(ss / n, 1.0 - 1.0 / p);
    }
    out.products[bi] = product;
    const double value = theta == 0.0 ? product : product * std::pow(rho.growth_base(B), -theta);
    if (!out.argmax_ball || value > out.value) {
      out.value = value;
      out.argmax_ball = bi;
    }
  }
  return out;
}

MaximalResult maximal_rho_theta(const ScalarField& f, double theta, const CriticalRadiusField& rho,
                                const BallFamily& family) {
  check_grid(f.grid, rho.grid);
  rho.require_valid();
  const Grid& g = f.grid;
  std::vector<double> absf(f.values.size());
  for (std::size_t i = 0; i < absf.size(); ++i) absf[i] = std::abs(f.values[i]);
  MaximalResult out{ScalarField::constant(g, 0.0), std::vector<std::uint8_t>(g.size(), 0)};
  for (const Ball& B : family.balls) {
    auto c = B.center_index();
    if (!c || B.count() == 0) continue;
    const double avg = simd::gather_sum(absf, B.members()) / static_cast<double>(B.count());
    const double v = std::pow(1.0 + B.radius() / rho.at(*c), -theta) * avg;
    if (!out.evaluated[*c] || v > out.values.values[*c]) out.values.values[*c] = v;
    out.evaluated[*c] = 1;
  }
  return out;
}

CheckReport a1_pointwise_check(const Weight& w, double theta, const CriticalRadiusField& rho,
                               const BallFamily& family) {
  auto M = maximal_rho_theta(w.field, theta, rho, family);
  CheckReport rep;
  rep.name = "a1_pointwise";
  double worst = 0.0;
  std::size_t wi = 0;
  for (std::size_t i = 0; i < M.evaluated.size(); ++i) {
    if (!M.evaluated[i]) continue;
    const double r = M.values.values[i] / w.field.values[i];
    if (r > worst) worst = r, wi = i;
  }
  rep.set_measured("theta", theta).set_measured("max_ratio", worst);
  const auto rungs = ladder::default_constants();
  auto c = ladder::smallest_at_least(rungs, worst);
  rep.pass = c.has_value();
  if (c) rep.set_constant("C", *c);
  rep.witness = "x=" + std::to_string(wi);
  return rep;
}

double weighted_lp_norm(const ScalarField& f, const ScalarField& w, double p) {
  check_grid(f.grid, w.grid);
  if (!(p >= 1.0)) throw std::invalid_argument("L^p norm needs p >= 1");
  double s = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) s += abs_pow(f.values[i], p) * w.values[i];
  s *= f.grid.cell_volume();
  return p == 1.0 ? s : std::pow(s, 1.0 / p);
}

double weak_quasinorm(std::span<const double> abs_values, std::span<const double> masses) {
  if (abs_values.size() != masses.size()) throw std::invalid_argument("value/mass length mismatch");
  std::vector<std::size_t> order(abs_values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return abs_values[a] > abs_values[b]; });
  double best = 0.0;
  double mass = 0.0;
  std::size_t k = 0;
  while (k < order.size()) {
    const double v = abs_values[order[k]];
    if (!(v > 0.0)) break;
    // Points tied at v all belong to {|f| > lambda} as lambda -> v^-.
    while (k < order.size() && abs_values[order[k]] == v) mass += masses[order[k++]];
    best = std::max(best, v * mass);
  }
  return best;
}

double weak_l1_quasinorm(const ScalarField& f, const ScalarField& w) {
  check_grid(f.grid, w.grid);
  std::vector<double> a(f.values.size()), m(f.values.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = std::abs(f.values[i]);
    m[i] = w.values[i] * f.grid.cell_volume();
  }
  return weak_quasinorm(a, m);
}

double weak_quasinorm_on_ball(const ScalarField& f, const ScalarField& w, const Ball& ball) {
  check_grid(f.grid, w.grid);
  std::vector<double> a, m;
  a.reserve(ball.count());
  m.reserve(ball.count());
  for (auto i : ball.members()) {
    a.push_back(std::abs(f.values[i]));
    m.push_back(w.values[i] * f.grid.cell_volume());
  }
  return weak_quasinorm(a, m);
}

CheckReport reverse_holder_weight_fit(const Weight& w, const CriticalRadiusField& rho, const BallFamily& family,
                                      const ReverseHolderLadders& ladders) {
  rho.require_valid();
  check_grid(w.field.grid, rho.grid);
  CheckReport rep;
  rep.name = "reverse_holder_weight";
  std::string last_witness;
  for (double eps : ladders.eps) {
    std::vector<GrowthSample> samples;
    for (std::size_t bi = 0; bi < family.size(); ++bi) {
      const Ball& B = family.balls[bi];
      if (B.count() == 0) continue;
      double wmax = 0.0;
      for (auto i : B.members()) wmax = std::max(wmax, w.field.values[i]);
      double s1 = 0.0, s2 = 0.0;
      for (auto i : B.members()) {
        const double u = w.field.values[i] / wmax;
        s1 += u;
        s2 += std::pow(u, 1.0 + eps);
      }
      const double n = static_cast<double>(B.count());
      samples.push_back({std::pow(s2 / n, 1.0 / (1.0 + eps)) / (s1 / n), rho.growth_base(B), bi});
    }
    auto fit = fit_growth(samples, ladders.eta, ladders.c);
    rep.set_measured("raw_ratio_eps_" + format_double(eps), fit.raw_max_ratio);
    last_witness = "ball=" + std::to_string(fit.witness);
    if (fit.pass) {
      rep.pass = true;
      rep.set_constant("eps", eps).set_constant("eta", fit.exponent).set_constant("C", fit.constant);
      rep.set_measured("delta", eps / (1.0 + eps));
      rep.witness = last_witness;
      return rep;
    }
  }
  rep.pass = false;
  rep.witness = last_witness;
  rep.notes.push_back("no (eps, eta, C) on the ladder holds on every ball");
  return rep;
}

CheckReport MeasureComparisonFit::to_report() const {
  CheckReport rep;
  rep.name = "measure_comparison";
  rep.pass = pass;
  if (pass) rep.set_constant("delta", delta).set_constant("eta", eta).set_constant("C", C);
  rep.set_measured("samples", static_cast<double>(samples));
  rep.witness = witness;
  return rep;
}

MeasureComparisonFit measure_comparison_check(const Weight& w, const CriticalRadiusField& rho,
                                              const BallFamily& family, const SubsetPolicy& policy,
                                              const MeasureComparisonLadders& ladders) {
  rho.require_valid();
  check_grid(w.field.grid, rho.grid);
  const Grid& g = w.field.grid;
  struct Sample {
    double w_ratio;
    double leb_ratio;
    double base;
    std::size_t ball;
    std::string kind;
  };
  std::vector<Sample> samples;
  std::mt19937_64 rng(policy.seed);
  std::bernoulli_distribution coin_half(0.5), coin_sparse(0.125);

  for (std::size_t bi = 0; bi < family.size(); ++bi) {
    const Ball& B = family.balls[bi];
    if (B.count() == 0) continue;
    const auto members = B.members();
    const double wB = measure(w.field, B);
    const double base = rho.growth_base(B);
    auto add = [&](const std::vector<std::uint32_t>& E, std::string kind) {
      double wE = 0.0;
      for (auto i : E) wE += w.field.values[i];
      wE *= g.cell_volume();
      samples.push_back({wE / wB, static_cast<double>(E.size()) / static_cast<double>(B.count()), base, bi,
                         std::move(kind)});
    };
    if (policy.whole_and_empty) {
      add(std::vector<std::uint32_t>(members.begin(), members.end()), "whole");
      add({}, "empty");
    }
    if (policy.half_balls) {
      for (int k = 0; k < g.dim(); ++k) {
        std::vector<std::uint32_t> lower, upper;
        for (auto i : members) (g.coords(i)[static_cast<std::size_t>(k)] < B.center()[static_cast<std::size_t>(k)] ? lower : upper).push_back(i);
        add(lower, "half_lower_axis" + std::to_string(k));
        add(upper, "half_upper_axis" + std::to_string(k));
      }
    }
    if (policy.shells) {
      std::vector<std::uint32_t> inner, outer;
      const double r_half = 0.5 * B.radius();
      for (auto i : members) {
        auto x = g.coords(i);
        double s = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - B.center()[k]) * (x[k] - B.center()[k]);
        (std::sqrt(s) < r_half ? inner : outer).push_back(i);
      }
      add(inner, "core");
      add(outer, "shell");
    }
    for (int t = 0; t < policy.random_masks; ++t) {
      std::vector<std::uint32_t> E;
      auto& coin = (t % 2 == 0) ? coin_half : coin_sparse;
      for (auto i : members)
        if (coin(rng)) E.push_back(i);
      add(E, "random" + std::to_string(t));
    }
  }

  MeasureComparisonFit fit;
  fit.samples = samples.size();
  std::string witness;
  for (double delta : ladders.delta) {
    std::vector<GrowthSample> gs;
    std::vector<std::size_t> which;
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const auto& S = samples[s];
      if (S.leb_ratio == 0.0) continue;  // E empty: 0 <= 0
      gs.push_back({S.w_ratio / std::pow(S.leb_ratio, delta), S.base, s});
    }
    auto gf = fit_growth(gs, ladders.eta, ladders.c);
    const auto& ws = samples.empty() ? Sample{0, 0, 1, 0, "none"} : samples[gf.witness];
    witness = "ball=" + std::to_string(ws.ball) + " subset=" + ws.kind;
    if (gf.pass) {
      fit.pass = true;
      fit.delta = delta;
      fit.eta = gf.exponent;
      fit.C = gf.constant;
      fit.witness = witness;
      return fit;
    }
  }
  fit.witness = witness;
  return fit;
}

CheckReport doubling_check(const Weight& w, double p, double theta_prime, const CriticalRadiusField& rho,
                           const BallFamily& family) {
  rho.require_valid();
  check_grid(w.field.grid, rho.grid);
  if (!(p >= 1.0)) throw std::invalid_argument("doubling check needs p >= 1");
  const double exponent = p == 1.0 ? theta_prime : p * theta_prime;
  CheckReport rep;
  rep.name = "doubling";
  double worst_req = 0.0, worst_raw = 0.0;
  std::size_t wb = 0, used = 0;
  for (std::size_t bi = 0; bi < family.size(); ++bi) {
    const Ball& B = family.balls[bi];
    if (B.count() == 0 || !B.inside_domain(2.0)) continue;
    const Ball B2 = dilate(B, 2.0);
    const double ratio = measure(w.field, B2) / measure(w.field, B);
    const double req = ratio / std::pow(1.0 + 2.0 * B.radius() / rho.at_center(B), exponent);
    ++used;
    worst_raw = std::max(worst_raw, ratio);
    if (req > worst_req) worst_req = req, wb = bi;
  }
  rep.set_measured("p", p).set_measured("theta_prime", theta_prime);
  rep.set_measured("balls", static_cast<double>(used));
  rep.set_measured("max_doubling_ratio", worst_raw);
  rep.set_measured("required_C", worst_req);
  const auto rungs = ladder::default_constants();
  auto c = ladder::smallest_at_least(rungs, worst_req);
  rep.pass = c.has_value();
  if (c) rep.set_constant("C", *c);
  rep.witness = "ball=" + std::to_string(wb);
  return rep;
}

}  // namespace schrolab
