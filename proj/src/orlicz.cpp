#include <schrolab/orlicz.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace schrolab {

namespace {

void check_grid(const Grid& a, const Grid& b) {
  if (a != b) throw std::invalid_argument("grid mismatch");
}

double log_plus(double t) { return t > 1.0 ? std::log(t) : 0.0; }

// |b - b_B| over the members of B, with b_B the unweighted mean.
std::vector<double> oscillation_values(const ScalarField& b, const Ball& B) {
  const double mean = ball_mean(b, B);
  std::vector<double> g;
  g.reserve(B.count());
  for (auto i : B.members()) g.push_back(std::abs(b.values[i] - mean));
  return g;
}

}  // namespace

Symbol::Symbol(ScalarField f, std::string desc) : field(std::move(f)), descriptor(std::move(desc)) {
  for (double v : field.values)
    if (!std::isfinite(v)) throw std::invalid_argument("symbol samples must be finite");
}

Symbol Symbol::constant(const Grid& g, double c) {
  return Symbol(ScalarField::constant(g, c), "constant(c=" + format_double(c) + ")");
}

Symbol Symbol::log_bracket(const Grid& g) {
  return Symbol(ScalarField::sample(g,
                                    [](std::span<const double> x) {
                                      double s = 0.0;
                                      for (double xi : x) s += xi * xi;
                                      return std::log1p(std::sqrt(s));
                                    }),
                "log_bracket");
}

YoungFunction YoungFunction::llogl_power(int m) {
  if (m < 1) throw std::invalid_argument("Phi_m needs m >= 1");
  return {m == 1 ? YoungKind::LlogL : YoungKind::LlogLPower, m};
}

double YoungFunction::operator()(double t) const {
  switch (kind) {
    case YoungKind::Identity:
      return t;
    case YoungKind::LlogL:
      return t * (1.0 + log_plus(t));
    case YoungKind::LlogLPower:
      return t * std::pow(1.0 + log_plus(t), m);
    case YoungKind::ExpMinusOne:
      return std::expm1(t);
  }
  return t;
}

std::string YoungFunction::name() const {
  switch (kind) {
    case YoungKind::Identity:
      return "t";
    case YoungKind::LlogL:
      return "t(1+log+t)";
    case YoungKind::LlogLPower:
      return "t(1+log+t)^" + std::to_string(m);
    case YoungKind::ExpMinusOne:
      return "exp(t)-1";
  }
  return "?";
}

CheckReport young_function_sanity(const YoungFunction& A, std::span<const double> samples) {
  CheckReport rep;
  rep.name = "young_function:" + A.name();
  bool ok = A(0.0) == 0.0;
  if (!ok) rep.notes.push_back("A(0) != 0");
  std::vector<double> t(samples.begin(), samples.end());
  std::sort(t.begin(), t.end());
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (t[k] == t[k - 1]) continue;
    if (!(A(t[k]) > A(t[k - 1]))) {
      ok = false;
      rep.witness = "not increasing at t=" + format_double(t[k]);
    }
    const double mid = 0.5 * (t[k] + t[k - 1]);
    const double chord = 0.5 * (A(t[k]) + A(t[k - 1]));
    if (A(mid) > chord * (1.0 + ladder::kSlack)) {
      ok = false;
      rep.witness = "not convex near t=" + format_double(mid);
    }
  }
  rep.pass = ok;
  rep.set_measured("samples", static_cast<double>(t.size()));
  return rep;
}

double luxemburg_norm(std::span<const double> values, std::span<const double> masses, const YoungFunction& A,
                      double tol) {
  if (values.size() != masses.size()) throw std::invalid_argument("value/mass length mismatch");
  double fmax = 0.0, total = 0.0, first = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    fmax = std::max(fmax, std::abs(values[i]));
    total += masses[i];
    first += std::abs(values[i]) * masses[i];
  }
  if (fmax == 0.0) return 0.0;
  if (!(total > 0.0)) throw std::invalid_argument("Luxemburg norm over a null set");
  // A(t) = t: the norm is the plain average.
  if (A.kind == YoungKind::Identity) return first / total;

  auto avg = [&](double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += masses[i] * A(std::abs(values[i]) / lambda);
    return s / total;
  };
  const double lambda_max = std::ldexp(fmax, 60);
  double hi = fmax;
  while (!(avg(hi) <= 1.0)) {
    hi *= 2.0;
    if (hi > lambda_max) throw LuxemburgError("Luxemburg bracket not found");
  }
  double lo = 0.5 * hi;
  while (avg(lo) <= 1.0) {
    hi = lo;
    lo *= 0.5;
  }
  while (hi - lo > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (avg(mid) <= 1.0) hi = mid;
    else lo = mid;
  }
  return hi;
}

double luxemburg_norm(const ScalarField& f, const Ball& ball, const YoungFunction& A) {
  check_grid(f.grid, ball.grid());
  std::vector<double> v, m;
  for (auto i : ball.members()) {
    v.push_back(f.values[i]);
    m.push_back(1.0);
  }
  return luxemburg_norm(v, m, A);
}

double weighted_luxemburg_norm(const ScalarField& f, const Ball& ball, const YoungFunction& A,
                               const ScalarField& w) {
  check_grid(f.grid, ball.grid());
  check_grid(w.grid, ball.grid());
  std::vector<double> v, m;
  for (auto i : ball.members()) {
    v.push_back(f.values[i]);
    m.push_back(w.values[i]);
  }
  return luxemburg_norm(v, m, A);
}

BmoCharacteristic bmo_characteristic(const Symbol& b, double theta, const CriticalRadiusField& rho,
                                     const BallFamily& family) {
  rho.require_valid();
  check_grid(b.field.grid, rho.grid);
  BmoCharacteristic out;
  out.theta = theta;
  out.oscillations.assign(family.size(), 0.0);
  for (std::size_t bi = 0; bi < family.size(); ++bi) {
    const Ball& B = family.balls[bi];
    if (B.count() == 0) continue;
    const auto g = oscillation_values(b.field, B);
    const double osc = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    out.oscillations[bi] = osc;
    const double v = osc * std::pow(rho.growth_base(B), -theta);
    if (!out.argmax_ball || v > out.value) {
      out.value = v;
      out.argmax_ball = bi;
    }
  }
  return out;
}

CheckReport john_nirenberg_tail(const Symbol& b, double theta, int n0, double bmo_norm,
                                const CriticalRadiusField& rho, const BallFamily& family, const Weight* w,
                                const TailLadders& ladders) {
  rho.require_valid();
  check_grid(b.field.grid, rho.grid);
  const Grid& g = b.field.grid;
  const double theta_star = (n0 + 1.0) * theta;
  CheckReport rep;
  rep.name = w ? "john_nirenberg_tail_weighted" : "john_nirenberg_tail";
  rep.set_measured("bmo_norm", bmo_norm).set_measured("theta_star", theta_star);

  // Per ball: distinct values v of |b - b_B| with the mass of {|b - b_B| >= v}.
  struct Level {
    double v;
    double mass_at_least;
  };
  struct BallTail {
    std::vector<Level> levels;
    double total_mass;
    double base;
  };
  std::vector<BallTail> tails;
  for (const Ball& B : family.balls) {
    if (B.count() == 0) continue;
    const auto osc = oscillation_values(b.field, B);
    std::vector<std::size_t> order(osc.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return osc[a] > osc[c]; });
    BallTail t{{}, 0.0, rho.growth_base(B)};
    double mass = 0.0;
    std::size_t k = 0;
    const auto members = B.members();
    while (k < order.size()) {
      const double v = osc[order[k]];
      if (!(v > 0.0)) break;
      while (k < order.size() && osc[order[k]] == v)
        mass += (w ? w->field.values[members[order[k]]] : 1.0) * g.cell_volume(), ++k;
      t.levels.push_back({v, mass});
    }
    t.total_mass = w ? measure(w->field, B) : B.discrete_volume();
    tails.push_back(std::move(t));
  }

  bool any_level = false;
  for (const auto& t : tails) any_level = any_level || !t.levels.empty();
  if (!any_level || bmo_norm == 0.0) {
    rep.pass = true;
    rep.set_constant("C1", ladders.c1.front()).set_constant("C2", ladders.c2.back());
    if (w) rep.set_constant("eta", ladders.eta.front());
    rep.notes.push_back("b is constant on every ball: distribution identically zero");
    return rep;
  }

  std::vector<double> c2_desc(ladders.c2);
  std::sort(c2_desc.rbegin(), c2_desc.rend());
  const std::vector<double> no_eta{0.0};
  const auto& etas = w ? ladders.eta : no_eta;
  std::string witness;
  for (double c2 : c2_desc) {
    std::vector<GrowthSample> samples;
    std::vector<double> lambdas;
    for (std::size_t ti = 0; ti < tails.size(); ++ti) {
      const auto& t = tails[ti];
      const double a = std::pow(t.base, -theta_star) * c2 / bmo_norm;
      for (const auto& L : t.levels) {
        // sup over lambda in the step below v is approached at lambda -> v^-.
        samples.push_back({L.mass_at_least * std::exp(a * L.v) / t.total_mass, t.base, lambdas.size()});
        lambdas.push_back(L.v);
      }
    }
    auto fit = fit_growth(samples, etas, ladders.c1);
    witness = "lambda=" + format_double(lambdas.empty() ? 0.0 : lambdas[fit.witness]);
    if (fit.pass) {
      rep.pass = true;
      rep.set_constant("C1", fit.constant).set_constant("C2", c2);
      if (w) rep.set_constant("eta", fit.exponent);
      rep.set_measured("required_C1", fit.required);
      rep.witness = witness;
      return rep;
    }
  }
  rep.pass = false;
  rep.witness = witness;
  rep.notes.push_back("no (C1, C2) on the ladder bounds the tail");
  return rep;
}

CheckReport john_nirenberg_tail(const Symbol& b, double theta, int n0, double bmo_norm,
                                const CriticalRadiusField& rho, const Ball& ball, const Weight* w) {
  BallFamily fam;
  fam.balls.push_back(ball);
  return john_nirenberg_tail(b, theta, n0, bmo_norm, rho, fam, w);
}

CheckReport holder_orlicz_check(const ScalarField& f, const ScalarField& g, const Ball& ball,
                                const ScalarField* w) {
  check_grid(f.grid, g.grid);
  check_grid(f.grid, ball.grid());
  CheckReport rep;
  rep.name = w ? "holder_orlicz_weighted" : "holder_orlicz";
  double lhs = 0.0, total = 0.0;
  for (auto i : ball.members()) {
    const double m = w ? w->values[i] : 1.0;
    lhs += std::abs(f.values[i] * g.values[i]) * m;
    total += m;
  }
  lhs /= total;
  const double nf = w ? weighted_luxemburg_norm(f, ball, YoungFunction::llogl(), *w)
                      : luxemburg_norm(f, ball, YoungFunction::llogl());
  const double ng = w ? weighted_luxemburg_norm(g, ball, YoungFunction::exp_minus_one(), *w)
                      : luxemburg_norm(g, ball, YoungFunction::exp_minus_one());
  const double rhs_unit = nf * ng;
  rep.set_measured("lhs", lhs).set_measured("norm_llogl", nf).set_measured("norm_expl", ng);
  if (!w) {
    rep.set_constant("C", 2.0);
    rep.pass = lhs <= 2.0 * rhs_unit * (1.0 + ladder::kSlack);
  } else {
    const double need = rhs_unit > 0.0 ? lhs / rhs_unit : (lhs > 0.0 ? INFINITY : 0.0);
    rep.set_measured("required_C", need);
    const std::vector<double> rungs = ladder::powers_of_two(0, 10);
    auto c = ladder::smallest_at_least(rungs, need);
    rep.pass = c.has_value();
    if (c) rep.set_constant("C", *c);
  }
  return rep;
}

CheckReport oscillation_weighted_lp_check(const Symbol& b, const Weight& w, double p,
                                          const CriticalRadiusField& rho, const BallFamily& family) {
  rho.require_valid();
  check_grid(b.field.grid, w.field.grid);
  if (!(p >= 1.0)) throw std::invalid_argument("needs p >= 1");
  const double cv = b.field.grid.cell_volume();
  std::vector<GrowthSample> samples;
  for (std::size_t bi = 0; bi < family.size(); ++bi) {
    const Ball& B = family.balls[bi];
    if (B.count() == 0) continue;
    const auto osc = oscillation_values(b.field, B);
    const auto members = B.members();
    double s = 0.0;
    for (std::size_t k = 0; k < osc.size(); ++k) s += std::pow(osc[k], p) * w.field.values[members[k]];
    s *= cv;
    const double lhs = std::pow(s, 1.0 / p);
    const double rhs_unit = std::pow(measure(w.field, B), 1.0 / p);
    samples.push_back({lhs / rhs_unit, rho.growth_base(B), bi});
  }
  const auto ex = ladder::default_exponents();
  const auto cs = ladder::default_constants();
  auto fit = fit_growth(samples, ex, cs);
  CheckReport rep;
  rep.name = "oscillation_weighted_lp";
  rep.pass = fit.pass;
  rep.set_measured("p", p).set_measured("raw_max_ratio", fit.raw_max_ratio);
  if (fit.pass) rep.set_constant("mu", fit.exponent).set_constant("C", fit.constant);
  rep.witness = "ball=" + std::to_string(fit.witness);
  return rep;
}

CheckReport exp_integrability_check(const Symbol& b, const Weight& w, double theta, int n0,
                                    const CriticalRadiusField& rho, const BallFamily& family) {
  rho.require_valid();
  check_grid(b.field.grid, w.field.grid);
  const double bmo = bmo_characteristic(b, theta, rho, family).value;
  const double theta_star = (n0 + 1.0) * theta;
  const double cv = b.field.grid.cell_volume();
  CheckReport rep;
  rep.name = "exp_integrability";
  rep.set_measured("bmo_norm", bmo).set_measured("theta_star", theta_star);
  const auto gammas = ladder::powers_of_two(-10, 0);
  const auto ex = ladder::default_exponents();
  const auto cs = ladder::default_constants();
  std::string witness;
  for (auto it = gammas.rbegin(); it != gammas.rend(); ++it) {
    const double gamma = *it;
    std::vector<GrowthSample> samples;
    for (std::size_t bi = 0; bi < family.size(); ++bi) {
      const Ball& B = family.balls[bi];
      if (B.count() == 0) continue;
      const double base = rho.growth_base(B);
      const auto osc = oscillation_values(b.field, B);
      const auto members = B.members();
      double s = 0.0;
      if (bmo > 0.0) {
        const double a = std::pow(base, -theta_star) * gamma / bmo;
        for (std::size_t k = 0; k < osc.size(); ++k) s += std::expm1(a * osc[k]) * w.field.values[members[k]];
      }
      s *= cv;
      samples.push_back({s / measure(w.field, B), base, bi});
    }
    auto fit = fit_growth(samples, ex, cs);
    witness = "ball=" + std::to_string(fit.witness);
    if (fit.pass) {
      rep.pass = true;
      rep.set_constant("gamma", gamma).set_constant("eta", fit.exponent).set_constant("C", fit.constant);
      rep.witness = witness;
      return rep;
    }
  }
  rep.pass = false;
  rep.witness = witness;
  rep.notes.push_back("no gamma on the ladder passes");
  return rep;
}

CheckReport dyadic_mean_drift_check(const Symbol& b, double theta2, const CriticalRadiusField& rho,
                                    const BallFamily& family, int k_max) {
  rho.require_valid();
  check_grid(b.field.grid, rho.grid);
  CheckReport rep;
  rep.name = "dyadic_mean_drift";
  double worst = 0.0;
  std::string witness;
  std::size_t truncated = 0, samples = 0;
  std::vector<double> max_drift(static_cast<std::size_t>(k_max + 1), 0.0);
  for (std::size_t bi = 0; bi < family.size(); ++bi) {
    const Ball& B = family.balls[bi];
    if (B.count() == 0) continue;
    const double mean_B = ball_mean(b.field, B);
    const double rx = rho.at_center(B);
    for (int k = 0; k <= k_max; ++k) {
      const double t = std::ldexp(1.0, k + 1);
      if (!B.inside_domain(t)) {
        ++truncated;
        break;
      }
      const double drift = std::abs(ball_mean(b.field, dilate(B, t)) - mean_B);
      max_drift[static_cast<std::size_t>(k)] = std::max(max_drift[static_cast<std::size_t>(k)], drift);
      const double req = drift / ((k + 1.0) * std::pow(1.0 + t * B.radius() / rx, theta2));
      ++samples;
      if (req > worst) {
        worst = req;
        witness = "ball=" + std::to_string(bi) + " k=" + std::to_string(k);
      }
    }
  }
  rep.set_measured("theta2", theta2).set_measured("required_C", worst);
  rep.set_measured("samples", static_cast<double>(samples));
  for (int k = 0; k <= k_max; ++k)
    rep.set_measured("max_drift_k" + std::to_string(k), max_drift[static_cast<std::size_t>(k)]);
  if (truncated > 0)
    rep.notes.push_back(std::to_string(truncated) + " balls truncated in k: dilate leaves the domain");
  const auto cs = ladder::default_constants();
  auto c = ladder::smallest_at_least(cs, worst);
  rep.pass = c.has_value();
  if (c) rep.set_constant("C", *c);
  rep.witness = witness;
  return rep;
}

}  // namespace schrolab
