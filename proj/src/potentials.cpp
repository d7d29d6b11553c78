#include <schrolab/potentials.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace schrolab {

Potential::Potential(ScalarField f, std::string desc) : field(std::move(f)), descriptor(std::move(desc)) {
  bool positive = false;
  for (double v : field.values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("potential must be finite and nonnegative");
    positive = positive || v > 0.0;
  }
  if (!positive) throw std::invalid_argument("potential is identically zero");
}

Potential Potential::constant(const Grid& g, double c) {
  std::ostringstream os;
  os << "constant(c=" << format_double(c) << ")";
  return Potential(ScalarField::constant(g, c), os.str());
}

Potential Potential::power(const Grid& g, double a) {
  if (a < 0.0) throw std::invalid_argument("potential exponent must be >= 0");
  std::ostringstream os;
  os << "power(a=" << format_double(a) << ")";
  return Potential(ScalarField::sample(g,
                                       [a](std::span<const double> x) {
                                         double s = 0.0;
                                         for (double xi : x) s += xi * xi;
                                         return a == 2.0 ? s : std::pow(std::sqrt(s), a);
                                       }),
                   os.str());
}

Potential Potential::bumps(const Grid& g, const std::vector<Bump>& list) {
  for (const auto& b : list) {
    if (static_cast<int>(b.center.size()) != g.dim()) throw std::invalid_argument("bump center has wrong dimension");
    if (!(b.width > 0.0) || b.height < 0.0) throw std::invalid_argument("bad bump parameters");
  }
  std::ostringstream os;
  os << "bumps(count=" << list.size() << ")";
  return Potential(ScalarField::sample(g,
                                       [&list](std::span<const double> x) {
                                         double v = 0.0;
                                         for (const auto& b : list) {
                                           double s = 0.0;
                                           for (std::size_t k = 0; k < x.size(); ++k) {
                                             const double dx = x[k] - b.center[k];
                                             s += dx * dx;
                                           }
                                           v += b.height * std::exp(-s / (b.width * b.width));
                                         }
                                         return v;
                                       }),
                   os.str());
}

double rho_functional(const Potential& V, std::span<const double> x, double r) {
  const int d = V.field.grid.dim();
  return std::pow(r, 2 - d) * coverage_integral(V.field, x, r);
}

namespace {

double bisect_rho(const Potential& V, std::span<const double> x, double lo, double hi, double tol) {
  if (!(rho_functional(V, x, lo) <= 1.0) || !(rho_functional(V, x, hi) > 1.0))
    throw RhoError("invalid rho bracket");
  while (hi - lo > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (rho_functional(V, x, mid) <= 1.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double compute_rho(const Potential& V, std::span<const double> x, const RhoOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("rho tolerance must be positive");
  const Grid& g = V.field.grid;
  const double diag = g.diagonal();
  const double floor_r = g.spacing() * 1e-9;
  auto F = [&](double r) { return rho_functional(V, x, r); };

  // Smallest radius where the condition holds.
  double r = g.spacing();
  double hi_above = std::numeric_limits<double>::quiet_NaN();
  while (!(F(r) <= 1.0)) {
    hi_above = r;
    r *= 0.5;
    if (r < floor_r) throw RhoError("rho below grid resolution");
  }

  if (opts.full_scan) {
    // Last crossing on a geometric radius ladder up to the diagonal.
    const double step = std::exp2(0.125);
    double last_ok = r;
    double first_bad_after = std::numeric_limits<double>::quiet_NaN();
    for (double t = r * step;; t *= step) {
      const double tt = std::min(t, diag);
      if (F(tt) <= 1.0) {
        last_ok = tt;
        first_bad_after = std::numeric_limits<double>::quiet_NaN();
      } else if (std::isnan(first_bad_after)) {
        first_bad_after = tt;
      }
      if (tt >= diag) break;
    }
    if (std::isnan(first_bad_after)) throw RhoError("rho exceeds domain");
    return bisect_rho(V, x, last_ok, first_bad_after, opts.tol);
  }

  double lo = r;
  double hi = hi_above;
  if (std::isnan(hi)) {
    while (true) {
      const double next = std::min(2.0 * lo, diag);
      if (F(next) > 1.0) {
        hi = next;
        break;
      }
      lo = next;
      if (next >= diag) throw RhoError("rho exceeds domain");
    }
  }
  return bisect_rho(V, x, lo, hi, opts.tol);
}

double compute_rho(const Potential& V, std::size_t index, const RhoOptions& opts) {
  return compute_rho(V, V.field.grid.coords(index), opts);
}

bool CriticalRadiusField::valid() const {
  if (rho_values.size() != grid.size()) return false;
  for (std::size_t i = 0; i < rho_values.size(); ++i) {
    if (!error_mask.empty() && error_mask[i]) return false;
    if (!(rho_values[i] > 0.0) || !std::isfinite(rho_values[i])) return false;
  }
  return true;
}

void CriticalRadiusField::require_valid() const {
  if (!valid()) throw std::runtime_error("critical radius field has failed points");
}

double CriticalRadiusField::at_center(const Ball& ball) const {
  if (ball.grid() != grid) throw std::invalid_argument("grid mismatch");
  auto c = ball.center_index();
  if (!c) throw std::invalid_argument("ball center is not a lattice point");
  return rho_values[*c];
}

CriticalRadiusField CriticalRadiusField::constant(const Grid& g, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  return CriticalRadiusField{g, std::vector<double>(g.size(), rho), 0.0, std::vector<std::uint8_t>(g.size(), 0)};
}

CriticalRadiusField rho_field(const Potential& V, const RhoOptions& opts) {
  const Grid& g = V.field.grid;
  CriticalRadiusField out{g, std::vector<double>(g.size()), opts.tol, std::vector<std::uint8_t>(g.size(), 0)};
  for (std::size_t i = 0; i < g.size(); ++i) {
    try {
      out.rho_values[i] = compute_rho(V, i, opts);
    } catch (const RhoError&) {
      out.rho_values[i] = std::numeric_limits<double>::quiet_NaN();
      out.error_mask[i] = 1;
    }
  }
  return out;
}

CheckReport check_rho_comparability(const CriticalRadiusField& rho, const RhoComparabilityOptions& opts) {
  rho.require_valid();
  const Grid& g = rho.grid;
  const std::size_t N = g.size();
  const std::size_t nn0 = opts.n0_ladder.size();
  if (opts.c_ladder.empty() || nn0 == 0) throw std::invalid_argument("empty comparability ladder");

  // Log-domain maxima of the constant each side requires, per N0.
  std::vector<double> need_lower(nn0, -std::numeric_limits<double>::infinity());
  std::vector<double> need_upper(nn0, -std::numeric_limits<double>::infinity());
  std::vector<std::pair<std::size_t, std::size_t>> wit_lower(nn0), wit_upper(nn0);

  auto visit = [&](std::size_t x, std::size_t y) {
    auto px = g.coords(x), py = g.coords(y);
    double s = 0.0;
    for (std::size_t k = 0; k < px.size(); ++k) s += (px[k] - py[k]) * (px[k] - py[k]);
    const double rx = rho.at(x), ry = rho.at(y);
    const double l = std::log1p(std::sqrt(s) / rx);
    const double lr = std::log(ry / rx);
    for (std::size_t a = 0; a < nn0; ++a) {
      const double n0 = opts.n0_ladder[a];
      const double lo = -lr - n0 * l;
      const double up = lr - n0 / (n0 + 1.0) * l;
      if (lo > need_lower[a]) need_lower[a] = lo, wit_lower[a] = {x, y};
      if (up > need_upper[a]) need_upper[a] = up, wit_upper[a] = {x, y};
    }
  };

  const bool exhaustive = N * N <= opts.max_pairs;
  if (exhaustive) {
    for (std::size_t x = 0; x < N; ++x)
      for (std::size_t y = 0; y < N; ++y) visit(x, y);
  } else {
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<std::size_t> pick(0, N - 1);
    for (std::size_t t = 0; t < opts.max_pairs; ++t) visit(pick(rng), pick(rng));
  }

  CheckReport rep;
  rep.name = "rho_comparability";
  rep.set_measured("pairs", exhaustive ? static_cast<double>(N * N) : static_cast<double>(opts.max_pairs));
  std::optional<double> best_c;
  std::size_t best_a = 0;
  for (double c : opts.c_ladder) {
    for (std::size_t a = 0; a < nn0; ++a) {
      const double need = std::exp(std::max(need_lower[a], need_upper[a]));
      if (need <= c * (1.0 + ladder::kSlack)) {
        best_c = c;
        best_a = a;
        break;
      }
    }
    if (best_c) break;
  }
  for (std::size_t a = 0; a < nn0; ++a) {
    rep.set_measured("required_C_N0_" + std::to_string(opts.n0_ladder[a]),
                     std::exp(std::max(need_lower[a], need_upper[a])));
  }
  if (!best_c) {
    // Report the witness of the most permissive N0.
    std::size_t a = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < nn0; ++k) {
      const double need = std::max(need_lower[k], need_upper[k]);
      if (need < best) best = need, a = k;
    }
    const auto w = need_lower[a] > need_upper[a] ? wit_lower[a] : wit_upper[a];
    rep.pass = false;
    rep.witness = "x=" + std::to_string(w.first) + " y=" + std::to_string(w.second);
    rep.notes.push_back("no (C, N0) on the ladder satisfies every pair");
    return rep;
  }
  const double C = *best_c;
  const int N0 = opts.n0_ladder[best_a];
  rep.set_constant("C", C).set_constant("N0", N0);
  {
    const auto w = need_lower[best_a] > need_upper[best_a] ? wit_lower[best_a] : wit_upper[best_a];
    rep.witness = "x=" + std::to_string(w.first) + " y=" + std::to_string(w.second);
  }

  // Dyadic consequence: 1 + 2^k r/rho(y) >= (1/C) (1 + r/rho(x))^{-N0/(N0+1)} (1 + 2^k r/rho(x)).
  const double a_exp = static_cast<double>(N0) / (N0 + 1.0);
  double worst_margin = std::numeric_limits<double>::infinity();
  std::size_t com2_samples = 0;
  bool com2_ok = true;
  for (std::size_t x : family_centers(g, opts.com2_center_stride)) {
    const double rx = rho.at(x);
    for (double r : opts.com2_radii) {
      Ball B = Ball::at_index(g, x, r);
      for (int k = 1; k <= opts.com2_k_max; ++k) {
        const double R = std::ldexp(r, k);
        const double rhs = std::pow(1.0 + r / rx, -a_exp) * (1.0 + R / rx) / C;
        for (auto y : B.members()) {
          const double lhs = 1.0 + R / rho.at(y);
          const double margin = lhs / rhs;
          ++com2_samples;
          if (margin < worst_margin) worst_margin = margin;
          if (lhs < rhs * (1.0 - ladder::kSlack)) com2_ok = false;
        }
      }
    }
  }
  rep.set_measured("com2_samples", static_cast<double>(com2_samples));
  rep.set_measured("com2_worst_margin", worst_margin);
  if (!com2_ok) rep.notes.push_back("dyadic consequence violated for the fitted constants");
  rep.pass = com2_ok;
  return rep;
}

RHReport reverse_holder_report(const Potential& V, double q, const BallFamily& family) {
  if (!(q > 1.0)) throw std::invalid_argument("reverse Holder exponent must exceed 1");
  RHReport rep;
  rep.q = q;
  for (std::size_t bi = 0; bi < family.balls.size(); ++bi) {
    const Ball& B = family.balls[bi];
    if (B.grid() != V.field.grid) throw std::invalid_argument("grid mismatch");
    double vmax = 0.0;
    for (auto i : B.members()) vmax = std::max(vmax, V.field.values[i]);
    if (B.count() == 0 || vmax == 0.0) {
      rep.skipped_balls.push_back(bi);
      continue;
    }
    // Normalized by the ball maximum: the ratio is scale invariant bit for bit.
    double s1 = 0.0, sq = 0.0;
    for (auto i : B.members()) {
      const double u = V.field.values[i] / vmax;
      s1 += u;
      sq += std::pow(u, q);
    }
    const double n = static_cast<double>(B.count());
    const double ratio = std::pow(sq / n, 1.0 / q) / (s1 / n);
    if (ratio < 1.0 - ladder::kSlack) rep.ratio_at_least_one = false;
    if (!rep.worst_ball || ratio > rep.constant) {
      rep.constant = ratio;
      rep.worst_ball = bi;
    }
  }
  return rep;
}

}  // namespace schrolab
