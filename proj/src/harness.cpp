#include <schrolab/harness.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace schrolab {

namespace {

Json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

std::size_t random_center(const Grid& g, std::mt19937_64& rng) {
  const int n = g.points_per_axis();
  std::uniform_int_distribution<int> pick(n / 4, n - 1 - n / 4);
  std::vector<int> multi(static_cast<std::size_t>(g.dim()));
  for (auto& i : multi) i = pick(rng);
  return g.index_of(multi);
}

double dist_to(const Grid& g, std::size_t i, std::span<const double> c) {
  const auto p = g.coords(i);
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) s += (p[k] - c[k]) * (p[k] - c[k]);
  return std::sqrt(s);
}

bool nonzero(const std::vector<double>& v) {
  return std::any_of(v.begin(), v.end(), [](double x) { return x != 0.0; });
}

std::vector<double> abs_values(const ScalarField& f) {
  std::vector<double> a(f.values.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(f.values[i]);
  return a;
}

GrowthFit fit_default(std::span<const GrowthSample> samples) {
  const auto ex = ladder::default_exponents();
  const auto cs = ladder::default_constants();
  return fit_growth(samples, ex, cs);
}

void finish(BoundednessReport& rep, const GrowthFit& fit, std::span<const TestFunction> suite,
            const std::vector<std::string>& tags, std::size_t samples) {
  rep.pass = fit.pass;
  if (fit.pass) {
    rep.exponent = fit.exponent;
    rep.constant = fit.constant;
  } else {
    rep.notes.push_back("ladder exhausted");
  }
  rep.measured.push_back({"max_ratio", rep.max_ratio()});
  rep.measured.push_back({"required_C", fit.required});
  rep.measured.push_back({"samples", static_cast<double>(samples)});
  rep.measured.push_back({"functions", static_cast<double>(suite.size())});
  if (!tags.empty()) rep.witness = tags[fit.witness];
  // Where the worst raw ratio lives, e.g. whether the kernel-column probe wins.
  if (!rep.ratios.empty()) {
    const auto it = std::max_element(rep.ratios.begin(), rep.ratios.end());
    rep.notes.push_back("max raw ratio at " + suite[static_cast<std::size_t>(it - rep.ratios.begin())].name);
  }
}

void check_outputs(std::span<const TestFunction> suite, std::span<const ScalarField> outputs) {
  if (suite.size() != outputs.size()) throw std::invalid_argument("suite/output length mismatch");
}

}  // namespace

const char* generator_name(Generator g) {
  switch (g) {
    case Generator::Gaussian:
      return "gaussian";
    case Generator::BallIndicator:
      return "ball";
    case Generator::ShellIndicator:
      return "shell";
    case Generator::KernelColumn:
      return "kernel";
    case Generator::Oscillatory:
      return "oscillatory";
  }
  return "?";
}

Generator generator_from_name(std::string_view name) {
  for (auto g : {Generator::Gaussian, Generator::BallIndicator, Generator::ShellIndicator, Generator::KernelColumn,
                 Generator::Oscillatory})
    if (name == generator_name(g)) return g;
  throw std::invalid_argument("unknown generator: " + std::string(name));
}

std::vector<TestFunction> TestFunctionSuite::generate(const Grid& g, const SpectralOperator* op) const {
  if (count < 0) throw std::invalid_argument("suite count must be >= 0");
  std::vector<Generator> gens;
  for (auto gen : generators)
    if (gen != Generator::KernelColumn || op) gens.push_back(gen);
  if (gens.empty()) throw std::invalid_argument("no usable generator");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double L = g.half_width();
  const double h = g.spacing();
  std::vector<TestFunction> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const Generator gen = gens[static_cast<std::size_t>(k) % gens.size()];
    std::vector<double> v(g.size(), 0.0);
    const Point c = g.point(random_center(g, rng));
    switch (gen) {
      case Generator::Gaussian: {
        const double s = L * (0.15 + 0.35 * unit(rng));
        for (std::size_t i = 0; i < v.size(); ++i) {
          const double r = dist_to(g, i, c);
          v[i] = normal(rng) * std::exp(-r * r / (s * s));
        }
        break;
      }
      case Generator::BallIndicator: {
        const double r = h + (0.5 * L - h) * unit(rng);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = dist_to(g, i, c) < r ? 1.0 : 0.0;
        break;
      }
      case Generator::ShellIndicator: {
        const double r = h + (0.25 * L - h) * unit(rng);
        for (std::size_t i = 0; i < v.size(); ++i) {
          const double t = dist_to(g, i, c);
          v[i] = (t >= r && t < 2.0 * r) ? 1.0 : 0.0;
        }
        break;
      }
      case Generator::KernelColumn: {
        const std::size_t x = g.index_at(c).value();
        const int j = static_cast<int>(unit(rng) * g.dim()) % g.dim();
        for (std::size_t y = 0; y < v.size(); ++y) v[y] = transform_kernel(*op, Transform::Riesz, j, x, y);
        break;
      }
      case Generator::Oscillatory: {
        std::vector<double> freq(static_cast<std::size_t>(g.dim()));
        for (auto& q : freq) q = (2.0 * unit(rng) - 1.0) * 3.14159265358979 / (2.0 * h);
        const double phase = 6.283185307179586 * unit(rng);
        const double s = 0.5 * L;
        for (std::size_t i = 0; i < v.size(); ++i) {
          const auto p = g.coords(i);
          double arg = phase;
          for (std::size_t q = 0; q < freq.size(); ++q) arg += freq[q] * p[q];
          const double r = dist_to(g, i, c);
          v[i] = std::cos(arg) * std::exp(-r * r / (s * s));
        }
        break;
      }
    }
    // The lattice center always carries mass for the indicator families.
    if (!nonzero(v)) v[g.index_at(c).value()] = 1.0;
    out.push_back({std::string(generator_name(gen)) + "#" + std::to_string(k), ScalarField(g, std::move(v))});
  }
  return out;
}

double BoundednessReport::max_ratio() const {
  double m = 0.0;
  for (double r : ratios) m = std::max(m, r);
  return m;
}

Json BoundednessReport::to_json() const {
  Json j;
  j["record"] = "boundedness";
  j["theorem"] = theorem;
  j["transform"] = transform;
  j["pass"] = pass;
  j["input_theta"] = input_theta;
  j["fitted"] = {{"vartheta", pass ? Json(exponent) : Json(nullptr)}, {"C", pass ? Json(constant) : Json(nullptr)}};
  Json m = Json::object();
  for (const auto& nv : measured) m[nv.name] = number_or_null(nv.value);
  j["measured"] = m;
  Json r = Json::array();
  for (double v : ratios) r.push_back(number_or_null(v));
  j["ratios"] = r;
  j["witness"] = witness;
  j["notes"] = notes;
  return j;
}

BoundednessReport lebesgue_boundedness_suite(const SpectralOperator& op, Transform t, const Weight& w, double p,
                                             std::span<const TestFunction> suite) {
  if (!(p >= 1.0)) throw std::invalid_argument("needs p >= 1");
  BoundednessReport rep;
  rep.theorem = p > 1.0 ? "lebesgue_strong" : "lebesgue_weak";
  rep.transform = transform_name(t);
  std::vector<GrowthSample> samples;
  std::vector<std::string> tags;
  for (std::size_t k = 0; k < suite.size(); ++k) {
    const auto& f = suite[k].f;
    const double nf = weighted_lp_norm(f, w.field, p);
    if (!(nf > 0.0)) {
      rep.notes.push_back("skipped zero-norm " + suite[k].name);
      rep.ratios.push_back(0.0);
      continue;
    }
    const auto out = apply_transform(op, t, f).magnitude();
    const double num = p > 1.0 ? weighted_lp_norm(out, w.field, p) : weak_l1_quasinorm(out, w.field);
    rep.ratios.push_back(num / nf);
    samples.push_back({num / nf, 1.0, tags.size()});
    tags.push_back("f=" + suite[k].name);
  }
  const std::vector<double> ex{0.0};
  const auto cs = ladder::default_constants();
  finish(rep, fit_growth(samples, ex, cs), suite, tags, samples.size());
  rep.measured.push_back({"p", p});
  return rep;
}

std::vector<ScalarField> transform_outputs(const SpectralOperator& op, Transform t,
                                           std::span<const TestFunction> suite) {
  std::vector<ScalarField> out;
  out.reserve(suite.size());
  for (const auto& tf : suite) out.push_back(apply_transform(op, t, tf.f).magnitude());
  return out;
}

std::vector<ScalarField> commutator_outputs(const SpectralOperator& op, Transform t, const Symbol& b, int m,
                                            std::span<const TestFunction> suite) {
  std::vector<ScalarField> out;
  out.reserve(suite.size());
  for (const auto& tf : suite) out.push_back(commutator_apply(op, b, tf.f, m, t).magnitude());
  return out;
}

namespace {

// Shared protocol of the strong and weak Morrey suites: normalize the input
// norm to one, then fit every per-ball output quantity.
BoundednessReport morrey_protocol(std::string theorem, std::string transform, const Weight& w,
                                  const MorreyParams& input, const MorreyParams& output,
                                  const CriticalRadiusField& rho, const BallFamily& family,
                                  std::span<const TestFunction> suite, std::span<const ScalarField> outputs) {
  check_outputs(suite, outputs);
  BoundednessReport rep;
  rep.theorem = std::move(theorem);
  rep.transform = std::move(transform);
  rep.input_theta = input.theta;
  std::vector<GrowthSample> samples;
  std::vector<std::string> tags;
  for (std::size_t k = 0; k < suite.size(); ++k) {
    const double nf = morrey_norm(suite[k].f, w, input, rho, family).value;
    if (!(nf > 0.0)) {
      rep.notes.push_back("skipped zero-norm " + suite[k].name);
      rep.ratios.push_back(0.0);
      continue;
    }
    const auto res = evaluate_morrey(outputs[k], w, output, rho, family);
    double best = 0.0;
    for (const auto& e : res.entries) {
      const double v = e.local / nf;
      best = std::max(best, v);
      samples.push_back({v, rho.growth_base(family.balls[e.ball]), tags.size()});
      tags.push_back("f=" + suite[k].name + " B=" + std::to_string(e.ball));
    }
    rep.ratios.push_back(best);
  }
  finish(rep, fit_default(samples), suite, tags, samples.size());
  rep.measured.push_back({"p", input.p});
  rep.measured.push_back({"kappa", input.kappa});
  rep.measured.push_back({"balls", static_cast<double>(family.size())});
  return rep;
}

}  // namespace

BoundednessReport morrey_boundedness_from_outputs(std::string theorem, std::string transform, const Weight& w,
                                                  const MorreyParams& params, const CriticalRadiusField& rho,
                                                  const BallFamily& family, std::span<const TestFunction> suite,
                                                  std::span<const ScalarField> outputs) {
  if (params.flavor != MorreyFlavor::Strong) throw std::invalid_argument("strong Morrey suite needs strong params");
  MorreyParams out = params;
  out.theta = 0.0;
  return morrey_protocol(std::move(theorem), std::move(transform), w, params, out, rho, family, suite, outputs);
}

BoundednessReport weak_morrey_from_outputs(std::string theorem, std::string transform, const Weight& w,
                                           const MorreyParams& params, const CriticalRadiusField& rho,
                                           const BallFamily& family, std::span<const TestFunction> suite,
                                           std::span<const ScalarField> outputs) {
  MorreyParams in{1.0, params.kappa, params.theta, MorreyFlavor::Strong};
  MorreyParams out{1.0, params.kappa, 0.0, MorreyFlavor::Weak};
  return morrey_protocol(std::move(theorem), std::move(transform), w, in, out, rho, family, suite, outputs);
}

BoundednessReport endpoint_from_outputs(std::string theorem, std::string transform, int m, const Weight& w,
                                        double kappa, double theta, const CriticalRadiusField& rho,
                                        const BallFamily& family, std::span<const TestFunction> suite,
                                        std::span<const ScalarField> outputs, const EndpointOptions& opts) {
  check_outputs(suite, outputs);
  if (opts.lambda_points < 1 || !(opts.lambda_lo > 0.0) || !(opts.lambda_hi >= opts.lambda_lo))
    throw std::invalid_argument("lambda grid must be positive");
  const MorreyParams rhs_params{1.0, kappa, theta, MorreyFlavor::LlogL};
  rhs_params.validate();
  const YoungFunction phi_m = YoungFunction::llogl_power(m);
  const Grid& g = w.field.grid;
  const double cv = g.cell_volume();

  // w-measure and w(B)^{-kappa} per ball do not depend on f or lambda.
  std::vector<double> scale(family.size(), 0.0), base(family.size(), 1.0);
  for (std::size_t bi = 0; bi < family.size(); ++bi) {
    if (family.balls[bi].count() == 0) continue;
    scale[bi] = std::pow(measure(w.field, family.balls[bi]), -kappa);
    base[bi] = rho.growth_base(family.balls[bi]);
  }

  BoundednessReport rep;
  rep.theorem = std::move(theorem);
  rep.transform = std::move(transform);
  rep.input_theta = theta;
  std::vector<GrowthSample> samples;
  std::vector<std::string> tags;
  std::size_t zero_outputs = 0;
  for (std::size_t k = 0; k < suite.size(); ++k) {
    const auto& o = outputs[k].values;
    std::vector<double> sorted(o);
    std::sort(sorted.begin(), sorted.end());
    double med = sorted[sorted.size() / 2];
    if (!(med > 0.0)) {
      const auto pos = std::upper_bound(sorted.begin(), sorted.end(), 0.0);
      med = pos == sorted.end() ? 0.0 : *(pos + (sorted.end() - pos) / 2);
    }
    if (!(med > 0.0)) {
      // Output identically zero: the left side vanishes for every lambda.
      ++zero_outputs;
      rep.ratios.push_back(0.0);
      for (std::size_t bi = 0; bi < family.size(); ++bi)
        if (family.balls[bi].count() > 0) samples.push_back({0.0, base[bi], tags.size()});
      tags.push_back("f=" + suite[k].name);
      continue;
    }
    const auto af = abs_values(suite[k].f);
    double best = 0.0;
    for (int li = 0; li < opts.lambda_points; ++li) {
      const double frac = opts.lambda_points == 1 ? 0.0 : static_cast<double>(li) / (opts.lambda_points - 1);
      const double lambda = med * opts.lambda_lo * std::pow(opts.lambda_hi / opts.lambda_lo, frac);
      std::vector<double> phi(af.size());
      for (std::size_t i = 0; i < af.size(); ++i) phi[i] = phi_m(af[i] / lambda);
      const double rhs = lloglog_morrey_norm(ScalarField(g, std::move(phi)), w, rhs_params, rho, family).value;
      if (!(rhs > 0.0)) continue;
      for (std::size_t bi = 0; bi < family.size(); ++bi) {
        const Ball& B = family.balls[bi];
        if (B.count() == 0) continue;
        double level = 0.0;
        for (auto i : B.members())
          if (o[i] > lambda) level += w.field.values[i];
        const double v = scale[bi] * level * cv / rhs;
        best = std::max(best, v);
        samples.push_back({v, base[bi], tags.size()});
        tags.push_back("f=" + suite[k].name + " B=" + std::to_string(bi) + " lambda=" + format_double(lambda));
      }
    }
    rep.ratios.push_back(best);
  }
  finish(rep, fit_default(samples), suite, tags, samples.size());
  rep.measured.push_back({"m", static_cast<double>(m)});
  rep.measured.push_back({"kappa", kappa});
  rep.measured.push_back({"lambda_points", static_cast<double>(opts.lambda_points)});
  if (zero_outputs > 0) rep.notes.push_back(std::to_string(zero_outputs) + " outputs identically zero");
  return rep;
}

BoundednessReport morrey_boundedness_suite(const SpectralOperator& op, Transform t, const Weight& w,
                                           const MorreyParams& params, const CriticalRadiusField& rho,
                                           const BallFamily& family, std::span<const TestFunction> suite) {
  const auto outs = transform_outputs(op, t, suite);
  return morrey_boundedness_from_outputs("morrey_strong", transform_name(t), w, params, rho, family, suite, outs);
}

BoundednessReport weak_morrey_boundedness_suite(const SpectralOperator& op, Transform t, const Weight& w,
                                                double kappa, double theta, const CriticalRadiusField& rho,
                                                const BallFamily& family, std::span<const TestFunction> suite) {
  const auto outs = transform_outputs(op, t, suite);
  return weak_morrey_from_outputs("morrey_weak", transform_name(t), w, {1.0, kappa, theta, MorreyFlavor::Weak},
                                  rho, family, suite, outs);
}

BoundednessReport commutator_boundedness_suite(const SpectralOperator& op, Transform t, const Symbol& b, int m,
                                               const Weight& w, const MorreyParams& params,
                                               const CriticalRadiusField& rho, const BallFamily& family,
                                               std::span<const TestFunction> suite) {
  const auto outs = commutator_outputs(op, t, b, m, suite);
  return morrey_boundedness_from_outputs("commutator_m" + std::to_string(m), transform_name(t), w, params, rho,
                                         family, suite, outs);
}

BoundednessReport endpoint_lloglog_suite(const SpectralOperator& op, Transform t, const Symbol& b, int m,
                                         const Weight& w, double kappa, double theta,
                                         const CriticalRadiusField& rho, const BallFamily& family,
                                         std::span<const TestFunction> suite, const EndpointOptions& opts) {
  const auto outs = commutator_outputs(op, t, b, m, suite);
  return endpoint_from_outputs("endpoint_m" + std::to_string(m), transform_name(t), m, w, kappa, theta, rho,
                               family, suite, outs, opts);
}

std::string render_summary(std::span<const Json> records) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-44s %-5s %s\n", "record", "pass", "fitted");
  os << line;
  std::size_t pass = 0, fail = 0;
  for (const auto& r : records) {
    std::string name, fitted;
    if (r.value("record", "") == "boundedness") {
      name = r.value("theorem", "") + " [" + r.value("transform", "") + "]";
      const auto& f = r["fitted"];
      if (!f["C"].is_null())
        fitted = "C=" + format_double(f["C"].get<double>()) + " vartheta=" + format_double(f["vartheta"].get<double>());
    } else if (!r.contains("pass")) {
      // Informational record (field statistics, norms): listed, not counted.
      name = r.value("record", "") + (r.contains("function") ? " " + r.value("function", "") : std::string());
      std::snprintf(line, sizeof line, "%-44s %-5s %s\n", name.c_str(), "-", "");
      os << line;
      continue;
    } else {
      name = r.value("name", "");
      if (r.contains("constants"))
        for (const auto& [k, v] : r["constants"].items())
          fitted += k + "=" + (v.is_null() ? std::string("null") : format_double(v.get<double>())) + " ";
    }
    const bool ok = r.value("pass", false);
    (ok ? pass : fail)++;
    std::snprintf(line, sizeof line, "%-44s %-5s %s\n", name.c_str(), ok ? "PASS" : "FAIL", fitted.c_str());
    os << line;
  }
  os << "records: " << records.size() << "  pass: " << pass << "  fail: " << fail << "\n";
  return os.str();
}

void emit_report(const Json& header, std::span<const Json> records, const std::filesystem::path& jsonl,
                 const std::filesystem::path& summary) {
  {
    std::ofstream out(jsonl, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open report: " + jsonl.string());
    Json h;
    h["record"] = "header";
    for (const auto& [k, v] : header.items()) h[k] = v;
    h["count"] = records.size();
    out << h.dump() << '\n';
    for (const auto& r : records) out << r.dump() << '\n';
    if (!out) throw std::runtime_error("write failed: " + jsonl.string());
  }
  if (!summary.empty()) {
    std::ofstream out(summary, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open summary: " + summary.string());
    out << render_summary(records);
    if (!out) throw std::runtime_error("write failed: " + summary.string());
  }
}

}  // namespace schrolab
