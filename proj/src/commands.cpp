#include <schrolab/commands.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace schrolab {

namespace {

struct Context {
  Potential V;
  CriticalRadiusField rho;
  Weight w;
  Symbol b;
  BallFamily family;
  MorreyParams params;
};

Context make_context(const Experiment& e) {
  Potential V = e.potential();
  CriticalRadiusField rho = rho_field(V, e.rho_options());
  rho.require_valid();
  Weight w = e.weight(&rho);
  Symbol b = e.symbol();
  BallFamily family = generate_ball_family(e.grid, e.family_policy());
  return {std::move(V), std::move(rho), std::move(w), std::move(b), std::move(family), e.params()};
}

void append(std::vector<Json>& out, const CheckReport& r) { out.push_back(r.to_json()); }

int fitted_n0(const CriticalRadiusField& rho) {
  const auto rep = check_rho_comparability(rho);
  if (!rep.pass) return 4;
  return static_cast<int>(rep.constant("N0"));
}

}  // namespace

std::vector<CheckReport> lemma_checks(const Weight& w, const Symbol& b, const MorreyParams& params,
                                      const CriticalRadiusField& rho, const BallFamily& family) {
  std::vector<CheckReport> out;
  auto comp = check_rho_comparability(rho);
  const int n0 = comp.pass ? static_cast<int>(comp.constant("N0")) : 4;
  out.push_back(std::move(comp));
  out.push_back(reverse_holder_weight_fit(w, rho, family));
  out.push_back(measure_comparison_check(w, rho, family).to_report());
  out.push_back(doubling_check(w, params.p, params.theta, rho, family));
  const double bmo = bmo_characteristic(b, params.theta, rho, family).value;
  out.push_back(john_nirenberg_tail(b, params.theta, n0, bmo, rho, family));
  out.push_back(john_nirenberg_tail(b, params.theta, n0, bmo, rho, family, &w));
  out.push_back(oscillation_weighted_lp_check(b, w, params.p, rho, family));
  out.push_back(exp_integrability_check(b, w, params.theta, n0, rho, family));
  out.push_back(dyadic_mean_drift_check(b, params.theta, rho, family, 4));
  return out;
}

std::vector<Json> run_rho(const Experiment& e) {
  const Potential V = e.potential();
  const auto rho = rho_field(V, e.rho_options());
  std::vector<Json> out;
  Json j;
  j["record"] = "rho_field";
  std::size_t failures = 0;
  double lo = INFINITY, hi = 0.0;
  for (std::size_t i = 0; i < rho.rho_values.size(); ++i) {
    if (rho.error_mask[i]) {
      ++failures;
      continue;
    }
    lo = std::min(lo, rho.rho_values[i]);
    hi = std::max(hi, rho.rho_values[i]);
  }
  j["points"] = rho.rho_values.size();
  j["failures"] = failures;
  j["min"] = failures == rho.rho_values.size() ? Json(nullptr) : Json(lo);
  j["max"] = failures == rho.rho_values.size() ? Json(nullptr) : Json(hi);
  const std::size_t c = e.grid.center_index();
  j["center"] = rho.error_mask[c] ? Json(nullptr) : Json(rho.rho_values[c]);
  out.push_back(j);
  if (failures == 0) append(out, check_rho_comparability(rho));

  const double q = e.config.number("potential", "rh_q", 2.0);
  const auto family = generate_ball_family(e.grid, e.family_policy());
  const auto rh = reverse_holder_report(V, q, family);
  Json r;
  r["record"] = "reverse_holder_potential";
  r["q"] = rh.q;
  r["constant"] = rh.constant;
  r["worst_ball"] = rh.worst_ball ? Json(*rh.worst_ball) : Json(nullptr);
  r["skipped_balls"] = rh.skipped_balls.size();
  r["ratio_at_least_one"] = rh.ratio_at_least_one;
  out.push_back(r);
  return out;
}

std::vector<Json> run_weights(const Experiment& e) {
  const auto ctx = make_context(e);
  const auto& p = ctx.params;
  std::vector<Json> out;
  auto ap_record = [&](const Weight& w, double pp, const char* which) {
    const auto ap = ap_characteristic(w, pp, p.theta, ctx.rho, ctx.family);
    Json j;
    j["record"] = "ap_characteristic";
    j["weight"] = which;
    j["p"] = pp;
    j["theta"] = p.theta;
    j["value"] = ap.value;
    j["argmax_ball"] = ap.argmax_ball ? Json(*ap.argmax_ball) : Json(nullptr);
    j["skipped_balls"] = ap.skipped_balls.size();
    out.push_back(j);
  };
  ap_record(ctx.w, p.p, "w");
  if (p.p > 1.0) ap_record(ctx.w.dual(p.p), p.p / (p.p - 1.0), "dual");
  append(out, a1_pointwise_check(ctx.w, p.theta, ctx.rho, ctx.family));
  append(out, reverse_holder_weight_fit(ctx.w, ctx.rho, ctx.family));
  append(out, measure_comparison_check(ctx.w, ctx.rho, ctx.family).to_report());
  append(out, doubling_check(ctx.w, p.p, p.theta, ctx.rho, ctx.family));
  return out;
}

std::vector<Json> run_bmo(const Experiment& e) {
  const auto ctx = make_context(e);
  const double theta = ctx.params.theta;
  const auto bmo = bmo_characteristic(ctx.b, theta, ctx.rho, ctx.family);
  std::vector<Json> out;
  Json j;
  j["record"] = "bmo_characteristic";
  j["theta"] = theta;
  j["value"] = bmo.value;
  j["argmax_ball"] = bmo.argmax_ball ? Json(*bmo.argmax_ball) : Json(nullptr);
  out.push_back(j);
  const int n0 = fitted_n0(ctx.rho);
  append(out, john_nirenberg_tail(ctx.b, theta, n0, bmo.value, ctx.rho, ctx.family));
  append(out, john_nirenberg_tail(ctx.b, theta, n0, bmo.value, ctx.rho, ctx.family, &ctx.w));
  append(out, oscillation_weighted_lp_check(ctx.b, ctx.w, ctx.params.p, ctx.rho, ctx.family));
  append(out, exp_integrability_check(ctx.b, ctx.w, theta, n0, ctx.rho, ctx.family));
  append(out, dyadic_mean_drift_check(ctx.b, theta, ctx.rho, ctx.family, 4));
  return out;
}

std::vector<Json> run_orlicz(const Experiment& e) {
  const auto ctx = make_context(e);
  std::vector<Json> out;
  const std::vector<double> samples{0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0};
  for (const auto& A : {YoungFunction::identity(), YoungFunction::llogl(), YoungFunction::llogl_power(e.order()),
                        YoungFunction::exp_minus_one()})
    append(out, young_function_sanity(A, samples));

  const auto suite = e.suite().generate(e.grid);
  CheckReport ordering, holder;
  ordering.name = "orlicz_ordering";
  holder.name = "holder_orlicz_suite";
  ordering.pass = holder.pass = true;
  double worst_order = 0.0, worst_holder = 0.0;
  std::size_t pairs = 0;
  for (const auto& tf : suite) {
    for (std::size_t bi = 0; bi < ctx.family.size(); ++bi) {
      const Ball& B = ctx.family.balls[bi];
      if (B.count() == 0) continue;
      ++pairs;
      const double l1 = weighted_luxemburg_norm(tf.f, B, YoungFunction::identity(), ctx.w.field);
      const double ll = weighted_luxemburg_norm(tf.f, B, YoungFunction::llogl(), ctx.w.field);
      if (ll > 0.0) worst_order = std::max(worst_order, l1 / ll);
      if (l1 > ll * (1.0 + ladder::kSlack)) {
        ordering.pass = false;
        ordering.witness = tf.name + " B=" + std::to_string(bi);
      }
      const auto h = holder_orlicz_check(tf.f, ctx.b.field, B);
      const double rhs = 2.0 * h.get_measured("norm_llogl") * h.get_measured("norm_expl");
      if (rhs > 0.0) worst_holder = std::max(worst_holder, h.get_measured("lhs") / rhs);
      if (!h.pass) {
        holder.pass = false;
        holder.witness = tf.name + " B=" + std::to_string(bi);
      }
    }
  }
  ordering.set_measured("max_L_over_LlogL", worst_order).set_measured("pairs", static_cast<double>(pairs));
  holder.set_constant("C", 2.0).set_measured("max_lhs_over_rhs", worst_holder);
  holder.set_measured("pairs", static_cast<double>(pairs));
  append(out, ordering);
  append(out, holder);
  return out;
}

std::vector<Json> run_riesz(const Experiment& e) {
  const auto ctx = make_context(e);
  const auto op = SpectralOperator::build(ctx.V, e.operator_options());
  std::vector<Json> out;
  Json j;
  j["record"] = "operator";
  j["size"] = op.size();
  j["lambda_min"] = op.lambda_min();
  j["lambda_max"] = op.lambda_max();
  j["reconstruction_error"] = op.reconstruction_error();
  j["reconstruction_ok"] = op.reconstruction_error() >= 0.0 && op.reconstruction_error() <= 1e-8 * op.lambda_max();
  out.push_back(j);
  append(out, riesz_norm_check(op, 100, e.seed));
  append(out, riesz_adjoint_check(op, 20, e.seed + 1));
  const auto orders = e.decay_orders();
  append(out, kernel_decay_check(op, ctx.rho, orders));

  // Tail probe: the indicator of 4B \ 2B around the center.
  const double r = e.family_policy().radii.front();
  const Ball B = Ball::at_index(e.grid, e.grid.center_index(), r);
  std::vector<double> shell(e.grid.size(), 0.0);
  for (std::size_t i = 0; i < shell.size(); ++i) {
    const double t = e.grid.norm(i);
    if (t >= 2.0 * r && t < 4.0 * r) shell[i] = 1.0;
  }
  const int n0 = fitted_n0(ctx.rho);
  const int N = *std::max_element(orders.begin(), orders.end());
  append(out, tail_bound_check(op, e.transform(), ctx.rho, B, ScalarField(e.grid, std::move(shell)), N, n0));
  return out;
}

std::vector<Json> run_morrey(const Experiment& e) {
  const auto ctx = make_context(e);
  const auto suite = e.suite().generate(e.grid);
  const MorreyParams weak{1.0, ctx.params.kappa, ctx.params.theta, MorreyFlavor::Weak};
  const MorreyParams strong1{1.0, ctx.params.kappa, ctx.params.theta, MorreyFlavor::Strong};
  const MorreyParams llogl{1.0, ctx.params.kappa, ctx.params.theta, MorreyFlavor::LlogL};
  std::vector<Json> out;
  for (const auto& tf : suite) {
    const auto s = morrey_norm(tf.f, ctx.w, ctx.params, ctx.rho, ctx.family);
    const auto s1 = morrey_norm(tf.f, ctx.w, strong1, ctx.rho, ctx.family);
    const auto wk = weak_morrey_norm(tf.f, ctx.w, weak, ctx.rho, ctx.family);
    const auto ll = lloglog_morrey_norm(tf.f, ctx.w, llogl, ctx.rho, ctx.family);
    Json j;
    j["record"] = "morrey";
    j["function"] = tf.name;
    j["strong"] = s.value;
    j["strong_p1"] = s1.value;
    j["weak"] = wk.value;
    j["llogl"] = ll.value;
    j["argmax_ball"] = s.argmax_ball ? Json(*s.argmax_ball) : Json(nullptr);
    out.push_back(j);
  }
  return out;
}

std::vector<Json> run_verify(const Experiment& e, std::string_view suite) {
  static const std::vector<std::string_view> known{"lebesgue", "morrey", "weak_morrey", "commutator",
                                                   "endpoint", "lemmas",  "all"};
  if (std::find(known.begin(), known.end(), suite) == known.end())
    throw std::invalid_argument("unknown suite: " + std::string(suite));
  const bool all = suite == "all";
  const auto ctx = make_context(e);
  std::vector<Json> out;
  if (all || suite == "lemmas")
    for (const auto& r : lemma_checks(ctx.w, ctx.b, ctx.params, ctx.rho, ctx.family)) append(out, r);
  if (suite == "lemmas") return out;

  const auto op = SpectralOperator::build(ctx.V, e.operator_options());
  const auto fs = e.suite().generate(e.grid, &op);
  const Transform t = e.transform();
  const int m = e.order();
  if (all || suite == "lebesgue") out.push_back(lebesgue_boundedness_suite(op, t, ctx.w, ctx.params.p, fs).to_json());
  if (all || suite == "morrey")
    out.push_back(morrey_boundedness_suite(op, t, ctx.w, ctx.params, ctx.rho, ctx.family, fs).to_json());
  if (all || suite == "weak_morrey")
    out.push_back(
        weak_morrey_boundedness_suite(op, t, ctx.w, ctx.params.kappa, ctx.params.theta, ctx.rho, ctx.family, fs)
            .to_json());
  if (all || suite == "commutator")
    out.push_back(
        commutator_boundedness_suite(op, t, ctx.b, m, ctx.w, ctx.params, ctx.rho, ctx.family, fs).to_json());
  if (all || suite == "endpoint")
    out.push_back(endpoint_lloglog_suite(op, t, ctx.b, m, ctx.w, ctx.params.kappa, ctx.params.theta, ctx.rho,
                                         ctx.family, fs, e.endpoint())
                      .to_json());
  return out;
}

std::vector<Json> run_command(std::string_view command, const Experiment& e, std::string_view suite) {
  if (command == "rho") return run_rho(e);
  if (command == "weights") return run_weights(e);
  if (command == "bmo") return run_bmo(e);
  if (command == "orlicz") return run_orlicz(e);
  if (command == "riesz") return run_riesz(e);
  if (command == "morrey") return run_morrey(e);
  if (command == "verify") return run_verify(e, suite);
  throw std::invalid_argument("unknown command: " + std::string(command));
}

}  // namespace schrolab
