#pragma once

// Localized mean oscillation, Young functions, Luxemburg norms and the
// lemma-level oscillation estimates used by the commutator theorems.

#include <schrolab/grid.hpp>
#include <schrolab/potentials.hpp>
#include <schrolab/report.hpp>
#include <schrolab/weights.hpp>

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace schrolab {

// The commutator symbol b.
struct Symbol {
  ScalarField field;
  std::string descriptor;

  Symbol(ScalarField f, std::string desc);
  static Symbol constant(const Grid& g, double c);
  // log(1 + |x|)
  static Symbol log_bracket(const Grid& g);
};

enum class YoungKind { Identity, LlogL, LlogLPower, ExpMinusOne };

struct YoungFunction {
  YoungKind kind = YoungKind::Identity;
  int m = 1;

  static YoungFunction identity() { return {YoungKind::Identity, 1}; }
  // t (1 + log+ t)
  static YoungFunction llogl() { return {YoungKind::LlogL, 1}; }
  // t (1 + log+ t)^m
  static YoungFunction llogl_power(int m);
  static YoungFunction exp_minus_one() { return {YoungKind::ExpMinusOne, 1}; }

  double operator()(double t) const;
  std::string name() const;
};

// A(0) = 0, strictly increasing and midpoint convex on a sampled ladder.
CheckReport young_function_sanity(const YoungFunction& A, std::span<const double> samples);

class LuxemburgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Relative tolerance on lambda for every Luxemburg bisection.
inline constexpr double kLuxemburgTol = 1e-8;

// inf{ lambda > 0 : sum_i m_i A(|f_i|/lambda) / sum_i m_i <= 1 }. The returned
// lambda always satisfies the constraint. Zero for f = 0.
double luxemburg_norm(std::span<const double> values, std::span<const double> masses, const YoungFunction& A,
                      double tol = kLuxemburgTol);
double luxemburg_norm(const ScalarField& f, const Ball& ball, const YoungFunction& A);
double weighted_luxemburg_norm(const ScalarField& f, const Ball& ball, const YoungFunction& A,
                               const ScalarField& w);

struct BmoCharacteristic {
  double theta = 0.0;
  double value = 0.0;
  std::optional<std::size_t> argmax_ball;
  std::vector<double> oscillations;  // avg_B |b - b_B| per ball
};

BmoCharacteristic bmo_characteristic(const Symbol& b, double theta, const CriticalRadiusField& rho,
                                     const BallFamily& family);

struct TailLadders {
  std::vector<double> c2 = ladder::powers_of_two(-10, 0);  // tried largest first
  std::vector<double> eta{0, 1, 2, 4};
  std::vector<double> c1 = ladder::default_constants();
};

// Exponential decay of the distribution of |b - b_B| on each family ball:
//   m({x in B : |b - b_B| > lambda}) <= C1 M(B) exp(-(1 + r/rho)^{-theta*} C2 lambda / ||b||)
// with theta* = (N0 + 1) theta, M = Lebesgue measure, or w-measure times
// (1 + r/rho)^eta when a weight is given. The distribution is enumerated
// exactly, so every lambda > 0 is covered.
CheckReport john_nirenberg_tail(const Symbol& b, double theta, int n0, double bmo_norm,
                                const CriticalRadiusField& rho, const BallFamily& family,
                                const Weight* w = nullptr, const TailLadders& ladders = {});
CheckReport john_nirenberg_tail(const Symbol& b, double theta, int n0, double bmo_norm,
                                const CriticalRadiusField& rho, const Ball& ball, const Weight* w = nullptr);

// avg_B |f g| <= 2 ||f||_{LlogL,B} ||g||_{expL,B}; with a weight, the
// w-averaged version with the smallest ladder constant.
CheckReport holder_orlicz_check(const ScalarField& f, const ScalarField& g, const Ball& ball,
                                const ScalarField* w = nullptr);

// (∫_B |b - b_B|^p w)^{1/p} <= C w(B)^{1/p} (1 + r/rho)^mu.
CheckReport oscillation_weighted_lp_check(const Symbol& b, const Weight& w, double p,
                                          const CriticalRadiusField& rho, const BallFamily& family);

// Largest gamma on a descending ladder with
//   ∫_B (exp[(1 + r/rho)^{-theta*} gamma |b - b_B| / ||b||] - 1) w <= C w(B) (1 + r/rho)^eta.
CheckReport exp_integrability_check(const Symbol& b, const Weight& w, double theta, int n0,
                                    const CriticalRadiusField& rho, const BallFamily& family);

// |b_{2^{k+1}B} - b_B| <= C (k + 1) (1 + 2^{k+1} r/rho)^{theta''} for 0 <= k <= k_max.
CheckReport dyadic_mean_drift_check(const Symbol& b, double theta2, const CriticalRadiusField& rho,
                                    const BallFamily& family, int k_max);

}  // namespace schrolab
