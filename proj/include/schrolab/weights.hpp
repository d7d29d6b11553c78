#pragma once

#include <schrolab/grid.hpp>
#include <schrolab/potentials.hpp>
#include <schrolab/report.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace schrolab {

// Strictly positive weight sampled on a grid.
struct Weight {
  ScalarField field;
  std::string descriptor;

  Weight(ScalarField f, std::string desc);

  static Weight constant(const Grid& g, double c);
  // |x + (h/3)(1,...,1)|^alpha; the offset keeps every sample off the origin.
  static Weight power(const Grid& g, double alpha);
  // (1 + |x|)^beta
  static Weight bracket_power(const Grid& g, double beta);
  // (1 + |x|/rho(x))^gamma
  static Weight rho_modulated(const CriticalRadiusField& rho, double gamma);
  // w^{-p'/p}, the dual weight of the A_p pairing.
  Weight dual(double p) const;
};

struct ApCharacteristic {
  double p = 0.0;
  double theta = 0.0;
  double value = 0.0;
  std::optional<std::size_t> argmax_ball;
  std::vector<double> products;  // per ball, before the (1 + r/rho)^{-theta} factor
  std::vector<std::size_t> skipped_balls;
};

// max over the family of
//   (avg_B w)^{1/p} (avg_B w^{-p'/p})^{1/p'} (1 + r/rho(x0))^{-theta}    (p > 1)
//   (avg_B w) / (min_B w) (1 + r/rho(x0))^{-theta}                      (p = 1)
ApCharacteristic ap_characteristic(const Weight& w, double p, double theta,
                                   const CriticalRadiusField& rho, const BallFamily& family);

struct MaximalResult {
  ScalarField values;                  // zero where not evaluated
  std::vector<std::uint8_t> evaluated;  // 1 at family centers
};

// M_{rho,theta} f(x) = max over family radii at x of (1 + r/rho(x))^{-theta} avg_{B(x,r)} |f|.
MaximalResult maximal_rho_theta(const ScalarField& f, double theta, const CriticalRadiusField& rho,
                                const BallFamily& family);

// Minimal ladder C with M_{rho,theta} w <= C w at every evaluated point.
CheckReport a1_pointwise_check(const Weight& w, double theta, const CriticalRadiusField& rho,
                               const BallFamily& family);

double weighted_lp_norm(const ScalarField& f, const ScalarField& w, double p);
// sup_lambda lambda * w({|f| > lambda}) computed exactly: sort |f| descending
// and maximize value * (mass of all points at least that large).
double weak_l1_quasinorm(const ScalarField& f, const ScalarField& w);
double weak_quasinorm(std::span<const double> abs_values, std::span<const double> masses);
double weak_quasinorm_on_ball(const ScalarField& f, const ScalarField& w, const Ball& ball);

struct ReverseHolderLadders {
  std::vector<double> eps{1.0, 0.5, 0.25, 0.125};  // tried in this order
  std::vector<double> eta{0, 1, 2, 4};
  std::vector<double> c{1, 2, 4, 8, 16};
};

// (avg_B w^{1+eps})^{1/(1+eps)} <= C avg_B w (1 + r/rho)^eta on every ball.
CheckReport reverse_holder_weight_fit(const Weight& w, const CriticalRadiusField& rho,
                                      const BallFamily& family, const ReverseHolderLadders& ladders = {});

struct SubsetPolicy {
  int random_masks = 6;
  std::uint64_t seed = 7;
  bool half_balls = true;
  bool shells = true;
  bool whole_and_empty = true;
};

struct MeasureComparisonLadders {
  std::vector<double> delta{1.0, 0.5, 0.25, 0.125, 0.0625};  // tried in this order
  std::vector<double> eta{0, 1, 2, 4};
  std::vector<double> c{1, 2, 4, 8, 16};
};

struct MeasureComparisonFit {
  bool pass = false;
  double delta = 0.0;
  double eta = 0.0;
  double C = 0.0;
  std::size_t samples = 0;
  std::string witness;

  CheckReport to_report() const;
};

// w(E)/w(B) <= C (|E|/|B|)^delta (1 + r/rho)^eta for subsets E of family balls.
MeasureComparisonFit measure_comparison_check(const Weight& w, const CriticalRadiusField& rho,
                                              const BallFamily& family, const SubsetPolicy& policy = {},
                                              const MeasureComparisonLadders& ladders = {});

// w(2B) <= C (1 + 2r/rho)^{p theta'} w(B); for p = 1 the exponent is theta'.
CheckReport doubling_check(const Weight& w, double p, double theta_prime, const CriticalRadiusField& rho,
                           const BallFamily& family);

}  // namespace schrolab
