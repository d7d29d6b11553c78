#pragma once

#include <schrolab/grid.hpp>
#include <schrolab/report.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace schrolab {

// Nonnegative potential V sampled on a grid (not identically zero).
struct Potential {
  ScalarField field;
  std::string descriptor;

  Potential(ScalarField f, std::string desc);

  static Potential constant(const Grid& g, double c);
  // |x|^a, a >= 0.
  static Potential power(const Grid& g, double a);
  struct Bump {
    Point center;
    double height;
    double width;
  };
  // Sum of Gaussian bumps height * exp(-|x - c|^2 / width^2).
  static Potential bumps(const Grid& g, const std::vector<Bump>& bumps);
};

class RhoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RhoOptions {
  double tol = 1e-6;       // relative bracket width on r
  bool full_scan = false;  // sup-scan for potentials with non-monotone r^{2-d} ∫_B V
};

// The defining functional r^{-(d-2)} ∫_{B(x,r)} V, evaluated with cell-coverage
// quadrature so that it is continuous in r.
double rho_functional(const Potential& V, std::span<const double> x, double r);

// sup{ r : r^{-(d-2)} ∫_{B(x,r)} V <= 1 }, bracketed then bisected to the
// relative tolerance; returns the bracket midpoint. Throws RhoError("rho
// exceeds domain") when the condition still holds at the box diagonal.
double compute_rho(const Potential& V, std::span<const double> x, const RhoOptions& opts = {});
double compute_rho(const Potential& V, std::size_t index, const RhoOptions& opts = {});

struct CriticalRadiusField {
  Grid grid;
  std::vector<double> rho_values;
  double tol = 0.0;
  std::vector<std::uint8_t> error_mask;  // 1 where compute_rho failed

  bool valid() const;
  // Throws unless every grid point has a finite positive radius.
  void require_valid() const;
  double at(std::size_t index) const { return rho_values[index]; }
  // rho at a ball center; the center must be a lattice point.
  double at_center(const Ball& ball) const;
  // 1 + r / rho(x_0), the localization base of every rho-weighted estimate.
  double growth_base(const Ball& ball) const { return 1.0 + ball.radius() / at_center(ball); }
  ScalarField as_field() const { return ScalarField(grid, rho_values); }

  static CriticalRadiusField constant(const Grid& g, double rho);
};

CriticalRadiusField rho_field(const Potential& V, const RhoOptions& opts = {});

struct RhoComparabilityOptions {
  std::vector<double> c_ladder{1, 2, 4, 8, 16};
  std::vector<int> n0_ladder{1, 2, 3, 4};
  // Exhaustive pair scan up to this many ordered pairs, random sample beyond.
  std::size_t max_pairs = 30'000'000;
  std::uint64_t seed = 1;
  // Sampling of the consequence check (com2): centers, radii, dyadic range.
  int com2_center_stride = 4;
  std::vector<double> com2_radii{0.5, 1.0, 2.0};
  int com2_k_max = 4;
};

// Fits the smallest (C, N0) on the ladder so that
//   (1/C) (1 + |x-y|/rho(x))^{-N0} <= rho(y)/rho(x) <= C (1 + |x-y|/rho(x))^{N0/(N0+1)}
// on all sampled pairs, then checks the dyadic consequence for y in B(x, r).
CheckReport check_rho_comparability(const CriticalRadiusField& rho,
                                    const RhoComparabilityOptions& opts = {});

struct RHReport {
  double q = 0.0;
  double constant = 0.0;  // max over balls of (avg V^q)^{1/q} / avg V
  std::optional<std::size_t> worst_ball;
  std::vector<std::size_t> skipped_balls;  // avg V = 0
  bool ratio_at_least_one = true;          // power-mean inequality on every ball
};

RHReport reverse_holder_report(const Potential& V, double q, const BallFamily& family);

}  // namespace schrolab
