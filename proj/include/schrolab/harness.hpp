#pragma once

// Theorem-level boundedness experiments: seeded test-function suites, ratio
// tables, (C, vartheta) ladder fits, and JSON-lines report emission.

#include <schrolab/morrey.hpp>
#include <schrolab/orlicz.hpp>
#include <schrolab/report.hpp>
#include <schrolab/riesz.hpp>
#include <schrolab/weights.hpp>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace schrolab {

enum class Generator { Gaussian, BallIndicator, ShellIndicator, KernelColumn, Oscillatory };
const char* generator_name(Generator g);
Generator generator_from_name(std::string_view name);

struct TestFunction {
  std::string name;
  ScalarField f;
};

struct TestFunctionSuite {
  std::uint64_t seed = 1;
  int count = 50;
  // Used round-robin. KernelColumn needs an operator and is skipped without one.
  std::vector<Generator> generators{Generator::Gaussian, Generator::BallIndicator, Generator::ShellIndicator,
                                    Generator::KernelColumn, Generator::Oscillatory};

  // Deterministic given the seed; every member is finite and not identically zero.
  std::vector<TestFunction> generate(const Grid& grid, const SpectralOperator* op = nullptr) const;
};

struct BoundednessReport {
  std::string theorem;
  std::string transform;
  bool pass = false;
  double exponent = 0.0;  // fitted vartheta
  double constant = 0.0;  // fitted C
  double input_theta = 0.0;
  std::vector<double> ratios;  // per test function: max over balls/levels at exponent 0
  std::vector<NamedValue> measured;
  std::string witness;
  std::vector<std::string> notes;

  double max_ratio() const;
  Json to_json() const;
};

// max ||T f||_{L^p(w)} / ||f||_{L^p(w)}; p = 1 measures the output in weak L^1(w).
BoundednessReport lebesgue_boundedness_suite(const SpectralOperator& op, Transform t, const Weight& w, double p,
                                             std::span<const TestFunction> suite);

// Outputs are |T f| (or |[b,T]_m f|) for the matching suite member; the
// operator-taking forms compute them and delegate.
BoundednessReport morrey_boundedness_from_outputs(std::string theorem, std::string transform, const Weight& w,
                                                  const MorreyParams& params, const CriticalRadiusField& rho,
                                                  const BallFamily& family, std::span<const TestFunction> suite,
                                                  std::span<const ScalarField> outputs);
BoundednessReport weak_morrey_from_outputs(std::string theorem, std::string transform, const Weight& w,
                                           const MorreyParams& params, const CriticalRadiusField& rho,
                                           const BallFamily& family, std::span<const TestFunction> suite,
                                           std::span<const ScalarField> outputs);
struct EndpointOptions {
  int lambda_points = 10;
  double lambda_lo = 0.01;  // multiples of median |output|
  double lambda_hi = 100.0;
};
BoundednessReport endpoint_from_outputs(std::string theorem, std::string transform, int m, const Weight& w,
                                        double kappa, double theta, const CriticalRadiusField& rho,
                                        const BallFamily& family, std::span<const TestFunction> suite,
                                        std::span<const ScalarField> outputs, const EndpointOptions& opts = {});

// Fits (w(B)^{-kappa} ∫_B |T f|^p w)^{1/p} <= C (1 + r/rho)^vartheta over f
// normalized to unit input Morrey norm (params.theta applies to the input).
BoundednessReport morrey_boundedness_suite(const SpectralOperator& op, Transform t, const Weight& w,
                                           const MorreyParams& params, const CriticalRadiusField& rho,
                                           const BallFamily& family, std::span<const TestFunction> suite);
// Input measured in the strong (p = 1) norm, output by the weak local quantity.
BoundednessReport weak_morrey_boundedness_suite(const SpectralOperator& op, Transform t, const Weight& w,
                                                double kappa, double theta, const CriticalRadiusField& rho,
                                                const BallFamily& family, std::span<const TestFunction> suite);
BoundednessReport commutator_boundedness_suite(const SpectralOperator& op, Transform t, const Symbol& b, int m,
                                               const Weight& w, const MorreyParams& params,
                                               const CriticalRadiusField& rho, const BallFamily& family,
                                               std::span<const TestFunction> suite);
// w(B)^{-kappa} w({x in B : |[b,T]_m f| > lambda}) <= C (1 + r/rho)^vartheta ||Phi_m(|f|/lambda)||
// with the right side the (LlogL)^{1,kappa}_{rho,theta}(w) norm.
BoundednessReport endpoint_lloglog_suite(const SpectralOperator& op, Transform t, const Symbol& b, int m,
                                         const Weight& w, double kappa, double theta,
                                         const CriticalRadiusField& rho, const BallFamily& family,
                                         std::span<const TestFunction> suite, const EndpointOptions& opts = {});

// |T f| and |[b,T]_m f| for every suite member.
std::vector<ScalarField> transform_outputs(const SpectralOperator& op, Transform t,
                                           std::span<const TestFunction> suite);
std::vector<ScalarField> commutator_outputs(const SpectralOperator& op, Transform t, const Symbol& b, int m,
                                            std::span<const TestFunction> suite);

// Header record first, then one record per entry in order. The summary is a
// fixed-width table followed by pass/fail counts.
std::string render_summary(std::span<const Json> records);
void emit_report(const Json& header, std::span<const Json> records, const std::filesystem::path& jsonl,
                 const std::filesystem::path& summary);

}  // namespace schrolab
