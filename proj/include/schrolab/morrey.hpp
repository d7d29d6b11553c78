#pragma once

// Weighted Morrey-type norms localized by rho, evaluated as a max over a
// declared ball family (a lower bound of the sup over all balls).

#include <schrolab/grid.hpp>
#include <schrolab/potentials.hpp>
#include <schrolab/weights.hpp>

#include <filesystem>
#include <optional>
#include <vector>

namespace schrolab {

enum class MorreyFlavor { Strong, Weak, LlogL };

struct MorreyParams {
  double p = 2.0;
  double kappa = 0.0;
  double theta = 0.0;
  MorreyFlavor flavor = MorreyFlavor::Strong;

  // p >= 1, 0 <= kappa < 1, theta >= 0; weak and LlogL require p = 1.
  void validate() const;
};

struct MorreyEntry {
  std::size_t ball = 0;
  double local = 0.0;   // quantity inside the sup, without the rho factor
  double factor = 1.0;  // (1 + r/rho(x0))^{-theta}
  double entry = 0.0;   // local * factor
};

struct MorreyNormResult {
  double value = 0.0;
  std::optional<std::size_t> argmax_ball;
  std::vector<MorreyEntry> entries;
};

// strong: (w(B)^{-kappa} ∫_B |f|^p w)^{1/p}
MorreyNormResult morrey_norm(const ScalarField& f, const Weight& w, const MorreyParams& params,
                             const CriticalRadiusField& rho, const BallFamily& family);
// weak: w(B)^{-kappa} sup_lambda lambda w({x in B : |f| > lambda})
MorreyNormResult weak_morrey_norm(const ScalarField& f, const Weight& w, const MorreyParams& params,
                                  const CriticalRadiusField& rho, const BallFamily& family);
// LlogL: w(B)^{1-kappa} ||f||_{LlogL(w), B}
MorreyNormResult lloglog_morrey_norm(const ScalarField& f, const Weight& w, const MorreyParams& params,
                                     const CriticalRadiusField& rho, const BallFamily& family);
// Dispatch on params.flavor.
MorreyNormResult evaluate_morrey(const ScalarField& f, const Weight& w, const MorreyParams& params,
                                 const CriticalRadiusField& rho, const BallFamily& family);

// Columns: ball, center..., radius, local, factor, entry.
void write_morrey_csv(const MorreyNormResult& result, const BallFamily& family,
                      const std::filesystem::path& path);

const char* flavor_name(MorreyFlavor f);

}  // namespace schrolab
