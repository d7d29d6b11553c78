#pragma once

// Subcommand bodies shared by the CLI and the acceptance runner. Each
// returns the report records in emission order.

#include <schrolab/config.hpp>
#include <schrolab/harness.hpp>

#include <string_view>
#include <vector>

namespace schrolab {

// Every lemma-level estimate for one (V, w, b) instance. N0 is taken from
// the fitted comparability check and reused by the oscillation lemmas.
std::vector<CheckReport> lemma_checks(const Weight& w, const Symbol& b, const MorreyParams& params,
                                      const CriticalRadiusField& rho, const BallFamily& family);

std::vector<Json> run_rho(const Experiment& e);
std::vector<Json> run_weights(const Experiment& e);
std::vector<Json> run_bmo(const Experiment& e);
std::vector<Json> run_orlicz(const Experiment& e);
std::vector<Json> run_riesz(const Experiment& e);
std::vector<Json> run_morrey(const Experiment& e);
// suite: lebesgue | morrey | weak_morrey | commutator | endpoint | lemmas | all
std::vector<Json> run_verify(const Experiment& e, std::string_view suite);

std::vector<Json> run_command(std::string_view command, const Experiment& e, std::string_view suite = "all");

}  // namespace schrolab
