#pragma once

// Experiment configuration: a TOML subset (sections, key = value, numbers,
// booleans, quoted strings, flat arrays, '#' comments) and the builders that
// turn it into grids, potentials, weights, symbols, families and suites.
//
//   [grid]      d, n, L
//   [potential] kind = constant|power|bumps, value, exponent, centers, heights, widths
//   [weight]    kind = constant|power|bracket|rho, value, exponent
//   [symbol]    kind = constant|log_bracket, value
//   [params]    p, kappa, theta, m, transform = R|Rstar, n_list
//   [family]    stride, radii, include_boundary, include_box_ball
//   [suite]     count, generators, lambda_points, lambda_lo, lambda_hi
//   [operator]  cache_dir, max_size
//   [rho]       tol, full_scan

#include <schrolab/harness.hpp>
#include <schrolab/morrey.hpp>
#include <schrolab/orlicz.hpp>
#include <schrolab/potentials.hpp>
#include <schrolab/riesz.hpp>
#include <schrolab/weights.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace schrolab {

using ConfigValue = std::variant<double, bool, std::string, std::vector<double>, std::vector<std::string>>;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;
  double number(const std::string& section, const std::string& key, double fallback) const;
  bool boolean(const std::string& section, const std::string& key, bool fallback) const;
  std::string string(const std::string& section, const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& section, const std::string& key,
                              const std::vector<double>& fallback) const;
  std::vector<std::string> strings(const std::string& section, const std::string& key,
                                   const std::vector<std::string>& fallback) const;

  void set(const std::string& section, const std::string& key, ConfigValue v);
  const std::map<std::string, std::map<std::string, ConfigValue>>& sections() const { return sections_; }

 private:
  const ConfigValue* find(const std::string& section, const std::string& key) const;
  std::map<std::string, std::map<std::string, ConfigValue>> sections_;
};

// "d,n,L"
Grid parse_grid_spec(std::string_view spec);

struct Experiment {
  Config config;
  Grid grid;
  std::uint64_t seed = 1;

  // Grid from the override, else [grid], else the d=3, n=17, L=4 default.
  static Experiment from_config(Config cfg, std::optional<std::string> grid_override = std::nullopt,
                                std::optional<std::uint64_t> seed = std::nullopt);

  Potential potential() const;
  // rho is needed only for kind = rho.
  Weight weight(const CriticalRadiusField* rho = nullptr) const;
  Symbol symbol() const;
  BallFamilyPolicy family_policy() const;
  MorreyParams params() const;
  int order() const;
  Transform transform() const;
  std::vector<int> decay_orders() const;
  TestFunctionSuite suite() const;
  EndpointOptions endpoint() const;
  OperatorOptions operator_options() const;
  RhoOptions rho_options() const;

  // Descriptors of everything above; the report header.
  Json describe() const;
};

}  // namespace schrolab
