#pragma once

// Structured results of inequality checks, and the minimal-ladder fitting
// used to turn "there exist constants such that ..." into reproducible
// witnesses.

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace schrolab {

using Json = nlohmann::ordered_json;

struct NamedValue {
  std::string name;
  double value;
};

struct CheckReport {
  std::string name;
  bool pass = false;
  std::vector<NamedValue> constants;  // fitted ladder witnesses
  std::vector<NamedValue> measured;   // raw measured quantities
  std::string witness;                // worst case, human readable
  std::vector<std::string> notes;

  CheckReport& set_constant(std::string key, double v);
  CheckReport& set_measured(std::string key, double v);
  double constant(std::string_view key) const;
  double get_measured(std::string_view key) const;
  Json to_json() const;
};

namespace ladder {

// Relative slack applied to every "lhs <= rhs" comparison against a ladder
// rung, so that exact equalities survive rounding.
inline constexpr double kSlack = 1e-12;

// {2^lo, ..., 2^hi}
std::vector<double> powers_of_two(int lo, int hi);
// {0, step, 2 step, ..., max}
std::vector<double> arithmetic(double max, double step);
// Smallest rung r with required <= r * (1 + kSlack); the ladder must be
// increasing.
std::optional<double> smallest_at_least(std::span<const double> ladder, double required);

// Default verification ladders: exponents {0, 0.5, ..., 8}, constants 2^0..2^20.
std::vector<double> default_exponents();
std::vector<double> default_constants();

}  // namespace ladder

// One observation of an inequality "value <= C * base^e" with base >= 1.
struct GrowthSample {
  double value;
  double base;
  std::size_t tag;  // caller-defined witness id
};

struct GrowthFit {
  bool pass = false;
  double exponent = 0.0;
  double constant = 0.0;
  double required = 0.0;       // max value / base^exponent at the reported exponent
  double raw_max_ratio = 0.0;  // max value (exponent 0)
  std::size_t witness = 0;
};

// Minimal lexicographic (exponent, constant) on the two ladders such that
// every sample satisfies the inequality.
GrowthFit fit_growth(std::span<const GrowthSample> samples, std::span<const double> exponents,
                     std::span<const double> constants);

std::string format_double(double v);

}  // namespace schrolab
