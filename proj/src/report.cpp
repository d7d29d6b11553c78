#include <schrolab/report.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace schrolab {

namespace {

Json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

CheckReport& upsert(std::vector<NamedValue>& vec, CheckReport& self, std::string key, double v) {
  for (auto& nv : vec)
    if (nv.name == key) {
      nv.value = v;
      return self;
    }
  vec.push_back({std::move(key), v});
  return self;
}

double lookup(const std::vector<NamedValue>& vec, std::string_view key) {
  for (const auto& nv : vec)
    if (nv.name == key) return nv.value;
  throw std::out_of_range("no entry named " + std::string(key));
}

}  // namespace

CheckReport& CheckReport::set_constant(std::string key, double v) {
  return upsert(constants, *this, std::move(key), v);
}

CheckReport& CheckReport::set_measured(std::string key, double v) {
  return upsert(measured, *this, std::move(key), v);
}

double CheckReport::constant(std::string_view key) const { return lookup(constants, key); }
double CheckReport::get_measured(std::string_view key) const { return lookup(measured, key); }

Json CheckReport::to_json() const {
  Json j;
  j["record"] = "check";
  j["name"] = name;
  j["pass"] = pass;
  Json c = Json::object();
  for (const auto& nv : constants) c[nv.name] = number_or_null(nv.value);
  j["constants"] = c;
  Json m = Json::object();
  for (const auto& nv : measured) m[nv.name] = number_or_null(nv.value);
  j["measured"] = m;
  j["witness"] = witness;
  j["notes"] = notes;
  return j;
}

namespace ladder {

std::vector<double> powers_of_two(int lo, int hi) {
  std::vector<double> v;
  for (int k = lo; k <= hi; ++k) v.push_back(std::ldexp(1.0, k));
  return v;
}

std::vector<double> arithmetic(double max, double step) {
  std::vector<double> v;
  const int count = static_cast<int>(std::floor(max / step + 1e-9));
  for (int k = 0; k <= count; ++k) v.push_back(step * k);
  return v;
}

std::optional<double> smallest_at_least(std::span<const double> rungs, double required) {
  if (!std::isfinite(required)) return std::nullopt;
  for (double r : rungs)
    if (required <= r * (1.0 + kSlack)) return r;
  return std::nullopt;
}

std::vector<double> default_exponents() { return arithmetic(8.0, 0.5); }
std::vector<double> default_constants() { return powers_of_two(0, 20); }

}  // namespace ladder

GrowthFit fit_growth(std::span<const GrowthSample> samples, std::span<const double> exponents,
                     std::span<const double> constants) {
  GrowthFit fit;
  if (exponents.empty() || constants.empty()) throw std::invalid_argument("empty ladder");
  for (const auto& s : samples) fit.raw_max_ratio = std::max(fit.raw_max_ratio, s.value);
  for (double e : exponents) {
    double worst = 0.0;
    std::size_t witness = samples.empty() ? 0 : samples.front().tag;
    for (const auto& s : samples) {
      const double ratio = s.value / std::pow(s.base, e);
      if (ratio > worst || std::isnan(ratio)) {
        worst = std::isnan(ratio) ? std::numeric_limits<double>::infinity() : ratio;
        witness = s.tag;
      }
    }
    fit.exponent = e;
    fit.required = worst;
    fit.witness = witness;
    if (auto c = ladder::smallest_at_least(constants, worst)) {
      fit.constant = *c;
      fit.pass = true;
      return fit;
    }
  }
  fit.constant = std::numeric_limits<double>::infinity();
  return fit;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace schrolab
