#include <schrolab/config.hpp>

#include <cctype>
#include <cmath>
#include <charconv>
#include <fstream>
#include <sstream>

namespace schrolab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

// Drops a '#' comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

bool parse_number(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string parse_string(std::string_view s, int line) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '"' || s.back() != '"') fail(line, "expected a quoted string");
  std::string out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] == '\\' && i + 2 < s.size()) {
      const char c = s[++i];
      out += c == 'n' ? '\n' : c == 't' ? '\t' : c;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::vector<std::string_view> split_items(std::string_view body) {
  std::vector<std::string_view> items;
  bool quoted = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '"') quoted = !quoted;
    if (body[i] == ',' && !quoted) {
      items.push_back(trim(body.substr(start, i - start)));
      start = i + 1;
    }
  }
  const auto last = trim(body.substr(start));
  if (!last.empty()) items.push_back(last);
  return items;
}

ConfigValue parse_value(std::string_view s, int line) {
  s = trim(s);
  if (s.empty()) fail(line, "missing value");
  if (s == "true") return true;
  if (s == "false") return false;
  if (s.front() == '"') return parse_string(s, line);
  if (s.front() == '[') {
    if (s.back() != ']') fail(line, "unterminated array");
    const auto items = split_items(s.substr(1, s.size() - 2));
    if (!items.empty() && items.front().front() == '"') {
      std::vector<std::string> v;
      for (auto it : items) v.push_back(parse_string(it, line));
      return v;
    }
    std::vector<double> v;
    for (auto it : items) {
      double x;
      if (!parse_number(it, x)) fail(line, "bad array number '" + std::string(it) + "'");
      v.push_back(x);
    }
    return v;
  }
  double x;
  if (!parse_number(s, x)) fail(line, "bad value '" + std::string(s) + "'");
  return x;
}

std::string key_name(const std::string& section, const std::string& key) { return section + "." + key; }

}  // namespace

Config Config::parse(std::string_view text) {
  Config cfg;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    ++line_no;
    const auto line = trim(strip_comment(text.substr(pos, end - pos)));
    pos = end + 1;
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) fail(line_no, "empty section name");
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) fail(line_no, "empty key");
    auto& sec = cfg.sections_[section];
    if (sec.count(key)) fail(line_no, "duplicate key '" + key + "'");
    sec[key] = parse_value(line.substr(eq + 1), line_no);
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const ConfigValue* Config::find(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

bool Config::has(const std::string& section, const std::string& key) const { return find(section, key) != nullptr; }

double Config::number(const std::string& section, const std::string& key, double fallback) const {
  const auto* v = find(section, key);
  if (!v) return fallback;
  if (const auto* d = std::get_if<double>(v)) return *d;
  throw ConfigError(key_name(section, key) + " must be a number");
}

bool Config::boolean(const std::string& section, const std::string& key, bool fallback) const {
  const auto* v = find(section, key);
  if (!v) return fallback;
  if (const auto* b = std::get_if<bool>(v)) return *b;
  throw ConfigError(key_name(section, key) + " must be true or false");
}

std::string Config::string(const std::string& section, const std::string& key, const std::string& fallback) const {
  const auto* v = find(section, key);
  if (!v) return fallback;
  if (const auto* s = std::get_if<std::string>(v)) return *s;
  throw ConfigError(key_name(section, key) + " must be a string");
}

std::vector<double> Config::numbers(const std::string& section, const std::string& key,
                                    const std::vector<double>& fallback) const {
  const auto* v = find(section, key);
  if (!v) return fallback;
  if (const auto* a = std::get_if<std::vector<double>>(v)) return *a;
  if (const auto* d = std::get_if<double>(v)) return {*d};
  // An empty array parses as numbers; anything else is a type error.
  throw ConfigError(key_name(section, key) + " must be a number array");
}

std::vector<std::string> Config::strings(const std::string& section, const std::string& key,
                                         const std::vector<std::string>& fallback) const {
  const auto* v = find(section, key);
  if (!v) return fallback;
  if (const auto* a = std::get_if<std::vector<std::string>>(v)) return *a;
  if (const auto* s = std::get_if<std::string>(v)) return {*s};
  if (const auto* a = std::get_if<std::vector<double>>(v); a && a->empty()) return {};
  throw ConfigError(key_name(section, key) + " must be a string array");
}

void Config::set(const std::string& section, const std::string& key, ConfigValue v) {
  sections_[section][key] = std::move(v);
}

Grid parse_grid_spec(std::string_view spec) {
  const auto items = split_items(spec);
  double v[3];
  if (items.size() != 3) throw ConfigError("grid spec must be d,n,L");
  for (int i = 0; i < 3; ++i)
    if (!parse_number(items[static_cast<std::size_t>(i)], v[i])) throw ConfigError("grid spec must be d,n,L");
  if (v[0] != std::floor(v[0]) || v[1] != std::floor(v[1])) throw ConfigError("grid d and n must be integers");
  return Grid(static_cast<int>(v[0]), static_cast<int>(v[1]), v[2]);
}

Experiment Experiment::from_config(Config cfg, std::optional<std::string> grid_override,
                                   std::optional<std::uint64_t> seed) {
  Grid g = grid_override ? parse_grid_spec(*grid_override)
                         : Grid(static_cast<int>(cfg.number("grid", "d", 3)),
                                static_cast<int>(cfg.number("grid", "n", 17)), cfg.number("grid", "L", 4.0));
  Experiment e{std::move(cfg), std::move(g), 1};
  e.seed = seed ? *seed : static_cast<std::uint64_t>(e.config.number("run", "seed", 1));
  return e;
}

Potential Experiment::potential() const {
  const auto kind = config.string("potential", "kind", "constant");
  if (kind == "constant") return Potential::constant(grid, config.number("potential", "value", 1.0));
  if (kind == "power") return Potential::power(grid, config.number("potential", "exponent", 2.0));
  if (kind == "bumps") {
    const auto centers = config.numbers("potential", "centers", {});
    const auto heights = config.numbers("potential", "heights", {});
    const auto widths = config.numbers("potential", "widths", {});
    const std::size_t d = static_cast<std::size_t>(grid.dim());
    if (heights.empty() || centers.size() != heights.size() * d || widths.size() != heights.size())
      throw ConfigError("potential bumps need matching centers (d per bump), heights and widths");
    std::vector<Potential::Bump> bumps;
    for (std::size_t k = 0; k < heights.size(); ++k)
      bumps.push_back({Point(centers.begin() + static_cast<std::ptrdiff_t>(k * d),
                             centers.begin() + static_cast<std::ptrdiff_t>((k + 1) * d)),
                       heights[k], widths[k]});
    return Potential::bumps(grid, bumps);
  }
  throw ConfigError("unknown potential kind: " + kind);
}

Weight Experiment::weight(const CriticalRadiusField* rho) const {
  const auto kind = config.string("weight", "kind", "constant");
  if (kind == "constant") return Weight::constant(grid, config.number("weight", "value", 1.0));
  if (kind == "power") return Weight::power(grid, config.number("weight", "exponent", 1.0));
  if (kind == "bracket") return Weight::bracket_power(grid, config.number("weight", "exponent", 1.0));
  if (kind == "rho") {
    if (!rho) throw ConfigError("weight kind rho needs the critical radius field");
    return Weight::rho_modulated(*rho, config.number("weight", "exponent", 1.0));
  }
  throw ConfigError("unknown weight kind: " + kind);
}

Symbol Experiment::symbol() const {
  const auto kind = config.string("symbol", "kind", "log_bracket");
  if (kind == "constant") return Symbol::constant(grid, config.number("symbol", "value", 1.0));
  if (kind == "log_bracket") return Symbol::log_bracket(grid);
  throw ConfigError("unknown symbol kind: " + kind);
}

BallFamilyPolicy Experiment::family_policy() const {
  BallFamilyPolicy p;
  p.center_stride = static_cast<int>(config.number("family", "stride", 4));
  p.radii = config.numbers("family", "radii", {0.5, 1.0, 2.0});
  p.include_boundary = config.boolean("family", "include_boundary", false);
  p.include_box_ball = config.boolean("family", "include_box_ball", false);
  return p;
}

MorreyParams Experiment::params() const {
  MorreyParams p;
  p.p = config.number("params", "p", 2.0);
  p.kappa = config.number("params", "kappa", 0.3);
  p.theta = config.number("params", "theta", 0.0);
  p.validate();
  return p;
}

int Experiment::order() const {
  const double m = config.number("params", "m", 1);
  if (m < 1 || m != std::floor(m)) throw ConfigError("params.m must be a positive integer");
  return static_cast<int>(m);
}

Transform Experiment::transform() const {
  const auto t = config.string("params", "transform", "R");
  if (t == "R") return Transform::Riesz;
  if (t == "Rstar" || t == "R*") return Transform::DualRiesz;
  throw ConfigError("params.transform must be R or Rstar");
}

std::vector<int> Experiment::decay_orders() const {
  std::vector<int> out;
  for (double v : config.numbers("params", "n_list", {0, 1, 2, 4})) out.push_back(static_cast<int>(v));
  return out;
}

TestFunctionSuite Experiment::suite() const {
  TestFunctionSuite s;
  s.seed = seed;
  s.count = static_cast<int>(config.number("suite", "count", 50));
  if (config.has("suite", "generators")) {
    s.generators.clear();
    for (const auto& name : config.strings("suite", "generators", {})) s.generators.push_back(generator_from_name(name));
  }
  return s;
}

EndpointOptions Experiment::endpoint() const {
  EndpointOptions o;
  o.lambda_points = static_cast<int>(config.number("suite", "lambda_points", 10));
  o.lambda_lo = config.number("suite", "lambda_lo", 0.01);
  o.lambda_hi = config.number("suite", "lambda_hi", 100.0);
  return o;
}

OperatorOptions Experiment::operator_options() const {
  OperatorOptions o;
  o.cache_dir = config.string("operator", "cache_dir", "");
  o.max_size = static_cast<std::size_t>(config.number("operator", "max_size", 35937));
  return o;
}

RhoOptions Experiment::rho_options() const {
  RhoOptions o;
  o.tol = config.number("rho", "tol", 1e-6);
  o.full_scan = config.boolean("rho", "full_scan", false);
  return o;
}

Json Experiment::describe() const {
  Json j;
  j["tool"] = "schrolab";
  j["seed"] = seed;
  j["grid"] = {{"d", grid.dim()}, {"n", grid.points_per_axis()}, {"L", grid.half_width()}};
  j["potential"] = potential().descriptor;
  j["weight"] = config.string("weight", "kind", "constant") == "rho"
                    ? "rho(gamma=" + format_double(config.number("weight", "exponent", 1.0)) + ")"
                    : weight().descriptor;
  j["symbol"] = symbol().descriptor;
  const auto p = params();
  j["params"] = {{"p", p.p}, {"kappa", p.kappa}, {"theta", p.theta}, {"m", order()},
                 {"transform", transform_name(transform())}};
  const auto fp = family_policy();
  j["family"] = {{"stride", fp.center_stride}, {"radii", fp.radii}, {"include_boundary", fp.include_boundary},
                 {"include_box_ball", fp.include_box_ball}};
  return j;
}

}  // namespace schrolab
