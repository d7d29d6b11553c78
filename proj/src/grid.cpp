#include <schrolab/grid.hpp>
#include <schrolab/simd.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace schrolab {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Calls fn(index) for every lattice point with lo[k] <= i_k <= hi[k], in
// increasing index order.
template <class Fn>
void for_each_in_box(const Grid& g, const std::vector<int>& lo, const std::vector<int>& hi, Fn&& fn) {
  const int d = g.dim();
  for (int k = 0; k < d; ++k)
    if (lo[static_cast<std::size_t>(k)] > hi[static_cast<std::size_t>(k)]) return;
  std::vector<int> idx(lo);
  while (true) {
    fn(g.index_of(idx));
    int k = 0;
    while (k < d) {
      auto ku = static_cast<std::size_t>(k);
      if (++idx[ku] <= hi[ku]) break;
      idx[ku] = lo[ku];
      ++k;
    }
    if (k == d) return;
  }
}

}  // namespace

Grid::Grid(int dim, int points_per_axis, double half_width)
    : dim_(dim), n_(points_per_axis), half_width_(half_width) {
  if (dim < 1) throw std::invalid_argument("grid dimension must be >= 1");
  if (points_per_axis < 2) throw std::invalid_argument("grid needs at least 2 points per axis");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("grid half width must be positive");
  spacing_ = 2.0 * half_width / static_cast<double>(n_ - 1);
  cell_volume_ = std::pow(spacing_, dim_);
  size_ = 1;
  strides_.resize(static_cast<std::size_t>(dim_));
  for (int k = 0; k < dim_; ++k) {
    strides_[static_cast<std::size_t>(k)] = size_;
    if (size_ > std::numeric_limits<std::uint32_t>::max() / static_cast<std::size_t>(n_))
      throw std::invalid_argument("grid too large");
    size_ *= static_cast<std::size_t>(n_);
  }
  auto coords = std::make_shared<std::vector<double>>(size_ * static_cast<std::size_t>(dim_));
  for (std::size_t i = 0; i < size_; ++i)
    for (int k = 0; k < dim_; ++k)
      (*coords)[i * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(k)] =
          axis_coordinate(axis_index(i, k));
  coords_ = std::move(coords);
}

double Grid::diagonal() const { return 2.0 * half_width_ * std::sqrt(static_cast<double>(dim_)); }

double Grid::axis_coordinate(int i) const {
  return -half_width_ + 2.0 * half_width_ * static_cast<double>(i) / static_cast<double>(n_ - 1);
}

Point Grid::point(std::size_t index) const {
  auto c = coords(index);
  return Point(c.begin(), c.end());
}

double Grid::norm(std::size_t index) const {
  double s = 0.0;
  for (double x : coords(index)) s += x * x;
  return std::sqrt(s);
}

std::size_t Grid::index_of(std::span<const int> multi) const {
  std::size_t idx = 0;
  for (int k = 0; k < dim_; ++k) {
    const int i = multi[static_cast<std::size_t>(k)];
    if (i < 0 || i >= n_) throw std::out_of_range("lattice index out of range");
    idx += static_cast<std::size_t>(i) * strides_[static_cast<std::size_t>(k)];
  }
  return idx;
}

std::optional<std::size_t> Grid::index_at(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != dim_) return std::nullopt;
  std::vector<int> multi(static_cast<std::size_t>(dim_));
  for (int k = 0; k < dim_; ++k) {
    const double t = (p[static_cast<std::size_t>(k)] + half_width_) / spacing_;
    const double r = std::round(t);
    if (std::abs(t - r) > 1e-9 || r < 0 || r > n_ - 1) return std::nullopt;
    multi[static_cast<std::size_t>(k)] = static_cast<int>(r);
  }
  return index_of(multi);
}

std::size_t Grid::center_index() const {
  std::vector<int> multi(static_cast<std::size_t>(dim_), (n_ - 1) / 2);
  return index_of(multi);
}

bool Grid::operator==(const Grid& other) const {
  return dim_ == other.dim_ && n_ == other.n_ && half_width_ == other.half_width_;
}

std::string Grid::descriptor() const {
  std::ostringstream os;
  os.precision(17);
  os << "d = " << dim_ << "\nL = " << half_width_ << "\nn = " << n_ << "\n";
  return os.str();
}

Grid Grid::from_descriptor(std::string_view text) {
  std::optional<int> d, n;
  std::optional<double> L;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (!trim(line).empty()) throw std::invalid_argument("bad grid descriptor line: " + line);
      continue;
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string val = trim(std::string_view(line).substr(eq + 1));
    if (key == "d") d = std::stoi(val);
    else if (key == "n") n = std::stoi(val);
    else if (key == "L") L = std::stod(val);
    else throw std::invalid_argument("unknown grid descriptor key: " + key);
  }
  if (!d || !n || !L) throw std::invalid_argument("grid descriptor needs d, L and n");
  return Grid(*d, *n, *L);
}

ScalarField::ScalarField(Grid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size())
    throw std::invalid_argument("field length does not match grid size");
}

ScalarField ScalarField::constant(const Grid& g, double c) {
  return ScalarField(g, std::vector<double>(g.size(), c));
}

ScalarField ScalarField::sample(const Grid& g,
                                const std::function<double(std::span<const double>)>& fn) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = fn(g.coords(i));
  return ScalarField(g, std::move(v));
}

VectorField::VectorField(Grid g, std::vector<std::vector<double>> comps)
    : grid(std::move(g)), components(std::move(comps)) {
  for (const auto& c : components)
    if (c.size() != grid.size()) throw std::invalid_argument("component length does not match grid");
}

ScalarField VectorField::magnitude() const {
  std::vector<double> m(grid.size(), 0.0);
  for (const auto& c : components)
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += c[i] * c[i];
  for (double& x : m) x = std::sqrt(x);
  return ScalarField(grid, std::move(m));
}

Ball::Ball(const Grid& grid, Point center, double radius)
    : grid_(grid), center_(std::move(center)), radius_(radius) {
  if (static_cast<int>(center_.size()) != grid.dim())
    throw std::invalid_argument("ball center has wrong dimension");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("ball radius must be positive");
  center_index_ = grid.index_at(center_);
  const int d = grid.dim();
  const double h = grid.spacing();
  const double L = grid.half_width();
  std::vector<int> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    const double c = center_[static_cast<std::size_t>(k)];
    lo[static_cast<std::size_t>(k)] = std::max(0, static_cast<int>(std::floor((c - radius + L) / h)));
    hi[static_cast<std::size_t>(k)] =
        std::min(grid.points_per_axis() - 1, static_cast<int>(std::ceil((c + radius + L) / h)));
  }
  const double r2 = radius * radius;
  for_each_in_box(grid, lo, hi, [&](std::size_t i) {
    auto x = grid.coords(i);
    double s = 0.0;
    for (int k = 0; k < d; ++k) {
      const double dx = x[static_cast<std::size_t>(k)] - center_[static_cast<std::size_t>(k)];
      s += dx * dx;
    }
    if (s < r2) members_.push_back(static_cast<std::uint32_t>(i));
  });
}

Ball Ball::at_index(const Grid& grid, std::size_t center_index, double radius) {
  return Ball(grid, grid.point(center_index), radius);
}

bool Ball::inside_domain(double t) const {
  const double L = grid_.half_width();
  const double reach = t * radius_;
  const double slack = 1e-12 * L;
  for (double c : center_)
    if (c - reach < -L - slack || c + reach > L + slack) return false;
  return true;
}

double continuum_ball_volume(int d, double r) {
  const double half_d = 0.5 * static_cast<double>(d);
  return std::pow(std::numbers::pi, half_d) / std::tgamma(half_d + 1.0) * std::pow(r, d);
}

double integrate(const ScalarField& f, const Ball& ball) {
  if (f.grid != ball.grid()) throw std::invalid_argument("grid mismatch");
  return ball.grid().cell_volume() * simd::gather_sum(f.values, ball.members());
}

double measure(const ScalarField& w, const Ball& ball) {
  if (w.grid != ball.grid()) throw std::invalid_argument("grid mismatch");
  for (auto i : ball.members())
    if (w.values[i] < 0.0) throw std::invalid_argument("not a weight");
  return integrate(w, ball);
}

double ball_mean(const ScalarField& f, const Ball& ball) {
  if (f.grid != ball.grid()) throw std::invalid_argument("grid mismatch");
  const auto members = ball.members();
  if (members.empty()) throw std::invalid_argument("empty ball");
  const double ref = f.values[members.front()];
  double s = 0.0;
  for (auto i : members) s += f.values[i] - ref;
  return ref + s / static_cast<double>(members.size());
}

Ball dilate(const Ball& ball, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("dilation factor must be positive");
  const Grid& g = ball.grid();
  const double r = t * ball.radius();
  for (double c : ball.center())
    if (c + r < -g.half_width() || c - r > g.half_width())
      throw std::invalid_argument("dilated ball misses the grid");
  return Ball(g, ball.center(), r);
}

double coverage_integral(const ScalarField& f, std::span<const double> center, double r) {
  const Grid& g = f.grid;
  const int d = g.dim();
  const auto du = static_cast<std::size_t>(d);
  if (center.size() != du) throw std::invalid_argument("center has wrong dimension");
  if (!(r > 0.0)) return 0.0;
  const double h = g.spacing();
  const double half = 0.5 * h;
  const double L = g.half_width();
  const double r2 = r * r;
  // Fixed resolution: an r-dependent one would make the result jump in r.
  constexpr int s = 12;

  std::vector<int> lo(du), hi(du);
  for (std::size_t k = 0; k < du; ++k) {
    lo[k] = std::max(0, static_cast<int>(std::floor((center[k] - r - half + L) / h)));
    hi[k] = std::min(g.points_per_axis() - 1, static_cast<int>(std::ceil((center[k] + r + half + L) / h)));
  }

  std::vector<double> a(du), b(du), step(du);
  std::vector<int> sub(du > 0 ? du - 1 : 0);
  double total = 0.0;
  for_each_in_box(g, lo, hi, [&](std::size_t i) {
    auto x = g.coords(i);
    double near2 = 0.0, far2 = 0.0;
    for (std::size_t k = 0; k < du; ++k) {
      const double cl = x[k] - half, ch = x[k] + half;
      const double nearest = std::clamp(center[k], cl, ch) - center[k];
      const double farthest = std::max(std::abs(cl - center[k]), std::abs(ch - center[k]));
      near2 += nearest * nearest;
      far2 += farthest * farthest;
    }
    if (near2 >= r2) return;
    double vol;
    if (far2 <= r2) {
      vol = g.cell_volume();
    } else {
      // Midpoint rule over transverse axes, exact chord along the last axis.
      double area = 1.0;
      for (std::size_t k = 0; k + 1 < du; ++k) {
        a[k] = std::max(x[k] - half, center[k] - r);
        b[k] = std::min(x[k] + half, center[k] + r);
        step[k] = (b[k] - a[k]) / s;
        area *= step[k];
      }
      const std::size_t last = du - 1;
      const double zl = x[last] - half, zh = x[last] + half;
      std::fill(sub.begin(), sub.end(), 0);
      double len_sum = 0.0;
      while (true) {
        double t2 = 0.0;
        for (std::size_t k = 0; k + 1 < du; ++k) {
          const double t = a[k] + (sub[k] + 0.5) * step[k] - center[k];
          t2 += t * t;
        }
        if (t2 < r2) {
          const double hc = std::sqrt(r2 - t2);
          const double seg = std::min(zh, center[last] + hc) - std::max(zl, center[last] - hc);
          if (seg > 0.0) len_sum += seg;
        }
        std::size_t k = 0;
        while (k + 1 < du) {
          if (++sub[k] < s) break;
          sub[k] = 0;
          ++k;
        }
        if (k + 1 >= du) break;
      }
      vol = area * len_sum;
    }
    total += f.values[i] * vol;
  });
  return total;
}

std::vector<std::size_t> family_centers(const Grid& grid, int stride) {
  if (stride < 1) throw std::invalid_argument("center stride must be >= 1");
  const int n = grid.points_per_axis();
  const int mid = (n - 1) / 2;
  std::vector<int> axis;
  for (int i = mid % stride; i < n; i += stride) axis.push_back(i);
  const int d = grid.dim();
  std::vector<int> lo(static_cast<std::size_t>(d), 0);
  std::vector<int> hi(static_cast<std::size_t>(d), static_cast<int>(axis.size()) - 1);
  std::vector<std::size_t> out;
  std::vector<int> multi(static_cast<std::size_t>(d));
  // Enumerate the product of per-axis positions.
  std::vector<int> pos(lo);
  while (true) {
    for (int k = 0; k < d; ++k)
      multi[static_cast<std::size_t>(k)] = axis[static_cast<std::size_t>(pos[static_cast<std::size_t>(k)])];
    out.push_back(grid.index_of(multi));
    int k = 0;
    while (k < d) {
      auto ku = static_cast<std::size_t>(k);
      if (++pos[ku] <= hi[ku]) break;
      pos[ku] = 0;
      ++k;
    }
    if (k == d) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> geometric_radii(double r_min, int count) {
  std::vector<double> r;
  for (int k = 0; k < count; ++k) r.push_back(r_min * std::ldexp(1.0, k));
  return r;
}

BallFamily generate_ball_family(const Grid& grid, const BallFamilyPolicy& policy) {
  if (policy.radii.empty()) throw std::invalid_argument("empty radius ladder");
  for (std::size_t k = 0; k < policy.radii.size(); ++k) {
    if (!(policy.radii[k] > 0.0)) throw std::invalid_argument("radii must be positive");
    if (k > 0 && !(policy.radii[k] > policy.radii[k - 1]))
      throw std::invalid_argument("radii must be strictly increasing");
  }
  BallFamily fam{policy, {}};
  for (std::size_t c : family_centers(grid, policy.center_stride)) {
    for (double r : policy.radii) {
      Ball b = Ball::at_index(grid, c, r);
      if (b.count() == 0) continue;
      if (!policy.include_boundary && !b.inside_domain(2.0)) continue;
      fam.balls.push_back(std::move(b));
    }
  }
  if (policy.include_box_ball)
    fam.balls.push_back(Ball::at_index(grid, grid.center_index(), grid.diagonal() + grid.spacing()));
  return fam;
}

void write_grid_descriptor(const Grid& grid, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << grid.descriptor();
}

Grid read_grid_descriptor(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return Grid::from_descriptor(ss.str());
}

void write_field_text(const ScalarField& f, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os.precision(17);
  for (double v : f.values) os << v << '\n';
}

ScalarField read_field_text(const Grid& grid, const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::vector<double> v;
  v.reserve(grid.size());
  double x;
  while (is >> x) v.push_back(x);
  return ScalarField(grid, std::move(v));
}

void write_field_binary(const ScalarField& f, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os.write(reinterpret_cast<const char*>(f.values.data()),
           static_cast<std::streamsize>(f.values.size() * sizeof(double)));
}

ScalarField read_field_binary(const Grid& grid, const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::vector<double> v(grid.size());
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (is.gcount() != static_cast<std::streamsize>(v.size() * sizeof(double)))
    throw std::runtime_error("short field file " + path.string());
  return ScalarField(grid, std::move(v));
}

}  // namespace schrolab
