#pragma once

// Discrete universe: a truncated uniform lattice on [-L, L]^d with cell
// quadrature, sampled fields, and open balls with explicit membership.
//
// Index convention (also the on-disk order of field arrays):
//   index = sum_k i_k * n^k,   x_k = -L + 2L * i_k / (n - 1).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace schrolab {

using Point = std::vector<double>;

class Grid {
 public:
  Grid(int dim, int points_per_axis, double half_width);

  int dim() const { return dim_; }
  int points_per_axis() const { return n_; }
  double half_width() const { return half_width_; }
  double spacing() const { return spacing_; }
  double cell_volume() const { return cell_volume_; }
  std::size_t size() const { return size_; }
  // Length of the box diagonal, 2L*sqrt(d).
  double diagonal() const;

  std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }
  int axis_index(std::size_t index, int axis) const {
    return static_cast<int>((index / strides_[static_cast<std::size_t>(axis)]) %
                            static_cast<std::size_t>(n_));
  }
  double axis_coordinate(int i) const;
  std::span<const double> coords(std::size_t index) const {
    return {coords_->data() + index * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }
  Point point(std::size_t index) const;
  double norm(std::size_t index) const;
  std::size_t index_of(std::span<const int> multi) const;
  // Index of the lattice point equal to p (within 1e-9 h), if any.
  std::optional<std::size_t> index_at(std::span<const double> p) const;
  // Middle lattice point (the origin when n is odd).
  std::size_t center_index() const;

  bool operator==(const Grid& other) const;
  bool operator!=(const Grid& other) const { return !(*this == other); }

  // Plain key-value text: "d = 3\nL = 4\nn = 17\n".
  std::string descriptor() const;
  static Grid from_descriptor(std::string_view text);

 private:
  int dim_;
  int n_;
  double half_width_;
  double spacing_;
  double cell_volume_;
  std::size_t size_;
  std::vector<std::size_t> strides_;
  std::shared_ptr<const std::vector<double>> coords_;
};

struct ScalarField {
  Grid grid;
  std::vector<double> values;

  ScalarField(Grid g, std::vector<double> v);
  static ScalarField constant(const Grid& g, double c);
  static ScalarField sample(const Grid& g,
                            const std::function<double(std::span<const double>)>& fn);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

// d-component field, e.g. the output of the Riesz transform.
struct VectorField {
  Grid grid;
  std::vector<std::vector<double>> components;

  VectorField(Grid g, std::vector<std::vector<double>> comps);
  // Pointwise Euclidean norm over components.
  ScalarField magnitude() const;
};

class Ball {
 public:
  Ball(const Grid& grid, Point center, double radius);
  static Ball at_index(const Grid& grid, std::size_t center_index, double radius);

  const Grid& grid() const { return grid_; }
  const Point& center() const { return center_; }
  double radius() const { return radius_; }
  std::optional<std::size_t> center_index() const { return center_index_; }
  std::span<const std::uint32_t> members() const { return members_; }
  std::size_t count() const { return members_.size(); }
  double discrete_volume() const { return static_cast<double>(members_.size()) * grid_.cell_volume(); }
  // True when the t-dilate stays inside the closed box [-L, L]^d.
  bool inside_domain(double t = 1.0) const;

 private:
  Grid grid_;
  Point center_;
  double radius_;
  std::optional<std::size_t> center_index_;
  std::vector<std::uint32_t> members_;
};

// Lebesgue measure of the continuum ball of radius r in R^d.
double continuum_ball_volume(int d, double r);

// cell_volume * sum over members of f.
double integrate(const ScalarField& f, const Ball& ball);
// w(B) for a nonnegative weight; throws "not a weight" on a negative member.
double measure(const ScalarField& w, const Ball& ball);
// Unweighted mean of f over the members; exact for constant f.
double ball_mean(const ScalarField& f, const Ball& ball);
Ball dilate(const Ball& ball, double t);

// sum_i f_i * |cell_i ∩ B(center, r)| with cells the cubes of side h around
// each node. Continuous in r; used where point-membership quadrature is too
// coarse (sub-cell radii).
double coverage_integral(const ScalarField& f, std::span<const double> center, double r);

struct BallFamilyPolicy {
  int center_stride = 1;
  std::vector<double> radii;
  bool include_boundary = false;  // keep balls whose double leaves the box
  bool include_box_ball = false;  // add one ball containing every grid point
};

struct BallFamily {
  BallFamilyPolicy policy;
  std::vector<Ball> balls;

  std::size_t size() const { return balls.size(); }
};

// Lattice points whose axis indices are mid ± k*stride.
std::vector<std::size_t> family_centers(const Grid& grid, int stride);
BallFamily generate_ball_family(const Grid& grid, const BallFamilyPolicy& policy);
// Geometric ladder r_min * 2^k, k = 0..count-1.
std::vector<double> geometric_radii(double r_min, int count);

void write_grid_descriptor(const Grid& grid, const std::filesystem::path& path);
Grid read_grid_descriptor(const std::filesystem::path& path);
// One value per line, %.17g, row-major index order.
void write_field_text(const ScalarField& f, const std::filesystem::path& path);
ScalarField read_field_text(const Grid& grid, const std::filesystem::path& path);
// Raw native-endian float64 array, row-major index order, no header.
void write_field_binary(const ScalarField& f, const std::filesystem::path& path);
ScalarField read_field_binary(const Grid& grid, const std::filesystem::path& path);

}  // namespace schrolab
