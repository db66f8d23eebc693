#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "approxvar/gage.hpp"

namespace approxvar {

/// Strictly increasing finite list of finite reals. Restrictions share the
/// underlying storage.
class Grid {
 public:
  explicit Grid(std::vector<double> points);

  std::size_t size() const { return count_; }
  double operator[](std::size_t i) const { return (*points_)[offset_ + i]; }
  double front() const { return (*this)[0]; }
  double back() const { return (*this)[count_ - 1]; }

  std::span<const double> points() const {
    return {points_->data() + offset_, count_};
  }

  /// Half-open index range [first, last) of grid points inside [lo, hi];
  /// empty when no point falls in the window.
  std::pair<std::size_t, std::size_t> index_window(double lo, double hi) const;

  /// View of the index range [first, last); shares storage.
  Grid slice(std::size_t first, std::size_t last) const;

  friend bool operator==(const Grid& a, const Grid& b);

 private:
  Grid(std::shared_ptr<const std::vector<double>> points, std::size_t offset,
       std::size_t count)
      : points_(std::move(points)), offset_(offset), count_(count) {}

  std::shared_ptr<const std::vector<double>> points_;
  std::size_t offset_ = 0;
  std::size_t count_ = 0;
};

/// A function sampled on a finite grid with values in a gage space.
/// Immutable; restrictions are views over the same storage.
class SampledFunction {
 public:
  SampledFunction(GageSpace space, Grid grid, std::vector<Point> values);

  const GageSpace& space() const { return *space_; }
  std::shared_ptr<const GageSpace> space_ptr() const { return space_; }
  const Grid& grid() const { return grid_; }
  std::size_t size() const { return grid_.size(); }
  double t(std::size_t i) const { return grid_[i]; }
  const Point& value(std::size_t i) const { return (*values_)[offset_ + i]; }

  /// Restriction to grid points in [lo, hi]. Throws when the window
  /// contains no grid point.
  SampledFunction restrict_to(double lo, double hi) const;

  /// T ∩ (-inf, t_i]: the first i+1 points.
  SampledFunction prefix_through(std::size_t i) const;
  /// T ∩ [t_i, +inf): points from index i on.
  SampledFunction suffix_from(std::size_t i) const;

  bool same_grid_and_space(const SampledFunction& other) const;

 private:
  SampledFunction(std::shared_ptr<const GageSpace> space, Grid grid,
                  std::shared_ptr<const std::vector<Point>> values,
                  std::size_t offset)
      : space_(std::move(space)),
        grid_(std::move(grid)),
        values_(std::move(values)),
        offset_(offset) {}

  std::shared_ptr<const GageSpace> space_;
  Grid grid_;
  std::shared_ptr<const std::vector<Point>> values_;
  std::size_t offset_ = 0;
};

/// Sum of consecutive d_p-distances. On a finite grid this realizes the
/// supremum over all partitions (triangle inequality).
double jordan_variation(const SampledFunction& f, PseudometricId p);

/// d_p-diameter of the image: max over all pairs s,t of d_p(f(s), f(t)).
double oscillation(const SampledFunction& f, PseudometricId p);

/// max over t of d_p(f(t), g(t)); f and g must share grid and space.
double uniform_distance(const SampledFunction& f, const SampledFunction& g,
                        PseudometricId p);

/// Entry i is the variation of f restricted to the first i+1 grid points.
std::vector<double> prefix_variation(const SampledFunction& f,
                                     PseudometricId p);

/// Value x where the mask is true, y elsewhere. Mask length must equal the
/// grid length.
SampledFunction gen_dirichlet(const GageSpace& space, const Grid& grid,
                              const Point& x, const Point& y,
                              const std::vector<bool>& rational_mask);

/// Step function on the grid {k/j!} (plus midpoints (k-1/2)/j! on request)
/// over a two-point space {x, y} at unit distance: value x where j!*t is an
/// integer, y elsewhere. Requires j <= 8.
SampledFunction gen_factorial_step(int j, bool include_midpoints);

/// Scalar values linearly interpolated from v0 to v1 across grid indices.
SampledFunction gen_monotone_ramp(const Grid& grid, double v0, double v1);

/// CSV load/store. Header is `t,v` for scalar spaces, `t,v0,..,v{N-1}` for
/// coordinate spaces and `t,idx` for finite spaces; `t` must be strictly
/// increasing. Parse errors carry 1-based line numbers.
SampledFunction load_function_csv(std::istream& in, const GageSpace& space,
                                  const std::string& name = "<stream>");
SampledFunction load_function_csv_file(const std::string& path,
                                       const GageSpace& space);
void save_function_csv(std::ostream& out, const SampledFunction& f);
void save_function_csv_file(const std::string& path, const SampledFunction& f);

/// Formats a double so that reading it back reproduces the exact bits.
std::string format_double(double v);

}  // namespace approxvar
