#include "approxvar/fixtures.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace approxvar {

std::uint64_t rand_next(std::uint64_t& state) {
  // splitmix64
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double rand_uniform(std::uint64_t& state, double lo, double hi) {
  const double unit =
      static_cast<double>(rand_next(state) >> 11) * 0x1.0p-53;  // [0, 1)
  return lo + (hi - lo) * unit;
}

Grid uniform_grid(std::size_t n, double lo, double hi) {
  if (n == 0) throw std::invalid_argument("grid needs at least one point");
  std::vector<double> ts(n);
  for (std::size_t i = 0; i < n; ++i) {
    ts[i] = n == 1 ? lo
                   : lo + (hi - lo) * static_cast<double>(i) /
                             static_cast<double>(n - 1);
  }
  return Grid(std::move(ts));
}

SampledFunction alternating_dirichlet(std::size_t m, double d) {
  std::vector<Point> values;
  values.reserve(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    values.push_back(Point::scalar(i % 2 == 0 ? 0.0 : d));
  }
  return SampledFunction(GageSpace::scalar(), uniform_grid(m + 1), std::move(values));
}

SampledFunction random_scalar_function(std::uint64_t& state, std::size_t n,
                                       double lo, double hi) {
  std::vector<Point> values;
  values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    values.push_back(Point::scalar(rand_uniform(state, lo, hi)));
  }
  return SampledFunction(GageSpace::scalar(), uniform_grid(n), std::move(values));
}

RefiningFamily dirichlet_refining_family(double d, int depth_limit) {
  return {[d](int k) {
            return alternating_dirichlet(static_cast<std::size_t>(1) << k, d);
          },
          depth_limit, "dirichlet"};
}

RefiningFamily ramp_refining_family(double v0, double v1, int depth_limit) {
  return {[v0, v1](int k) {
            const std::size_t n = (static_cast<std::size_t>(1) << k) + 1;
            return gen_monotone_ramp(uniform_grid(n), v0, v1);
          },
          depth_limit, "ramp"};
}

RefiningFamily constant_refining_family(double value, int depth_limit) {
  return {[value](int k) {
            const std::size_t n = (static_cast<std::size_t>(1) << k) + 1;
            return gen_monotone_ramp(uniform_grid(n), value, value);
          },
          depth_limit, "constant"};
}

FunctionSequence constant_sequence(double c, std::size_t grid_points) {
  auto f = std::make_shared<SampledFunction>(
      gen_monotone_ramp(uniform_grid(grid_points), c, c));
  return {[f](int) { return *f; }, std::nullopt, "constant"};
}

FunctionSequence alternating_pair_sequence(const SampledFunction& g,
                                           const SampledFunction& h) {
  if (!g.same_grid_and_space(h)) {
    throw std::invalid_argument("alternating pair needs a shared grid and space");
  }
  auto gp = std::make_shared<SampledFunction>(g);
  auto hp = std::make_shared<SampledFunction>(h);
  return {[gp, hp](int j) { return j % 2 == 1 ? *gp : *hp; }, std::nullopt,
          "alternating-pair"};
}

FunctionSequence factorial_step_sequence(int jmax) {
  if (jmax < 1 || jmax > 8) throw std::invalid_argument("factorial sequence needs 1 <= jmax <= 8");
  long fmax = 1;
  for (int i = 2; i <= jmax; ++i) fmax *= i;
  const long denom = 2 * fmax;  // shared grid: k / (2 jmax!), midpoints included
  std::vector<double> ts(denom + 1);
  for (long k = 0; k <= denom; ++k) {
    ts[k] = static_cast<double>(k) / static_cast<double>(denom);
  }
  auto grid = std::make_shared<Grid>(std::move(ts));
  auto space = std::make_shared<GageSpace>(
      GageSpace::finite({"x", "y"}, {{{0.0, 1.0}, {1.0, 0.0}}}));
  return {[grid, space, denom, jmax](int j) {
            if (j < 1 || j > jmax) {
              throw std::invalid_argument("factorial sequence index out of range");
            }
            long fj = 1;
            for (int i = 2; i <= j; ++i) fj *= i;
            const long step = denom / fj;  // j! * t integer iff k % step == 0
            std::vector<Point> values(denom + 1, Point::index(1));
            for (long k = 0; k <= denom; k += step) values[k] = Point::index(0);
            return SampledFunction(*space, *grid, std::move(values));
          },
          jmax, "factorial-step"};
}

FunctionSequence persistent_gap_sequence(std::size_t grid_points) {
  auto grid = std::make_shared<Grid>(uniform_grid(grid_points));
  return {[grid](int j) {
            std::vector<Point> values;
            values.reserve(grid->size());
            const double y = 1.0 + 1.0 / static_cast<double>(j);
            for (std::size_t i = 0; i < grid->size(); ++i) {
              values.push_back(Point::scalar(i % 2 == 0 ? 0.0 : y));
            }
            return SampledFunction(GageSpace::scalar(), *grid, std::move(values));
          },
          std::nullopt, "persistent-gap"};
}

SampledFunction persistent_gap_limit(std::size_t grid_points) {
  return alternating_dirichlet(grid_points - 1, 1.0);
}

FunctionSequence shrinking_gap_sequence(double c, std::size_t grid_points) {
  auto grid = std::make_shared<Grid>(uniform_grid(grid_points));
  return {[grid, c](int j) {
            const double gap = std::pow(8.0, -static_cast<double>(j));
            std::vector<Point> values;
            values.reserve(grid->size());
            for (std::size_t i = 0; i < grid->size(); ++i) {
              values.push_back(Point::scalar(i % 2 == 0 ? c - gap / 2 : c + gap / 2));
            }
            return SampledFunction(GageSpace::scalar(), *grid, std::move(values));
          },
          std::nullopt, "shrinking-gap"};
}

FunctionSequence bump_decay_sequence(const SampledFunction& base,
                                     const std::vector<double>& bump,
                                     double scale) {
  if (base.space().kind() != SpaceKind::Scalar) {
    throw std::invalid_argument("bump decay fixture is scalar");
  }
  if (bump.size() != base.size()) {
    throw std::invalid_argument("bump length must match the grid");
  }
  auto bp = std::make_shared<SampledFunction>(base);
  auto bumps = std::make_shared<std::vector<double>>(bump);
  return {[bp, bumps, scale](int j) {
            const double amp = scale * std::pow(4.0, -static_cast<double>(j));
            std::vector<Point> values;
            values.reserve(bp->size());
            for (std::size_t i = 0; i < bp->size(); ++i) {
              values.push_back(
                  Point::scalar(bp->value(i).scalar_value() + amp * (*bumps)[i]));
            }
            return SampledFunction(bp->space(), bp->grid(), std::move(values));
          },
          std::nullopt, "bump-decay"};
}

FunctionSequence localized_oscillation_sequence(std::size_t inner_points,
                                                std::size_t outer_points) {
  std::vector<double> ts;
  for (std::size_t i = 0; i < inner_points; ++i) {
    ts.push_back(static_cast<double>(i) / static_cast<double>(inner_points - 1));
  }
  for (std::size_t i = 1; i <= outer_points; ++i) {
    ts.push_back(1.0 + static_cast<double>(i) / static_cast<double>(outer_points));
  }
  auto grid = std::make_shared<Grid>(std::move(ts));
  const std::size_t inner = inner_points;
  return {[grid, inner](int j) {
            std::vector<Point> values;
            values.reserve(grid->size());
            for (std::size_t i = 0; i < grid->size(); ++i) {
              if (i < inner) {
                values.push_back(Point::scalar(0.0));
              } else {
                // Oscillation amplitude grows with j outside the first window.
                const double amp = static_cast<double>(j);
                values.push_back(Point::scalar(i % 2 == 0 ? 0.0 : amp));
              }
            }
            return SampledFunction(GageSpace::scalar(), *grid, std::move(values));
          },
          std::nullopt, "localized-oscillation"};
}

}  // namespace approxvar
