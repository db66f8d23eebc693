#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "approxvar/approx_variation.hpp"
#include "json.hpp"

namespace approxvar {

/// Generator of samples of one underlying function on a nested sequence of
/// grids, Grid_1 ⊂ Grid_2 ⊂ ... All samples must share the gage space.
struct RefiningFamily {
  std::function<SampledFunction(int depth)> generate;  // depth = 1..depth_limit
  int depth_limit = 0;
  std::string label;
};

enum class GrowthVerdict { Bounded, Diverging, Inconclusive };

std::string to_string(GrowthVerdict v);

struct GrowthCell {
  double eps = 0.0;
  std::size_t p = 0;
  std::vector<double> lowers;      // eps_variation_lower per depth
  std::vector<std::size_t> sizes;  // grid size per depth
  GrowthVerdict verdict = GrowthVerdict::Inconclusive;
  double slope = 0.0;  // fitted d(lower)/d(grid size) over the last depths
};

struct GrowthReport {
  std::vector<GrowthCell> cells;
  bool any_diverging() const;
  nlohmann::json to_json() const;
};

/// Relative stabilization tolerance for a Bounded verdict.
inline constexpr double kGrowthTol = 1e-6;

/// Flags non-regulated behavior: computes the variation lower bound at every
/// refinement depth and calls a cell Diverging when the bounds keep growing
/// at least linearly in grid size (last >= 4x first and positive fitted
/// slope), Bounded when they stabilize within kGrowthTol, else Inconclusive.
/// Lower bounds only, so a Diverging verdict is sound.
GrowthReport classify_regulated(const RefiningFamily& family,
                                std::span<const double> eps_ladder,
                                std::span<const PseudometricId> ps);

struct StepApproximant {
  SampledFunction g;
  std::size_t jump_count = 0;
};

/// Piecewise-constant g with uniform_distance(f, g, p) <= eps, built by
/// greedy maximal-run covering: extend the current run while its value set
/// has d_p-diameter <= 2 eps. Scalar and coordinate runs take the Chebyshev
/// center; finite spaces take the smallest-index covering candidate and
/// throw InfeasibleError when a point has no candidate within eps.
StepApproximant step_approximant(const SampledFunction& f, PseudometricId p,
                                 double eps);

struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Side { Left, Right };

/// Empirical Cauchy defect at tau: max of d_p(f(s), f(t)) over grid points in
/// (tau - window, tau) for the left side, (tau, tau + window) for the right.
/// Throws when the window contains no grid point.
double cauchy_defect(const SampledFunction& f, PseudometricId p, double tau,
                     double window, Side side = Side::Left);

}  // namespace approxvar
