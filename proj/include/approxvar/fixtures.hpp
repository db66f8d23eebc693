#pragma once

#include <cstdint>
#include <vector>

#include "approxvar/regulated.hpp"
#include "approxvar/selection.hpp"

namespace approxvar {

/// Deterministic uniform double in [lo, hi) built from raw engine output, so
/// results do not depend on the standard library's distribution details.
double rand_uniform(std::uint64_t& state, double lo, double hi);

/// splitmix64 step; used as the seeded RNG everywhere.
std::uint64_t rand_next(std::uint64_t& state);

/// Uniform grid of n points over [lo, hi].
Grid uniform_grid(std::size_t n, double lo = 0.0, double hi = 1.0);

/// Scalar function alternating 0, d, 0, d, ... over m+1 uniform points on
/// [0, 1] (m alternations).
SampledFunction alternating_dirichlet(std::size_t m, double d = 1.0);

/// Random scalar function: n points on a uniform grid, values in [lo, hi].
SampledFunction random_scalar_function(std::uint64_t& state, std::size_t n,
                                       double lo = -1.0, double hi = 1.0);

/// Alternating Dirichlet samples with the mask doubling in length per depth:
/// depth k has 2^k alternations on a dyadic grid (nested refinement).
RefiningFamily dirichlet_refining_family(double d, int depth_limit);

/// Refinements of the linear ramp from v0 to v1 over [0, 1].
RefiningFamily ramp_refining_family(double v0, double v1, int depth_limit);

RefiningFamily constant_refining_family(double value, int depth_limit);

/// f_j = constant c for every j.
FunctionSequence constant_sequence(double c, std::size_t grid_points = 9);

/// f_j alternates between two fixed scalar functions g (odd j) and h (even).
FunctionSequence alternating_pair_sequence(const SampledFunction& g,
                                           const SampledFunction& h);

/// The step functions f_j(t) = x when j!*t is an integer, sampled on the
/// shared grid {k / (2 * jmax!)} so every member lives on one grid. Values in
/// the two-point space {x, y} at unit distance. jmax <= 8.
FunctionSequence factorial_step_sequence(int jmax);

/// Dirichlet pair sequence with values 0 and 1 + 1/j on an alternating grid:
/// converges uniformly to the alternating 0/1 function while every member
/// keeps a tube gap of 1/j at eps = 1/2.
FunctionSequence persistent_gap_sequence(std::size_t grid_points = 9);

/// The uniform limit of persistent_gap_sequence (alternating 0/1 on the same grid).
SampledFunction persistent_gap_limit(std::size_t grid_points = 9);

/// Dirichlet sequence with gap 8^-j around level c: converges uniformly to
/// the constant c, and V_eps(f_j) = 0 once 8^-j <= 2 eps.
FunctionSequence shrinking_gap_sequence(double c = 0.5,
                                        std::size_t grid_points = 9);

/// f_j = base + scale * 4^-j * bump for a fixed random bump; uniformly
/// convergent to base with geometric rate.
FunctionSequence bump_decay_sequence(const SampledFunction& base,
                                     const std::vector<double>& bump,
                                     double scale);

/// Scalar sequence that stays flat on [0, 1] but oscillates ever harder on
/// (1, 2]; bounded variation inside the first window only.
FunctionSequence localized_oscillation_sequence(std::size_t inner_points = 9,
                                                std::size_t outer_points = 9);

}  // namespace approxvar
