#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "approxvar/ext_real.hpp"
#include "approxvar/gridfn.hpp"

namespace approxvar {

/// Certified enclosure of an approximate variation value. `exact` implies
/// lower == upper (within kNumTol) and, for finite values, a witness g with
/// uniform_distance(f, g, p) <= eps and jordan_variation(g, p) == upper.
struct Bracket {
  ExtReal lower;
  ExtReal upper;
  bool exact = false;
  std::optional<SampledFunction> witness;
};

/// Brackets of V_{eps,p}(f) over a strictly decreasing ladder of eps values,
/// for one fixed pseudometric. Both bound sequences are nondecreasing as eps
/// decreases.
struct Profile {
  std::vector<double> eps_ladder;
  std::vector<Bracket> brackets;
  PseudometricId p{0};
};

/// Exact scalar tube minimum: min{ V(g) : |g(t_i) - f(t_i)| <= eps for all i }
/// via a taut-string funnel walk, with a minimizing witness. O(n).
Bracket eps_variation_scalar(const SampledFunction& f, double eps);

/// Lower bound for V_{eps,p}(f): max over increasing index subsequences of
/// the sum of (d_p(f(s_i), f(s_{i-1})) - 2 eps)^+, by an O(n^2) DP. Valid
/// because any tube-feasible g loses at most 2 eps per pair.
double eps_variation_lower(const SampledFunction& f, PseudometricId p,
                           double eps);

struct UpperWitness {
  ExtReal value;           // +inf when some grid point has no feasible candidate
  std::optional<SampledFunction> witness;
};

/// Upper bound: min variation over functions g with g(t_i) drawn from
/// `candidates` and d_p(f(t_i), g(t_i)) <= eps, by layered-graph shortest
/// path. Returns +inf (inf over the empty set) when a layer is infeasible.
/// Ties break toward the smallest candidate index.
UpperWitness eps_variation_upper_dp(const SampledFunction& f, PseudometricId p,
                                    double eps,
                                    std::span<const Point> candidates);

/// V_{eps,p}(f) as a Bracket: exact via taut string for scalar spaces;
/// otherwise lower DP + candidate-set upper bound. The default candidate set
/// is the space's enumeration (all points of a finite space) plus the
/// observed values of f; for coordinate spaces the per-coordinate taut-string
/// witness is recombined into a candidate as well.
Bracket eps_variation(const SampledFunction& f, PseudometricId p, double eps);

/// Per-eps brackets over a strictly decreasing positive ladder. `jobs` > 1
/// computes entries concurrently with results identical to sequential order.
Profile profile(const SampledFunction& f, PseudometricId p,
                std::span<const double> eps_ladder, unsigned jobs = 1);

/// Entry i encloses V_{eps,p} of f restricted to the first i+1 grid points
/// (upper bound for general spaces, exact for scalar). Nondecreasing in i.
std::vector<ExtReal> prefix_eps_variation(const SampledFunction& f,
                                          PseudometricId p, double eps);

/// Closed form for the Dirichlet function with value gap d: Infinite when
/// eps < d/2, Zero when eps >= d; in between the answer is Zero for normed
/// spaces (midpoint construction) and otherwise depends on the space.
enum class DirichletRegime { Infinite, Zero, Indeterminate };
DirichletRegime dirichlet_closed_form(double d, double eps, bool normed);

struct PropertyCheck {
  std::string property;
  bool passed = false;
  std::string detail;
};

struct EssReport {
  std::vector<PropertyCheck> checks;
  bool all_passed() const;
};

/// Verifies the structural properties of the approximate variation on f:
/// (a) monotonicity in eps, (b) monotonicity under restriction, (c) scalar
/// convergence to the Jordan variation at the ladder minimum, (d) the
/// oscillation bound, (e) both additivity inequalities at each split point.
/// Bracket-aware: a violation is reported only when certain.
EssReport check_ess_properties(const SampledFunction& f, PseudometricId p,
                               std::span<const double> eps_ladder,
                               std::span<const std::size_t> split_points);

/// True when the bracket is internally consistent against f: bounds ordered,
/// exactness backed by a witness whose tube distance and variation match.
bool bracket_is_valid(const SampledFunction& f, PseudometricId p, double eps,
                      const Bracket& bracket);

}  // namespace approxvar
