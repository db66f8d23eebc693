#include "approxvar/approx_variation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "approxvar/parallel.hpp"

namespace approxvar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct TautState {
  double cost = 0.0;
  std::vector<double> lo, hi;      // funnel interval after each tube
  std::vector<double> prefix;      // cost after each tube = exact prefix value
};

// Funnel walk through the tube [values[i] - eps, values[i] + eps]. The state
// (cost, [lo, hi]) encodes the minimal-variation profile as cost + distance
// to [lo, hi]; intersecting with the next tube either shrinks the interval
// for free or forces a jump to the nearer tube edge.
TautState taut_walk(std::span<const double> values, double eps) {
  TautState st;
  const std::size_t n = values.size();
  st.lo.resize(n);
  st.hi.resize(n);
  st.prefix.resize(n);
  double lo = values[0] - eps, hi = values[0] + eps;
  st.lo[0] = lo;
  st.hi[0] = hi;
  st.prefix[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double tl = values[i] - eps, th = values[i] + eps;
    if (tl > hi) {
      st.cost += tl - hi;
      lo = hi = tl;
    } else if (th < lo) {
      st.cost += lo - th;
      lo = hi = th;
    } else {
      lo = std::max(lo, tl);
      hi = std::min(hi, th);
    }
    st.lo[i] = lo;
    st.hi[i] = hi;
    st.prefix[i] = st.cost;
  }
  return st;
}

std::vector<double> taut_witness(const TautState& st) {
  const std::size_t n = st.lo.size();
  std::vector<double> w(n);
  w[n - 1] = 0.5 * (st.lo[n - 1] + st.hi[n - 1]);
  for (std::size_t i = n - 1; i-- > 0;) {
    w[i] = std::clamp(w[i + 1], st.lo[i], st.hi[i]);
  }
  return w;
}

std::vector<double> scalar_values(const SampledFunction& f, PseudometricId p) {
  std::vector<double> v(f.size());
  if (f.space().kind() == SpaceKind::Scalar) {
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = f.value(i).scalar_value();
  } else {
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = f.value(i).coord_values()[p.index()];
  }
  return v;
}

void require_positive_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("eps must be a positive finite real");
  }
}

// Candidate pool for the general-space upper bound: the space's enumeration
// (all points for a finite space), then the observed values of f, deduped.
std::vector<Point> default_candidates(const SampledFunction& f) {
  std::vector<Point> pool;
  const GageSpace& space = f.space();
  if (space.kind() == SpaceKind::Finite && space.candidate_enumeration().empty()) {
    for (std::size_t i = 0; i < space.point_count(); ++i) pool.push_back(Point::index(i));
  }
  for (const Point& c : space.candidate_enumeration()) pool.push_back(c);
  for (std::size_t i = 0; i < f.size(); ++i) pool.push_back(f.value(i));
  std::vector<Point> dedup;
  for (const Point& c : pool) {
    if (std::find(dedup.begin(), dedup.end(), c) == dedup.end()) dedup.push_back(c);
  }
  return dedup;
}

// Recombines the per-coordinate taut-string witness into a full point set:
// coordinate p follows the witness, other coordinates copy f.
std::vector<Point> recombined_coordinate_witness(const SampledFunction& f,
                                                 PseudometricId p, double eps) {
  const auto vals = scalar_values(f, p);
  const auto w = taut_witness(taut_walk(vals, eps));
  std::vector<Point> out;
  out.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<double> coords = f.value(i).coord_values();
    coords[p.index()] = w[i];
    out.push_back(Point::coords(std::move(coords)));
  }
  return out;
}

}  // namespace

Bracket eps_variation_scalar(const SampledFunction& f, double eps) {
  if (f.space().kind() != SpaceKind::Scalar) {
    throw std::invalid_argument("eps_variation_scalar needs a scalar space");
  }
  require_positive_eps(eps);
  const auto vals = scalar_values(f, PseudometricId(0));
  const TautState st = taut_walk(vals, eps);
  std::vector<Point> wpts;
  for (double w : taut_witness(st)) wpts.push_back(Point::scalar(w));
  Bracket b;
  b.lower = st.cost;
  b.upper = st.cost;
  b.exact = true;
  b.witness = SampledFunction(f.space(), f.grid(), std::move(wpts));
  return b;
}

double eps_variation_lower(const SampledFunction& f, PseudometricId p,
                           double eps) {
  f.space().require_pseudometric(p);
  require_positive_eps(eps);
  const std::size_t n = f.size();
  // best[i] = best subsequence sum ending at index i.
  std::vector<double> best(n, 0.0);
  double answer = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double gain =
          std::max(0.0, f.space().distance(p, f.value(i), f.value(j)) - 2.0 * eps);
      best[i] = std::max(best[i], best[j] + gain);
    }
    answer = std::max(answer, best[i]);
  }
  return answer;
}

UpperWitness eps_variation_upper_dp(const SampledFunction& f, PseudometricId p,
                                    double eps,
                                    std::span<const Point> candidates) {
  f.space().require_pseudometric(p);
  require_positive_eps(eps);
  if (candidates.empty()) throw std::invalid_argument("candidate set must be nonempty");
  for (const Point& c : candidates) f.space().require_point(c);

  const std::size_t n = f.size(), m = candidates.size();
  std::vector<double> cost(m, kInf);
  std::vector<std::size_t> back(n * m, 0);
  for (std::size_t c = 0; c < m; ++c) {
    if (f.space().distance(p, f.value(0), candidates[c]) <= eps) cost[c] = 0.0;
  }
  for (std::size_t i = 1; i < n; ++i) {
    std::vector<double> next(m, kInf);
    for (std::size_t c = 0; c < m; ++c) {
      if (f.space().distance(p, f.value(i), candidates[c]) > eps) continue;
      double best = kInf;
      std::size_t arg = 0;
      for (std::size_t d = 0; d < m; ++d) {
        if (cost[d] == kInf) continue;
        const double w = cost[d] + f.space().distance(p, candidates[d], candidates[c]);
        if (w < best) {  // strict: ties keep the smallest candidate index
          best = w;
          arg = d;
        }
      }
      next[c] = best;
      back[i * m + c] = arg;
    }
    cost = std::move(next);
  }

  UpperWitness result;
  double best = kInf;
  std::size_t arg = 0;
  for (std::size_t c = 0; c < m; ++c) {
    if (cost[c] < best) {
      best = cost[c];
      arg = c;
    }
  }
  if (best == kInf) {
    result.value = ExtReal::infinity();
    return result;
  }
  result.value = best;
  std::vector<Point> values(n, candidates[0]);
  std::size_t c = arg;
  for (std::size_t i = n; i-- > 0;) {
    values[i] = candidates[c];
    if (i > 0) c = back[i * m + c];
  }
  result.witness = SampledFunction(f.space(), f.grid(), std::move(values));
  return result;
}

Bracket eps_variation(const SampledFunction& f, PseudometricId p, double eps) {
  const GageSpace& space = f.space();
  space.require_pseudometric(p);
  require_positive_eps(eps);
  if (space.kind() == SpaceKind::Scalar) return eps_variation_scalar(f, eps);

  Bracket b;
  b.lower = eps_variation_lower(f, p, eps);

  std::vector<Point> candidates = default_candidates(f);
  if (space.kind() == SpaceKind::Coordinate) {
    for (Point& c : recombined_coordinate_witness(f, p, eps)) {
      if (std::find(candidates.begin(), candidates.end(), c) == candidates.end()) {
        candidates.push_back(std::move(c));
      }
    }
  }
  UpperWitness up = eps_variation_upper_dp(f, p, eps, candidates);
  b.upper = up.value;
  b.witness = std::move(up.witness);
  b.exact = b.upper.is_finite() &&
            b.upper.value() - b.lower.value() <= kNumTol;
  return b;
}

Profile profile(const SampledFunction& f, PseudometricId p,
                std::span<const double> eps_ladder, unsigned jobs) {
  if (eps_ladder.empty()) throw std::invalid_argument("eps ladder must be nonempty");
  for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
    if (!(eps_ladder[i] > 0.0)) throw std::invalid_argument("eps ladder must be positive");
    if (i > 0 && eps_ladder[i] >= eps_ladder[i - 1]) {
      throw std::invalid_argument("eps ladder must be strictly decreasing");
    }
  }
  Profile prof;
  prof.eps_ladder.assign(eps_ladder.begin(), eps_ladder.end());
  prof.p = p;
  prof.brackets.resize(eps_ladder.size());
  parallel_for(eps_ladder.size(), jobs, [&](std::size_t i) {
    prof.brackets[i] = eps_variation(f, p, eps_ladder[i]);
  });
  // As eps decreases both bounds can only grow; anything else is a bug.
  for (std::size_t i = 1; i < prof.brackets.size(); ++i) {
    if (prof.brackets[i].upper.value() < prof.brackets[i - 1].upper.value() - kNumTol ||
        prof.brackets[i].lower.value() < prof.brackets[i - 1].lower.value() - kNumTol) {
      throw std::logic_error("profile monotonicity violated");
    }
  }
  return prof;
}

std::vector<ExtReal> prefix_eps_variation(const SampledFunction& f,
                                          PseudometricId p, double eps) {
  const GageSpace& space = f.space();
  space.require_pseudometric(p);
  require_positive_eps(eps);
  const std::size_t n = f.size();
  std::vector<ExtReal> out(n);

  if (space.kind() == SpaceKind::Scalar || space.kind() == SpaceKind::Coordinate) {
    const TautState st = taut_walk(scalar_values(f, p), eps);
    for (std::size_t i = 0; i < n; ++i) out[i] = st.prefix[i];
    return out;
  }

  // One forward pass of the candidate DP; the per-layer minimum is the
  // prefix value. The candidate pool is fixed from the full function so the
  // entries are nondecreasing in i.
  const std::vector<Point> candidates = default_candidates(f);
  const std::size_t m = candidates.size();
  std::vector<double> cost(m, kInf);
  for (std::size_t c = 0; c < m; ++c) {
    if (space.distance(p, f.value(0), candidates[c]) <= eps) cost[c] = 0.0;
  }
  auto layer_min = [&] {
    double best = kInf;
    for (double v : cost) best = std::min(best, v);
    return best;
  };
  double v0 = layer_min();
  out[0] = v0 == kInf ? ExtReal::infinity() : ExtReal(v0);
  for (std::size_t i = 1; i < n; ++i) {
    std::vector<double> next(m, kInf);
    for (std::size_t c = 0; c < m; ++c) {
      if (space.distance(p, f.value(i), candidates[c]) > eps) continue;
      for (std::size_t d = 0; d < m; ++d) {
        if (cost[d] == kInf) continue;
        next[c] = std::min(next[c],
                           cost[d] + space.distance(p, candidates[d], candidates[c]));
      }
    }
    cost = std::move(next);
    const double v = layer_min();
    out[i] = v == kInf ? ExtReal::infinity() : ExtReal(v);
  }
  return out;
}

DirichletRegime dirichlet_closed_form(double d, double eps, bool normed) {
  if (!(d > 0.0)) throw std::invalid_argument("value gap d must be positive");
  require_positive_eps(eps);
  if (eps < d / 2.0) return DirichletRegime::Infinite;
  if (eps >= d) return DirichletRegime::Zero;
  return normed ? DirichletRegime::Zero : DirichletRegime::Indeterminate;
}

bool EssReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const PropertyCheck& c) { return c.passed; });
}

namespace {

PropertyCheck make_check(std::string property, bool passed, std::string detail) {
  return {std::move(property), passed, std::move(detail)};
}

std::string cell_tag(double eps) {
  std::ostringstream os;
  os << "eps=" << eps;
  return os.str();
}

}  // namespace

EssReport check_ess_properties(const SampledFunction& f, PseudometricId p,
                               std::span<const double> eps_ladder,
                               std::span<const std::size_t> split_points) {
  EssReport report;
  const bool is_scalar = f.space().kind() == SpaceKind::Scalar;
  std::vector<Bracket> brackets;
  brackets.reserve(eps_ladder.size());
  for (double eps : eps_ladder) brackets.push_back(eps_variation(f, p, eps));

  // (a) nonincreasing in eps: certain violation only when a finer-eps upper
  // drops below a coarser-eps lower.
  {
    bool ok = true;
    std::string detail;
    for (std::size_t i = 1; i < brackets.size(); ++i) {
      if (brackets[i - 1].lower.value() > brackets[i].upper.value() + kNumTol) {
        ok = false;
        detail = cell_tag(eps_ladder[i - 1]) + " lower exceeds " +
                 cell_tag(eps_ladder[i]) + " upper";
        break;
      }
    }
    report.checks.push_back(make_check("a:monotone_in_eps", ok, detail));
  }

  // (b) monotone under restriction: every prefix/suffix stays below the
  // full-grid value.
  {
    bool ok = true;
    std::string detail;
    for (std::size_t ei = 0; ei < eps_ladder.size() && ok; ++ei) {
      for (std::size_t s : split_points) {
        const Bracket pre = eps_variation(f.prefix_through(s), p, eps_ladder[ei]);
        const Bracket suf = eps_variation(f.suffix_from(s), p, eps_ladder[ei]);
        if (pre.lower.value() > brackets[ei].upper.value() + kNumTol ||
            suf.lower.value() > brackets[ei].upper.value() + kNumTol) {
          ok = false;
          detail = cell_tag(eps_ladder[ei]) + " restriction exceeds full grid";
          break;
        }
      }
    }
    report.checks.push_back(make_check("b:monotone_under_restriction", ok, detail));
  }

  // (c) scalar only: at the ladder minimum the value is within the provable
  // 2*eps*(n-1) band below the Jordan variation and approaches it from below.
  if (is_scalar) {
    const double v = jordan_variation(f, p);
    const double eps_min = eps_ladder.back();
    const double tau_c = 2.0 * eps_min * static_cast<double>(f.size() - 1) + kNumTol;
    const double at_min = brackets.back().upper.value();
    bool ok = at_min >= v - tau_c && at_min <= v + kNumTol;
    std::ostringstream os;
    os << "V=" << v << " V_eps(min)=" << at_min << " tau_c=" << tau_c;
    report.checks.push_back(make_check("c:limit_to_jordan", ok, os.str()));
  }

  // (d) oscillation <= V_eps + 2 eps.
  {
    const double osc = oscillation(f, p);
    bool ok = true;
    std::string detail;
    for (std::size_t ei = 0; ei < eps_ladder.size(); ++ei) {
      if (osc > brackets[ei].upper.value() + 2.0 * eps_ladder[ei] + kNumTol) {
        ok = false;
        detail = cell_tag(eps_ladder[ei]) + " oscillation " + std::to_string(osc) +
                 " exceeds upper + 2eps";
        break;
      }
    }
    report.checks.push_back(make_check("d:oscillation_bound", ok, detail));
  }

  // (e) additivity sandwich at each split point, bracket-aware.
  {
    bool ok = true;
    std::string detail;
    for (std::size_t ei = 0; ei < eps_ladder.size() && ok; ++ei) {
      const double eps = eps_ladder[ei];
      for (std::size_t s : split_points) {
        const Bracket pre = eps_variation(f.prefix_through(s), p, eps);
        const Bracket suf = eps_variation(f.suffix_from(s), p, eps);
        const double left = pre.lower.value() + suf.lower.value();
        const double right = pre.upper.value() + suf.upper.value() + 2.0 * eps;
        if (left > brackets[ei].upper.value() + kNumTol ||
            brackets[ei].lower.value() > right + kNumTol) {
          ok = false;
          std::ostringstream os;
          os << cell_tag(eps) << " split=" << s << " sandwich ["
             << left << ", " << right << "] misses bracket";
          detail = os.str();
          break;
        }
      }
    }
    report.checks.push_back(make_check("e:additivity_sandwich", ok, detail));
  }

  return report;
}

bool bracket_is_valid(const SampledFunction& f, PseudometricId p, double eps,
                      const Bracket& bracket) {
  if (bracket.lower > bracket.upper) return false;
  if (bracket.exact) {
    if (!bracket.upper.is_finite()) return bracket.lower == bracket.upper;
    if (bracket.upper.value() - bracket.lower.value() > kNumTol) return false;
    if (!bracket.witness.has_value()) return false;
  }
  if (bracket.witness.has_value()) {
    const SampledFunction& g = *bracket.witness;
    if (!g.same_grid_and_space(f)) return false;
    if (uniform_distance(f, g, p) > eps + kNumTol) return false;
    if (!bracket.upper.is_finite()) return false;
    if (std::fabs(jordan_variation(g, p) - bracket.upper.value()) > kNumTol) return false;
  }
  return true;
}

}  // namespace approxvar
