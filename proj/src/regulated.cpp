#include "approxvar/regulated.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace approxvar {

std::string to_string(GrowthVerdict v) {
  switch (v) {
    case GrowthVerdict::Bounded: return "Bounded";
    case GrowthVerdict::Diverging: return "Diverging";
    case GrowthVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

bool GrowthReport::any_diverging() const {
  return std::any_of(cells.begin(), cells.end(), [](const GrowthCell& c) {
    return c.verdict == GrowthVerdict::Diverging;
  });
}

nlohmann::json GrowthReport::to_json() const {
  nlohmann::json cells_json = nlohmann::json::array();
  for (const GrowthCell& c : cells) {
    cells_json.push_back({{"eps", c.eps},
                          {"p", c.p},
                          {"lowers", c.lowers},
                          {"sizes", c.sizes},
                          {"verdict", to_string(c.verdict)},
                          {"slope", c.slope}});
  }
  return {{"cells", std::move(cells_json)}};
}

namespace {

// Least-squares slope of y against x over the trailing `window` entries.
double fitted_slope(std::span<const double> x, std::span<const double> y,
                    std::size_t window) {
  const std::size_t n = std::min({window, x.size(), y.size()});
  const std::size_t off = x.size() - n;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[off + i];
    my += y[off + i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (x[off + i] - mx) * (y[off + i] - my);
    var += (x[off + i] - mx) * (x[off + i] - mx);
  }
  return var == 0.0 ? 0.0 : cov / var;
}

bool stabilized(std::span<const double> values, double rel_tol) {
  if (values.size() < 2) return false;
  auto close = [&](double a, double b) {
    return std::fabs(a - b) <= rel_tol * std::max(std::fabs(a), std::fabs(b)) + 1e-12;
  };
  const std::size_t n = values.size();
  bool ok = close(values[n - 1], values[n - 2]);
  if (n >= 3) ok = ok && close(values[n - 2], values[n - 3]);
  return ok;
}

GrowthVerdict classify_growth(std::span<const double> lowers,
                              std::span<const double> sizes, double* slope_out) {
  const double first = lowers.front(), last = lowers.back();
  const double slope = fitted_slope(sizes, lowers, 3);
  if (slope_out) *slope_out = slope;
  if (last >= 4.0 * first - 1e-12 && last > first + 1e-12 && slope > 1e-12) {
    return GrowthVerdict::Diverging;
  }
  if (stabilized(lowers, kGrowthTol)) return GrowthVerdict::Bounded;
  return GrowthVerdict::Inconclusive;
}

}  // namespace

GrowthReport classify_regulated(const RefiningFamily& family,
                                std::span<const double> eps_ladder,
                                std::span<const PseudometricId> ps) {
  if (family.depth_limit < 3) {
    throw std::invalid_argument("refinement classification needs depth >= 3");
  }
  std::vector<SampledFunction> samples;
  samples.reserve(family.depth_limit);
  for (int k = 1; k <= family.depth_limit; ++k) {
    samples.push_back(family.generate(k));
    if (k > 1) {
      const SampledFunction& prev = samples[k - 2];
      const SampledFunction& cur = samples[k - 1];
      if (cur.size() <= prev.size() || !cur.space().same_as(prev.space())) {
        throw std::invalid_argument("refining family must grow on one space");
      }
      auto fine = cur.grid().points();
      for (double t : prev.grid().points()) {
        if (!std::binary_search(fine.begin(), fine.end(), t)) {
          throw std::invalid_argument("refining family grids must be nested");
        }
      }
    }
  }

  GrowthReport report;
  std::vector<double> sizes;
  for (const auto& s : samples) sizes.push_back(static_cast<double>(s.size()));
  for (PseudometricId p : ps) {
    for (double eps : eps_ladder) {
      GrowthCell cell;
      cell.eps = eps;
      cell.p = p.index();
      for (const auto& s : samples) {
        cell.lowers.push_back(eps_variation_lower(s, p, eps));
        cell.sizes.push_back(s.size());
      }
      cell.verdict = classify_growth(cell.lowers, sizes, &cell.slope);
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

StepApproximant step_approximant(const SampledFunction& f, PseudometricId p,
                                 double eps) {
  const GageSpace& space = f.space();
  space.require_pseudometric(p);
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const std::size_t n = f.size();
  std::vector<Point> out(n, f.value(0));
  std::size_t jumps = 0;

  auto coord_of = [&](std::size_t i) {
    return space.kind() == SpaceKind::Scalar
               ? f.value(i).scalar_value()
               : f.value(i).coord_values()[p.index()];
  };

  if (space.kind() == SpaceKind::Scalar || space.kind() == SpaceKind::Coordinate) {
    std::size_t run_start = 0;
    double lo = coord_of(0), hi = lo;
    std::optional<Point> prev_value;
    auto close_run = [&](std::size_t run_end) {
      const double center = 0.5 * (lo + hi);
      Point value = space.kind() == SpaceKind::Scalar
                        ? Point::scalar(center)
                        : [&] {
                            std::vector<double> coords =
                                f.value(run_start).coord_values();
                            coords[p.index()] = center;
                            return Point::coords(std::move(coords));
                          }();
      for (std::size_t i = run_start; i < run_end; ++i) out[i] = value;
      if (prev_value && space.distance(p, *prev_value, value) > 0.0) ++jumps;
      prev_value = value;
    };
    for (std::size_t i = 1; i < n; ++i) {
      const double v = coord_of(i);
      const double nlo = std::min(lo, v), nhi = std::max(hi, v);
      if (nhi - nlo <= 2.0 * eps) {
        lo = nlo;
        hi = nhi;
      } else {
        close_run(i);
        run_start = i;
        lo = hi = v;
      }
    }
    close_run(n);
  } else {
    // Finite space: a run stays open while some candidate covers every value
    // in it within eps; the smallest-index candidate labels the run. The
    // space's candidate enumeration restricts the pool when present.
    std::vector<std::size_t> pool;
    if (space.candidate_enumeration().empty()) {
      for (std::size_t c = 0; c < space.point_count(); ++c) pool.push_back(c);
    } else {
      for (const Point& c : space.candidate_enumeration()) pool.push_back(c.index_value());
    }
    const std::size_t m = pool.size();
    auto covers = [&](std::size_t c, std::size_t i) {
      return space.distance(p, f.value(i), Point::index(pool[c])) <= eps;
    };
    std::size_t run_start = 0;
    std::vector<bool> feasible(m);
    auto reset_feasible = [&](std::size_t i) {
      bool any = false;
      for (std::size_t c = 0; c < m; ++c) {
        feasible[c] = covers(c, i);
        any = any || feasible[c];
      }
      if (!any) {
        std::ostringstream os;
        os << "no candidate within eps=" << eps << " of the value at t=" << f.t(i);
        throw InfeasibleError(os.str());
      }
    };
    reset_feasible(0);
    std::optional<Point> prev_value;
    auto close_run = [&](std::size_t run_end) {
      std::size_t chosen = 0;
      while (!feasible[chosen]) ++chosen;
      const Point value = Point::index(pool[chosen]);
      for (std::size_t i = run_start; i < run_end; ++i) out[i] = value;
      if (prev_value && space.distance(p, *prev_value, value) > 0.0) ++jumps;
      prev_value = value;
    };
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<bool> next = feasible;
      bool any = false;
      for (std::size_t c = 0; c < m; ++c) {
        next[c] = next[c] && covers(c, i);
        any = any || next[c];
      }
      if (any) {
        feasible = std::move(next);
      } else {
        close_run(i);
        run_start = i;
        reset_feasible(i);
      }
    }
    close_run(n);
  }

  return {SampledFunction(space, f.grid(), std::move(out)), jumps};
}

double cauchy_defect(const SampledFunction& f, PseudometricId p, double tau,
                     double window, Side side) {
  f.space().require_pseudometric(p);
  if (!(window > 0.0)) throw std::invalid_argument("window must be positive");
  const double lo = side == Side::Left ? tau - window : tau;
  const double hi = side == Side::Left ? tau : tau + window;
  auto [first, last] = f.grid().index_window(lo, hi);
  // Open at tau itself: the defect looks strictly to one side.
  if (side == Side::Left) {
    while (last > first && f.t(last - 1) >= tau) --last;
    while (first < last && f.t(first) <= tau - window) ++first;
  } else {
    while (first < last && f.t(first) <= tau) ++first;
    while (last > first && f.t(last - 1) >= tau + window) --last;
  }
  if (first >= last) {
    throw std::invalid_argument("cauchy_defect: window contains no grid point");
  }
  double worst = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    for (std::size_t j = i + 1; j < last; ++j) {
      worst = std::max(worst, f.space().distance(p, f.value(i), f.value(j)));
    }
  }
  return worst;
}

}  // namespace approxvar
