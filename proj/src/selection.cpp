#include "approxvar/selection.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "approxvar/json_util.hpp"

namespace approxvar {

namespace {

// Bolzano-Weierstrass bisection at desk scale. Shrinks `active` (positions
// into `values`) toward one accumulation point: split at the midpoint, keep
// the lower half whenever it retains at least two members, stop when the
// enclosing interval is within tol or neither half can keep two.
void bw_refine(const std::vector<double>& values,
               std::vector<std::size_t>& active, double tol) {
  while (active.size() >= 2) {
    double lo = values[active[0]], hi = lo;
    for (std::size_t idx : active) {
      lo = std::min(lo, values[idx]);
      hi = std::max(hi, values[idx]);
    }
    if (hi - lo <= tol) return;
    const double mid = 0.5 * (lo + hi);
    std::vector<std::size_t> lower, upper;
    for (std::size_t idx : active) {
      (values[idx] <= mid ? lower : upper).push_back(idx);
    }
    if (lower.size() >= 2) {
      active = std::move(lower);
    } else if (upper.size() >= 2) {
      active = std::move(upper);
    } else {
      return;
    }
  }
}

struct ProbeSet {
  std::vector<int> js;                 // strictly increasing sequence indices
  std::vector<SampledFunction> fs;     // one per j
};

ProbeSet make_probes(const FunctionSequence& family, std::vector<int> js) {
  ProbeSet probes;
  probes.js = std::move(js);
  probes.fs.reserve(probes.js.size());
  for (int j : probes.js) {
    SampledFunction f = family.generate(j);
    if (!probes.fs.empty() && !f.same_grid_and_space(probes.fs.front())) {
      throw std::invalid_argument("sequence members must share grid and space");
    }
    probes.fs.push_back(std::move(f));
  }
  return probes;
}

std::size_t tail_start(std::size_t n) { return n - (n + 1) / 2; }

GrowthVerdict hypothesis_verdict(const std::vector<double>& lowers,
                                 const std::vector<ExtReal>& uppers) {
  const std::size_t n = lowers.size();
  std::vector<double> js(n);
  for (std::size_t i = 0; i < n; ++i) js[i] = static_cast<double>(i + 1);
  // Divergence from the sound lower bounds: sustained growth through the
  // probe window.
  {
    double mx = 0.0, my = 0.0;
    const std::size_t w = std::min<std::size_t>(3, n), off = n - w;
    for (std::size_t i = 0; i < w; ++i) {
      mx += js[off + i];
      my += lowers[off + i];
    }
    mx /= static_cast<double>(w);
    my /= static_cast<double>(w);
    double cov = 0.0, var = 0.0;
    for (std::size_t i = 0; i < w; ++i) {
      cov += (js[off + i] - mx) * (lowers[off + i] - my);
      var += (js[off + i] - mx) * (js[off + i] - mx);
    }
    const double slope = var == 0.0 ? 0.0 : cov / var;
    if (lowers.back() >= 4.0 * lowers.front() - 1e-12 &&
        lowers.back() > lowers.front() + 1e-12 && slope > 1e-12) {
      return GrowthVerdict::Diverging;
    }
  }
  // Boundedness needs upper bounds: the tail-half cap must not exceed the
  // head-half cap beyond slack (5% accommodates 1/j-type approach).
  {
    const std::size_t split = tail_start(n);
    double head = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!uppers[i].is_finite()) return GrowthVerdict::Inconclusive;
      (i < split ? head : tail) = std::max(i < split ? head : tail, uppers[i].value());
    }
    if (tail <= 1.05 * head + kNumTol) return GrowthVerdict::Bounded;
  }
  return GrowthVerdict::Inconclusive;
}

HypothesisReport hypothesis_from_probes(const ProbeSet& probes,
                                        std::span<const double> eps_ladder,
                                        std::span<const PseudometricId> ps) {
  HypothesisReport report;
  for (PseudometricId p : ps) {
    for (double eps : eps_ladder) {
      HypothesisCell cell;
      cell.eps = eps;
      cell.p = p.index();
      for (const SampledFunction& f : probes.fs) {
        const Bracket b = eps_variation(f, p, eps);
        cell.lowers.push_back(b.lower.value());
        cell.uppers.push_back(b.upper);
      }
      cell.verdict = hypothesis_verdict(cell.lowers, cell.uppers);
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

void validate_config(const SelectionConfig& cfg) {
  if (cfg.eps_ladder.empty()) throw std::invalid_argument("eps ladder must be nonempty");
  for (std::size_t i = 0; i < cfg.eps_ladder.size(); ++i) {
    if (!(cfg.eps_ladder[i] > 0.0)) throw std::invalid_argument("eps ladder must be positive");
    if (i > 0 && cfg.eps_ladder[i] >= cfg.eps_ladder[i - 1]) {
      throw std::invalid_argument("eps ladder must be strictly decreasing");
    }
  }
  if (cfg.ps.empty()) throw std::invalid_argument("need at least one pseudometric");
  if (cfg.probe_depth < 3) throw std::invalid_argument("probe depth must be >= 3");
}

SelectionOutcome pipeline(const ProbeSet& probes, const SelectionConfig& cfg) {
  SelectionOutcome outcome;
  outcome.hypothesis =
      hypothesis_from_probes(probes, cfg.eps_ladder, cfg.ps);
  if (auto bad = outcome.hypothesis.first_diverging()) {
    const HypothesisCell& cell = outcome.hypothesis.cells[*bad];
    std::ostringstream os;
    os << "Diverging at (eps=" << cell.eps << ", p=" << cell.p << ")";
    outcome.diagnosis = os.str();
    return outcome;
  }

  const std::size_t n = probes.fs.front().size();
  std::vector<std::size_t> active(probes.fs.size());
  for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;

  // Stage loop: one monotone-envelope extraction per (p, eps_k), each
  // refining the previous selection (the diagonal runs k first, then p).
  std::vector<StageRecord> stages;
  int stages_left = cfg.stage_budget;
  for (PseudometricId p : cfg.ps) {
    for (std::size_t k = 0; k < cfg.eps_ladder.size() && stages_left > 0; ++k, --stages_left) {
      const double eps = cfg.eps_ladder[k];
      std::vector<std::vector<double>> arrays;
      arrays.reserve(active.size());
      double stage_constant = 0.0;
      for (std::size_t idx : active) {
        const auto prefix = prefix_eps_variation(probes.fs[idx], p, eps);
        std::vector<double> arr(prefix.size());
        for (std::size_t i = 0; i < prefix.size(); ++i) {
          if (!prefix[i].is_finite()) {
            throw std::logic_error("infinite prefix variation in a stage array");
          }
          arr[i] = prefix[i].value();
        }
        stage_constant = std::max(stage_constant, arr.back());
        arrays.push_back(std::move(arr));
      }
      const HellyResult helly = helly_monotone(arrays, cfg.conv_tol);
      std::vector<std::size_t> kept;
      kept.reserve(helly.selected.size());
      for (std::size_t s : helly.selected) kept.push_back(active[s]);

      StageRecord rec;
      rec.p = p.index();
      rec.k = k;
      rec.eps = eps;
      for (std::size_t idx : kept) rec.kept.push_back(probes.js[idx]);
      rec.envelope = helly.limit;
      rec.stage_constant = stage_constant;
      stages.push_back(std::move(rec));
      active = std::move(kept);
    }
  }

  // Pointwise value extraction over the grid. The grid is finite, so it is
  // its own dense subset and the density step has nothing to do.
  const GageSpace& space = probes.fs.front().space();
  for (std::size_t i = 0; i < n; ++i) {
    switch (space.kind()) {
      case SpaceKind::Scalar: {
        std::vector<double> values(probes.fs.size(), 0.0);
        for (std::size_t idx : active) values[idx] = probes.fs[idx].value(i).scalar_value();
        bw_refine(values, active, cfg.conv_tol);
        break;
      }
      case SpaceKind::Coordinate: {
        for (std::size_t c = 0; c < space.dimension(); ++c) {
          std::vector<double> values(probes.fs.size(), 0.0);
          for (std::size_t idx : active) values[idx] = probes.fs[idx].value(i).coord_values()[c];
          bw_refine(values, active, cfg.conv_tol);
        }
        break;
      }
      case SpaceKind::Finite: {
        // Pigeonhole on the most frequent value; ties keep the smallest
        // point index.
        std::vector<std::size_t> counts(space.point_count(), 0);
        for (std::size_t idx : active) ++counts[probes.fs[idx].value(i).index_value()];
        std::size_t best = 0;
        for (std::size_t v = 1; v < counts.size(); ++v) {
          if (counts[v] > counts[best]) best = v;
        }
        std::vector<std::size_t> kept;
        for (std::size_t idx : active) {
          if (probes.fs[idx].value(i).index_value() == best) kept.push_back(idx);
        }
        if (!kept.empty()) active = std::move(kept);
        break;
      }
    }
  }

  // The limit is the latest surviving member.
  const std::size_t last_idx = *std::max_element(active.begin(), active.end());
  std::vector<Point> limit_values;
  limit_values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) limit_values.push_back(probes.fs[last_idx].value(i));
  SampledFunction limit(space, probes.fs.front().grid(), std::move(limit_values));

  SelectionTrace trace{.selected = {},
                       .limit = limit,
                       .stages = std::move(stages),
                       .dense_set_note =
                           "finite grid: the dense set S equals T, the density "
                           "step is vacuous",
                       .certificates = {},
                       .converged = true};
  std::sort(active.begin(), active.end());
  for (std::size_t idx : active) trace.selected.push_back(probes.js[idx]);

  // Certificates.
  for (PseudometricId p : cfg.ps) {
    std::vector<double> conv;
    conv.reserve(active.size());
    for (std::size_t idx : active) {
      conv.push_back(uniform_distance(probes.fs[idx], limit, p));
    }
    // Tail window, always reaching past the final member (whose distance to
    // the limit is zero by construction).
    const std::size_t from =
        conv.size() >= 2 ? std::min(tail_start(conv.size()), conv.size() - 2)
                         : 0;
    for (std::size_t k = from; k < conv.size(); ++k) {
      if (conv[k] > cfg.conv_tol) trace.converged = false;
    }
    trace.certificates.pointwise_conv.push_back(std::move(conv));

    BoundednessCertificate cert;
    cert.p = p.index();
    cert.limit_oscillation = oscillation(limit, p);
    cert.bound = std::numeric_limits<double>::infinity();
    for (double eps : cfg.eps_ladder) {
      double tail_max = 0.0;
      for (std::size_t k = tail_start(active.size()); k < active.size(); ++k) {
        const Bracket b = eps_variation(probes.fs[active[k]], p, eps);
        if (!b.upper.is_finite()) {
          tail_max = std::numeric_limits<double>::infinity();
          break;
        }
        tail_max = std::max(tail_max, b.upper.value());
      }
      cert.bound = std::min(cert.bound, tail_max + 2.0 * eps);
    }
    cert.holds = cert.limit_oscillation <= cert.bound + cfg.conv_tol;
    trace.certificates.boundedness.push_back(cert);

    trace.certificates.limit_profiles.push_back(
        profile(limit, p, cfg.eps_ladder));
  }

  // Pair bound derived from converged envelopes: where an envelope rises by
  // less than its eps over [s, t], the probed tail oscillates by at most
  // 6 eps there.
  for (const StageRecord& rec : trace.stages) {
    SixEpsCheck check;
    check.p = rec.p;
    check.k = rec.k;
    check.eps = rec.eps;
    const PseudometricId p(rec.p);
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t t = s + 1; t < n; ++t) {
        if (rec.envelope[t] - rec.envelope[s] >= rec.eps) continue;
        ++check.pairs_checked;
        for (std::size_t k = tail_start(active.size()); k < active.size(); ++k) {
          const SampledFunction& fj = probes.fs[active[k]];
          check.worst = std::max(
              check.worst, space.distance(p, fj.value(s), fj.value(t)));
        }
      }
    }
    check.holds = check.worst <= 6.0 * check.eps + cfg.conv_tol;
    trace.certificates.six_eps.push_back(check);
  }

  outcome.trace = std::move(trace);
  return outcome;
}

}  // namespace

HellyResult helly_monotone(const std::vector<std::vector<double>>& arrays,
                           double tol) {
  if (arrays.empty()) throw std::invalid_argument("helly_monotone needs input arrays");
  const std::size_t n = arrays.front().size();
  if (n == 0) throw std::invalid_argument("helly_monotone needs nonempty arrays");
  for (const auto& arr : arrays) {
    if (arr.size() != n) throw std::invalid_argument("arrays must share one length");
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(arr[i])) throw std::invalid_argument("arrays must be bounded");
      if (i > 0 && arr[i] < arr[i - 1] - kNumTol) {
        throw std::invalid_argument("arrays must be nondecreasing");
      }
    }
  }
  std::vector<std::size_t> active(arrays.size());
  for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;
  for (std::size_t pos = 0; pos < n && active.size() > 1; ++pos) {
    std::vector<double> values(arrays.size(), 0.0);
    for (std::size_t idx : active) values[idx] = arrays[idx][pos];
    bw_refine(values, active, tol);
  }
  std::sort(active.begin(), active.end());
  HellyResult result;
  result.selected = active;
  result.limit = arrays[active.back()];
  return result;
}

bool HypothesisReport::any_diverging() const { return first_diverging().has_value(); }

std::optional<std::size_t> HypothesisReport::first_diverging() const {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].verdict == GrowthVerdict::Diverging) return i;
  }
  return std::nullopt;
}

nlohmann::json HypothesisReport::to_json() const {
  nlohmann::json cells_json = nlohmann::json::array();
  for (const HypothesisCell& c : cells) {
    nlohmann::json uppers = nlohmann::json::array();
    for (ExtReal u : c.uppers) uppers.push_back(ext_to_json(u));
    cells_json.push_back({{"eps", c.eps},
                          {"p", c.p},
                          {"lowers", c.lowers},
                          {"uppers", std::move(uppers)},
                          {"verdict", to_string(c.verdict)}});
  }
  return {{"cells", std::move(cells_json)}};
}

HypothesisReport verify_hypothesis(const FunctionSequence& family,
                                   std::span<const double> eps_ladder,
                                   std::span<const PseudometricId> ps,
                                   int probe_depth) {
  if (probe_depth < 3) throw std::invalid_argument("probe depth must be >= 3");
  std::vector<int> js(probe_depth);
  for (int j = 0; j < probe_depth; ++j) js[j] = j + 1;
  if (family.length) {
    js.resize(std::min<std::size_t>(js.size(), *family.length));
    if (js.size() < 3) throw std::invalid_argument("sequence too short to probe");
  }
  return hypothesis_from_probes(make_probes(family, std::move(js)), eps_ladder, ps);
}

nlohmann::json SelectionTrace::to_json() const {
  nlohmann::json j;
  j["selected"] = selected;
  j["dense_set_note"] = dense_set_note;
  j["converged"] = converged;
  j["limit"] = function_to_json(limit);

  nlohmann::json stages_json = nlohmann::json::array();
  for (const StageRecord& rec : stages) {
    stages_json.push_back({{"p", rec.p},
                           {"k", rec.k},
                           {"eps", rec.eps},
                           {"kept", rec.kept},
                           {"envelope", rec.envelope},
                           {"stage_constant", rec.stage_constant}});
  }
  j["stages"] = std::move(stages_json);

  nlohmann::json certs;
  certs["pointwise_conv"] = certificates.pointwise_conv;
  nlohmann::json bounded = nlohmann::json::array();
  for (const BoundednessCertificate& c : certificates.boundedness) {
    bounded.push_back({{"p", c.p},
                       {"limit_oscillation", c.limit_oscillation},
                       {"bound", c.bound},
                       {"holds", c.holds}});
  }
  certs["boundedness"] = std::move(bounded);
  nlohmann::json profiles = nlohmann::json::array();
  for (const Profile& prof : certificates.limit_profiles) {
    profiles.push_back(profile_to_json(prof));
  }
  certs["limit_profiles"] = std::move(profiles);
  nlohmann::json six = nlohmann::json::array();
  for (const SixEpsCheck& c : certificates.six_eps) {
    six.push_back({{"p", c.p},
                   {"k", c.k},
                   {"eps", c.eps},
                   {"pairs_checked", c.pairs_checked},
                   {"worst", c.worst},
                   {"holds", c.holds}});
  }
  certs["six_eps"] = std::move(six);
  j["certificates"] = std::move(certs);
  return j;
}

SelectionOutcome select_pointwise(const FunctionSequence& family,
                                 const SelectionConfig& cfg) {
  validate_config(cfg);
  std::vector<int> js(cfg.probe_depth);
  for (int j = 0; j < cfg.probe_depth; ++j) js[j] = j + 1;
  if (family.length) {
    js.resize(std::min<std::size_t>(js.size(), *family.length));
    if (js.size() < 3) throw std::invalid_argument("sequence too short to probe");
  }
  return pipeline(make_probes(family, std::move(js)), cfg);
}

nlohmann::json UnifReport::to_json() const {
  nlohmann::json j;
  j["applicable"] = applicable;
  j["unif_distances"] = unif_distances;
  nlohmann::json cells_json = nlohmann::json::array();
  for (const UnifCell& c : cells) {
    nlohmann::json cj = {{"eps", c.eps},
                         {"p", c.p},
                         {"liminf_est", c.liminf_est},
                         {"limsup_est", c.limsup_est},
                         {"left_holds", c.left_holds},
                         {"right_holds", c.right_holds},
                         {"naive_right_holds", c.naive_right_holds},
                         {"left_probes_sufficient", c.left_probes_sufficient},
                         {"right_probes_sufficient", c.right_probes_sufficient}};
    if (c.eps_plus) cj["eps_plus"] = *c.eps_plus;
    if (c.eps_minus) cj["eps_minus"] = *c.eps_minus;
    cells_json.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells_json);
  return j;
}

UnifReport check_uniform_convergence_sandwich(const FunctionSequence& family,
                                        const SampledFunction& f,
                                        std::span<const double> eps_ladder,
                                        std::span<const PseudometricId> ps,
                                        int probe_depth) {
  if (probe_depth < 3) throw std::invalid_argument("probe depth must be >= 3");
  std::vector<int> js(probe_depth);
  for (int j = 0; j < probe_depth; ++j) js[j] = j + 1;
  const ProbeSet probes = make_probes(family, std::move(js));
  if (!probes.fs.front().same_grid_and_space(f)) {
    throw std::invalid_argument("limit candidate must share grid and space");
  }

  UnifReport report;
  for (const SampledFunction& fj : probes.fs) {
    double u = 0.0;
    for (PseudometricId p : ps) u = std::max(u, uniform_distance(fj, f, p));
    report.unif_distances.push_back(u);
  }
  const std::size_t split = tail_start(report.unif_distances.size());
  double head_u = 0.0, tail_u = 0.0;
  for (std::size_t i = 0; i < report.unif_distances.size(); ++i) {
    (i < split ? head_u : tail_u) =
        std::max(i < split ? head_u : tail_u, report.unif_distances[i]);
  }
  report.applicable = tail_u <= 0.5 * head_u + kNumTol || tail_u <= kNumTol;
  if (!report.applicable) return report;

  for (PseudometricId p : ps) {
    std::vector<Bracket> f_brackets;
    f_brackets.reserve(eps_ladder.size());
    for (double eps : eps_ladder) f_brackets.push_back(eps_variation(f, p, eps));
    for (std::size_t ei = 0; ei < eps_ladder.size(); ++ei) {
      UnifCell cell;
      cell.eps = eps_ladder[ei];
      cell.p = p.index();
      if (ei > 0) cell.eps_plus = eps_ladder[ei - 1];
      if (ei + 1 < eps_ladder.size()) cell.eps_minus = eps_ladder[ei + 1];

      double tail_min_upper = std::numeric_limits<double>::infinity();
      double tail_max_upper = 0.0;
      double tail_max_lower = 0.0;
      const std::size_t from = tail_start(probes.fs.size());
      for (std::size_t k = from; k < probes.fs.size(); ++k) {
        const Bracket b = eps_variation(probes.fs[k], p, cell.eps);
        tail_min_upper = std::min(tail_min_upper, b.upper.value());
        tail_max_upper = std::max(tail_max_upper, b.upper.value());
        tail_max_lower = std::max(tail_max_lower, b.lower.value());
      }
      cell.liminf_est = tail_min_upper;
      cell.limsup_est = tail_max_upper;

      cell.left_probes_sufficient =
          cell.eps_plus && tail_u <= (*cell.eps_plus - cell.eps) + kNumTol;
      cell.right_probes_sufficient =
          cell.eps_minus && tail_u <= (cell.eps - *cell.eps_minus) + kNumTol;

      if (cell.eps_plus) {
        const Bracket& plus = f_brackets[ei - 1];
        cell.left_holds = plus.lower.value() <= tail_min_upper + kNumTol;
      }
      if (cell.eps_minus) {
        const Bracket& minus = f_brackets[ei + 1];
        cell.right_holds = tail_max_lower <= minus.upper.value() + kNumTol;
      }
      cell.naive_right_holds =
          tail_max_lower <= f_brackets[ei].upper.value() + kNumTol;
      report.cells.push_back(cell);
    }
  }
  return report;
}

nlohmann::json LocalSelectionResult::to_json() const {
  nlohmann::json j;
  nlohmann::json ws = nlohmann::json::array();
  for (const WindowOutcome& w : windows) {
    nlohmann::json wj = {{"lo", w.lo},
                         {"hi", w.hi},
                         {"certified", w.outcome.certified()},
                         {"hypothesis", w.outcome.hypothesis.to_json()}};
    if (w.outcome.diagnosis) wj["diagnosis"] = *w.outcome.diagnosis;
    if (w.outcome.trace) wj["trace"] = w.outcome.trace->to_json();
    ws.push_back(std::move(wj));
  }
  j["windows"] = std::move(ws);
  j["selected"] = selected;
  if (limit) j["limit"] = function_to_json(*limit);
  return j;
}

LocalSelectionResult local_select(
    const FunctionSequence& family, const SelectionConfig& cfg,
    const std::vector<std::pair<double, double>>& windows) {
  validate_config(cfg);
  if (windows.empty()) throw std::invalid_argument("need at least one window");
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (windows[i].first > windows[i].second) {
      throw std::invalid_argument("window bounds must satisfy lo <= hi");
    }
    if (i > 0 && (windows[i].first > windows[i - 1].first ||
                  windows[i].second < windows[i - 1].second)) {
      throw std::invalid_argument("windows must be expanding and nested");
    }
  }

  LocalSelectionResult result;
  std::vector<int> js(cfg.probe_depth);
  for (int j = 0; j < cfg.probe_depth; ++j) js[j] = j + 1;
  if (family.length) js.resize(std::min<std::size_t>(js.size(), *family.length));

  for (const auto& [lo, hi] : windows) {
    WindowOutcome wo;
    wo.lo = lo;
    wo.hi = hi;
    if (js.size() < 3) {
      wo.outcome.diagnosis = "fewer than 3 probe indices survive earlier windows";
      result.windows.push_back(std::move(wo));
      continue;
    }
    FunctionSequence restricted{
        [&family, lo, hi](int j) { return family.generate(j).restrict_to(lo, hi); },
        family.length, family.label};
    wo.outcome = pipeline(make_probes(restricted, js), cfg);
    if (wo.outcome.certified()) {
      js = wo.outcome.trace->selected;
      result.selected = js;
      result.limit = wo.outcome.trace->limit;
    }
    result.windows.push_back(std::move(wo));
  }
  return result;
}

}  // namespace approxvar
