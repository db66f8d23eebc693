#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "approxvar/approx_variation.hpp"
#include "approxvar/regulated.hpp"
#include "json.hpp"

namespace approxvar {

/// A sequence f_1, f_2, ... of functions on one shared grid and space.
struct FunctionSequence {
  std::function<SampledFunction(int j)> generate;  // j >= 1
  std::optional<int> length;
  std::string label;
};

struct SelectionConfig {
  std::vector<double> eps_ladder;    // strictly decreasing, positive
  std::vector<PseudometricId> ps;
  int probe_depth = 8;               // how many j to examine (>= 3)
  double conv_tol = 1e-9;
  int stage_budget = 1 << 20;        // cap on (eps, p) refinement stages
};

struct HellyResult {
  std::vector<std::size_t> selected;  // indices into the input list
  std::vector<double> limit;          // nondecreasing
};

/// Helly selection at desk scale: each input array must be nondecreasing
/// (within kNumTol) and finite. Iterated Bolzano-Weierstrass bisection over
/// positions refines the index set until values agree within tol at every
/// position or no half retains two members; bisection prefers the lower
/// half-interval. The limit is the array of the largest surviving index.
HellyResult helly_monotone(const std::vector<std::vector<double>>& arrays,
                           double tol = 1e-9);

struct StageRecord {
  std::size_t p = 0;
  std::size_t k = 0;       // ladder position
  double eps = 0.0;
  std::vector<int> kept;   // sequence indices j surviving this stage
  std::vector<double> envelope;  // limit array phi_{k,p} over the grid
  double stage_constant = 0.0;   // max probed upper bound C(eps, p)
};

struct SixEpsCheck {
  std::size_t p = 0;
  std::size_t k = 0;
  double eps = 0.0;
  std::size_t pairs_checked = 0;
  double worst = 0.0;  // max d_p(f_j(s), f_j(t)) over flagged pairs and tail j
  bool holds = true;   // worst <= 6 eps + conv_tol
};

struct BoundednessCertificate {
  std::size_t p = 0;
  double limit_oscillation = 0.0;
  double bound = 0.0;  // min over ladder of (tail-max upper V_eps + 2 eps)
  bool holds = true;
};

struct SelectionCertificates {
  // pointwise_conv[p][k] = max over the grid of d_p(f_{j_k}, limit).
  std::vector<std::vector<double>> pointwise_conv;
  std::vector<BoundednessCertificate> boundedness;
  std::vector<Profile> limit_profiles;  // one per p
  std::vector<SixEpsCheck> six_eps;
};

struct SelectionTrace {
  std::vector<int> selected;  // strictly increasing sequence indices
  SampledFunction limit;
  std::vector<StageRecord> stages;
  std::string dense_set_note;
  SelectionCertificates certificates;
  bool converged = false;  // tail pointwise_conv within conv_tol for every p

  nlohmann::json to_json() const;
};

struct HypothesisCell {
  double eps = 0.0;
  std::size_t p = 0;
  std::vector<double> lowers;
  std::vector<ExtReal> uppers;
  GrowthVerdict verdict = GrowthVerdict::Inconclusive;
};

struct HypothesisReport {
  std::vector<HypothesisCell> cells;
  bool any_diverging() const;
  std::optional<std::size_t> first_diverging() const;
  nlohmann::json to_json() const;
};

/// Estimates limsup_j V_{eps,p}(f_j) per ladder cell from probes j = 1..J.
/// Diverging when the lower bounds keep growing (last >= 4x first, positive
/// fitted slope); Bounded when the tail-half maximum does not exceed the
/// head-half maximum beyond 5% slack; else Inconclusive.
HypothesisReport verify_hypothesis(const FunctionSequence& family,
                                   std::span<const double> eps_ladder,
                                   std::span<const PseudometricId> ps,
                                   int probe_depth);

struct SelectionOutcome {
  std::optional<SelectionTrace> trace;
  std::optional<std::string> diagnosis;  // set when the hypothesis diverges
  HypothesisReport hypothesis;
  bool certified() const { return trace.has_value(); }
};

/// The full diagonal extraction: verifies the limsup hypothesis, runs the
/// per-(eps, p) monotone-envelope stages with helly_monotone, extracts
/// pointwise values over the grid (the dense set equals the grid, so the
/// density step is vacuous and recorded as such), and certifies the limit
/// (pointwise distances, boundedness chain, profile of the limit). Refuses
/// with a diagnosis when some hypothesis cell diverges.
SelectionOutcome select_pointwise(const FunctionSequence& family,
                                 const SelectionConfig& cfg);

struct UnifCell {
  double eps = 0.0;
  std::size_t p = 0;
  double liminf_est = 0.0;   // min of tail-window upper values
  double limsup_est = 0.0;   // max of tail-window upper values
  std::optional<double> eps_plus, eps_minus;  // ladder neighbors
  bool left_holds = true;    // V_{eps+}(f) <= liminf estimate
  bool right_holds = true;   // limsup estimate <= V_{eps-}(f)
  bool naive_right_holds = true;  // limsup estimate <= V_eps(f)
  bool left_probes_sufficient = false;   // tail tube distance <= eps+ - eps
  bool right_probes_sufficient = false;  // tail tube distance <= eps - eps-
};

struct UnifReport {
  bool applicable = false;  // uniform convergence observed numerically
  std::vector<double> unif_distances;  // max over p of d_{T,p}(f_j, f) per j
  std::vector<UnifCell> cells;
  nlohmann::json to_json() const;
};

/// Sandwich check for uniformly convergent sequences: at each interior
/// ladder eps, V at the larger neighbor bounds the liminf estimate from
/// below and V at the smaller neighbor bounds the limsup estimate from
/// above. Cells also record whether the naive replacement of the one-sided
/// limit by V_eps(f) itself survives. Violations are flagged only when the
/// probed tail is uniformly closer to f than the ladder gap.
UnifReport check_uniform_convergence_sandwich(const FunctionSequence& family,
                                        const SampledFunction& f,
                                        std::span<const double> eps_ladder,
                                        std::span<const PseudometricId> ps,
                                        int probe_depth);

struct WindowOutcome {
  double lo = 0.0, hi = 0.0;
  SelectionOutcome outcome;
};

struct LocalSelectionResult {
  std::vector<WindowOutcome> windows;
  // Selection surviving every certified window; limit covers the union of
  // the certified windows (they are nested, so the largest one).
  std::vector<int> selected;
  std::optional<SampledFunction> limit;
  nlohmann::json to_json() const;
};

/// Windowed variant: runs the pipeline per expanding nested window, chaining
/// the selected indices from window to window (diagonalization across
/// windows). Boundedness is certified per window only.
LocalSelectionResult local_select(
    const FunctionSequence& family, const SelectionConfig& cfg,
    const std::vector<std::pair<double, double>>& windows);

}  // namespace approxvar
