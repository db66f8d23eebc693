#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace approxvar {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;  // counterexample dump on failure, summary otherwise
};

struct SuiteReport {
  std::string suite;
  std::vector<PropertyResult> results;
  bool all_passed() const;
  nlohmann::json to_json() const;
};

/// Structural-property suite on random scalar and finite-space instances:
/// monotonicity, restriction, oscillation bound, additivity, convergence to
/// the Jordan variation, bracket and witness coherence.
SuiteReport run_ess_suite(std::uint64_t seed);

/// Uniform-convergence sandwich on synthetic geometric families, plus the
/// alternating-pair fixture where replacing the one-sided limit by V_eps
/// itself must fail.
SuiteReport run_unif_suite(std::uint64_t seed);

/// Selection-pipeline invariants: determinism, subsequence validity,
/// monotone envelopes, the boundedness chain, the 6-eps pair bound, and
/// hypothesis necessity under uniform convergence.
SuiteReport run_selection_suite(std::uint64_t seed);

std::vector<SuiteReport> run_suites(const std::string& which,
                                    std::uint64_t seed);

}  // namespace approxvar
