#pragma once

#include "approxvar/approx_variation.hpp"
#include "json.hpp"

namespace approxvar {

/// Finite values serialize as numbers, +inf as the string "inf".
nlohmann::json ext_to_json(ExtReal v);

nlohmann::json bracket_to_json(const Bracket& b);
nlohmann::json profile_to_json(const Profile& prof);

/// Space descriptor plus parallel `t` / `values` arrays.
nlohmann::json function_to_json(const SampledFunction& f);

}  // namespace approxvar
