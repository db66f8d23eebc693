#include "approxvar/json_util.hpp"

namespace approxvar {

nlohmann::json ext_to_json(ExtReal v) {
  if (v.is_finite()) return v.value();
  return "inf";
}

nlohmann::json bracket_to_json(const Bracket& b) {
  return {{"lower", ext_to_json(b.lower)},
          {"upper", ext_to_json(b.upper)},
          {"exact", b.exact}};
}

nlohmann::json profile_to_json(const Profile& prof) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < prof.eps_ladder.size(); ++i) {
    nlohmann::json row = bracket_to_json(prof.brackets[i]);
    row["eps"] = prof.eps_ladder[i];
    rows.push_back(std::move(row));
  }
  return {{"p", prof.p.index()}, {"rows", std::move(rows)}};
}

nlohmann::json function_to_json(const SampledFunction& f) {
  nlohmann::json j;
  j["space"] = f.space().to_json();
  nlohmann::json ts = nlohmann::json::array();
  nlohmann::json values = nlohmann::json::array();
  for (std::size_t i = 0; i < f.size(); ++i) {
    ts.push_back(f.t(i));
    switch (f.space().kind()) {
      case SpaceKind::Scalar: values.push_back(f.value(i).scalar_value()); break;
      case SpaceKind::Coordinate: values.push_back(f.value(i).coord_values()); break;
      case SpaceKind::Finite: values.push_back(f.value(i).index_value()); break;
    }
  }
  j["t"] = std::move(ts);
  j["values"] = std::move(values);
  return j;
}

}  // namespace approxvar
