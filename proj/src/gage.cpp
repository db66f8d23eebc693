#include "approxvar/gage.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace approxvar {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

}  // namespace

Point Point::scalar(double v) {
  require_finite(v, "scalar point");
  Point pt;
  pt.rep_ = v;
  return pt;
}

Point Point::coords(std::vector<double> c) {
  if (c.empty()) throw std::invalid_argument("coordinate point needs at least one coordinate");
  for (double v : c) require_finite(v, "coordinate");
  Point pt;
  pt.rep_ = std::move(c);
  return pt;
}

Point Point::index(std::size_t i) {
  Point pt;
  pt.rep_ = i;
  return pt;
}

SpaceKind Point::kind() const {
  switch (rep_.index()) {
    case 0: return SpaceKind::Scalar;
    case 1: return SpaceKind::Coordinate;
    default: return SpaceKind::Finite;
  }
}

double Point::scalar_value() const {
  if (const double* v = std::get_if<double>(&rep_)) return *v;
  throw std::invalid_argument("point is not scalar");
}

const std::vector<double>& Point::coord_values() const {
  if (const auto* v = std::get_if<std::vector<double>>(&rep_)) return *v;
  throw std::invalid_argument("point has no coordinates");
}

std::size_t Point::index_value() const {
  if (const auto* v = std::get_if<std::size_t>(&rep_)) return *v;
  throw std::invalid_argument("point is not a finite-space index");
}

GageSpace GageSpace::scalar() {
  GageSpace s;
  s.kind_ = SpaceKind::Scalar;
  s.coord_dim_ = 1;
  return s;
}

GageSpace GageSpace::coordinate(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("coordinate space needs dim >= 1");
  GageSpace s;
  s.kind_ = SpaceKind::Coordinate;
  s.coord_dim_ = dim;
  return s;
}

GageSpace GageSpace::finite(
    std::vector<std::string> point_names,
    std::vector<std::vector<std::vector<double>>> tables) {
  if (point_names.empty()) throw std::invalid_argument("finite space needs at least one point");
  if (tables.empty()) throw std::invalid_argument("finite space needs at least one distance table");
  const std::size_t n = point_names.size();
  GageSpace s;
  s.kind_ = SpaceKind::Finite;
  s.finite_.names = std::move(point_names);
  s.finite_.tables.reserve(tables.size());
  for (const auto& table : tables) {
    if (table.size() != n) throw std::invalid_argument("distance table must be square (|X| rows)");
    std::vector<double> flat;
    flat.reserve(n * n);
    for (const auto& row : table) {
      if (row.size() != n) throw std::invalid_argument("distance table must be square (|X| columns)");
      for (double v : row) {
        require_finite(v, "distance entry");
        if (v < 0.0) throw std::invalid_argument("distance entry must be nonnegative");
        flat.push_back(v);
      }
    }
    s.finite_.tables.push_back(std::move(flat));
  }
  return s;
}

std::size_t GageSpace::pseudometric_count() const {
  switch (kind_) {
    case SpaceKind::Scalar: return 1;
    case SpaceKind::Coordinate: return coord_dim_;
    case SpaceKind::Finite: return finite_.tables.size();
  }
  return 1;
}

std::size_t GageSpace::dimension() const {
  return kind_ == SpaceKind::Coordinate ? coord_dim_ : 1;
}

std::size_t GageSpace::point_count() const {
  if (kind_ != SpaceKind::Finite) {
    throw std::invalid_argument("point_count applies to finite spaces only");
  }
  return finite_.names.size();
}

const std::vector<std::string>& GageSpace::point_names() const {
  if (kind_ != SpaceKind::Finite) {
    throw std::invalid_argument("point_names applies to finite spaces only");
  }
  return finite_.names;
}

void GageSpace::require_pseudometric(PseudometricId p) const {
  if (p.index() >= pseudometric_count()) {
    std::ostringstream os;
    os << "pseudometric index " << p.index() << " out of range (|P| = "
       << pseudometric_count() << ")";
    throw std::invalid_argument(os.str());
  }
}

bool GageSpace::contains(const Point& pt) const {
  if (pt.kind() != kind_) return false;
  switch (kind_) {
    case SpaceKind::Scalar: return true;
    case SpaceKind::Coordinate: return pt.coord_values().size() == coord_dim_;
    case SpaceKind::Finite: return pt.index_value() < finite_.names.size();
  }
  return false;
}

void GageSpace::require_point(const Point& pt) const {
  if (!contains(pt)) throw std::invalid_argument("point does not belong to this space");
}

double GageSpace::distance(PseudometricId p, const Point& x, const Point& y) const {
  require_pseudometric(p);
  require_point(x);
  require_point(y);
  switch (kind_) {
    case SpaceKind::Scalar:
      return std::fabs(x.scalar_value() - y.scalar_value());
    case SpaceKind::Coordinate:
      return std::fabs(x.coord_values()[p.index()] - y.coord_values()[p.index()]);
    case SpaceKind::Finite: {
      const std::size_t n = finite_.names.size();
      return finite_.tables[p.index()][x.index_value() * n + y.index_value()];
    }
  }
  return 0.0;
}

GageSpace GageSpace::with_candidates(std::vector<Point> candidates) const {
  for (const Point& c : candidates) require_point(c);
  GageSpace s = *this;
  s.candidates_ = std::move(candidates);
  return s;
}

bool GageSpace::same_as(const GageSpace& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case SpaceKind::Scalar: return true;
    case SpaceKind::Coordinate: return coord_dim_ == other.coord_dim_;
    case SpaceKind::Finite:
      return finite_.names == other.finite_.names &&
             finite_.tables == other.finite_.tables;
  }
  return false;
}

GageSpace GageSpace::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  GageSpace space;
  if (kind == "scalar") {
    space = scalar();
  } else if (kind == "coordinate") {
    space = coordinate(j.at("dim").get<std::size_t>());
  } else if (kind == "finite") {
    space = finite(j.at("points").get<std::vector<std::string>>(),
                   j.at("metrics").get<std::vector<std::vector<std::vector<double>>>>());
  } else {
    throw std::invalid_argument("unknown space kind: " + kind);
  }
  if (j.contains("candidates")) {
    std::vector<Point> candidates;
    for (const auto& c : j.at("candidates")) {
      switch (space.kind()) {
        case SpaceKind::Scalar:
          candidates.push_back(Point::scalar(c.get<double>()));
          break;
        case SpaceKind::Coordinate:
          candidates.push_back(Point::coords(c.get<std::vector<double>>()));
          break;
        case SpaceKind::Finite:
          candidates.push_back(Point::index(c.get<std::size_t>()));
          break;
      }
    }
    space = space.with_candidates(std::move(candidates));
  }
  return space;
}

nlohmann::json GageSpace::to_json() const {
  nlohmann::json j;
  switch (kind_) {
    case SpaceKind::Scalar:
      j["kind"] = "scalar";
      break;
    case SpaceKind::Coordinate:
      j["kind"] = "coordinate";
      j["dim"] = coord_dim_;
      break;
    case SpaceKind::Finite: {
      j["kind"] = "finite";
      j["points"] = finite_.names;
      const std::size_t n = finite_.names.size();
      nlohmann::json tables = nlohmann::json::array();
      for (const auto& flat : finite_.tables) {
        nlohmann::json table = nlohmann::json::array();
        for (std::size_t r = 0; r < n; ++r) {
          table.push_back(std::vector<double>(flat.begin() + r * n,
                                              flat.begin() + (r + 1) * n));
        }
        tables.push_back(std::move(table));
      }
      j["metrics"] = std::move(tables);
      break;
    }
  }
  if (!candidates_.empty()) {
    nlohmann::json cs = nlohmann::json::array();
    for (const Point& c : candidates_) {
      switch (kind_) {
        case SpaceKind::Scalar: cs.push_back(c.scalar_value()); break;
        case SpaceKind::Coordinate: cs.push_back(c.coord_values()); break;
        case SpaceKind::Finite: cs.push_back(c.index_value()); break;
      }
    }
    j["candidates"] = std::move(cs);
  }
  return j;
}

std::string AxiomViolation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Identity:
      os << "d(x" << i << ", x" << i << ") = " << lhs << " != 0";
      break;
    case Kind::Symmetry:
      os << "d(x" << i << ", x" << j << ") = " << lhs << " but d(x" << j
         << ", x" << i << ") = " << rhs;
      break;
    case Kind::Triangle:
      os << "d(x" << i << ", x" << j << ") = " << lhs << " > d(x" << i
         << ", x" << k << ") + d(x" << k << ", x" << j << ") = " << rhs;
      break;
  }
  return os.str();
}

AxiomReport check_pseudometric_axioms(const GageSpace& space, PseudometricId p,
                                      std::span<const Point> sample) {
  if (sample.empty()) throw std::invalid_argument("axiom check needs a nonempty sample");
  space.require_pseudometric(p);
  AxiomReport report;
  const std::size_t n = sample.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d[i * n + j] = space.distance(p, sample[i], sample[j]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i * n + i] > kNumTol) {
      report.violations.push_back(
          {AxiomViolation::Kind::Identity, i, i, 0, d[i * n + i], 0.0});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::fabs(d[i * n + j] - d[j * n + i]) > kNumTol) {
        report.violations.push_back({AxiomViolation::Kind::Symmetry, i, j, 0,
                                     d[i * n + j], d[j * n + i]});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const double lhs = d[i * n + j];
        const double rhs = d[i * n + k] + d[k * n + j];
        if (lhs > rhs + kNumTol) {
          report.violations.push_back(
              {AxiomViolation::Kind::Triangle, i, j, k, lhs, rhs});
        }
      }
    }
  }
  return report;
}

HausdorffReport check_hausdorff(const GageSpace& space,
                                std::span<const Point> sample) {
  if (sample.empty()) throw std::invalid_argument("hausdorff check needs a nonempty sample");
  HausdorffReport report;
  const std::size_t np = space.pseudometric_count();
  for (std::size_t i = 0; i < sample.size(); ++i) {
    for (std::size_t j = i + 1; j < sample.size(); ++j) {
      if (sample[i] == sample[j]) continue;
      bool separated = false;
      for (std::size_t p = 0; p < np && !separated; ++p) {
        separated = space.distance(PseudometricId(p), sample[i], sample[j]) != 0.0;
      }
      if (!separated) report.violations.push_back({i, j});
    }
  }
  return report;
}

}  // namespace approxvar
