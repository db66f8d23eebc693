#include "approxvar/gridfn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace approxvar {

Grid::Grid(std::vector<double> points) {
  if (points.empty()) throw std::invalid_argument("grid needs at least one point");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i])) throw std::invalid_argument("grid points must be finite");
    if (i > 0 && points[i] <= points[i - 1]) {
      std::ostringstream os;
      os << "grid must be strictly increasing: t[" << i - 1 << "] = "
         << points[i - 1] << " >= t[" << i << "] = " << points[i];
      throw std::invalid_argument(os.str());
    }
  }
  count_ = points.size();
  points_ = std::make_shared<const std::vector<double>>(std::move(points));
}

std::pair<std::size_t, std::size_t> Grid::index_window(double lo, double hi) const {
  if (lo > hi) throw std::invalid_argument("window must satisfy lo <= hi");
  auto span = points();
  auto first = std::lower_bound(span.begin(), span.end(), lo);
  auto last = std::upper_bound(span.begin(), span.end(), hi);
  return {static_cast<std::size_t>(first - span.begin()),
          static_cast<std::size_t>(last - span.begin())};
}

Grid Grid::slice(std::size_t first, std::size_t last) const {
  if (first >= last || last > count_) throw std::invalid_argument("bad grid slice");
  return Grid(points_, offset_ + first, last - first);
}

bool operator==(const Grid& a, const Grid& b) {
  if (a.count_ != b.count_) return false;
  if (a.points_ == b.points_ && a.offset_ == b.offset_) return true;
  auto sa = a.points(), sb = b.points();
  return std::equal(sa.begin(), sa.end(), sb.begin());
}

SampledFunction::SampledFunction(GageSpace space, Grid grid,
                                 std::vector<Point> values)
    : space_(std::make_shared<const GageSpace>(std::move(space))),
      grid_(std::move(grid)) {
  if (values.size() != grid_.size()) {
    throw std::invalid_argument("need exactly one value per grid point");
  }
  for (const Point& v : values) space_->require_point(v);
  values_ = std::make_shared<const std::vector<Point>>(std::move(values));
}

SampledFunction SampledFunction::restrict_to(double lo, double hi) const {
  auto [first, last] = grid_.index_window(lo, hi);
  if (first >= last) {
    std::ostringstream os;
    os << "restriction window [" << lo << ", " << hi << "] contains no grid point";
    throw std::invalid_argument(os.str());
  }
  return SampledFunction(space_, grid_.slice(first, last), values_,
                         offset_ + first);
}

SampledFunction SampledFunction::prefix_through(std::size_t i) const {
  if (i >= size()) throw std::invalid_argument("prefix index out of range");
  return SampledFunction(space_, grid_.slice(0, i + 1), values_, offset_);
}

SampledFunction SampledFunction::suffix_from(std::size_t i) const {
  if (i >= size()) throw std::invalid_argument("suffix index out of range");
  return SampledFunction(space_, grid_.slice(i, size()), values_, offset_ + i);
}

bool SampledFunction::same_grid_and_space(const SampledFunction& other) const {
  return grid_ == other.grid_ && space_->same_as(*other.space_);
}

double jordan_variation(const SampledFunction& f, PseudometricId p) {
  f.space().require_pseudometric(p);
  double total = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) {
    total += f.space().distance(p, f.value(i), f.value(i - 1));
  }
  return total;
}

double oscillation(const SampledFunction& f, PseudometricId p) {
  const GageSpace& space = f.space();
  space.require_pseudometric(p);
  switch (space.kind()) {
    case SpaceKind::Scalar: {
      double lo = f.value(0).scalar_value(), hi = lo;
      for (std::size_t i = 1; i < f.size(); ++i) {
        lo = std::min(lo, f.value(i).scalar_value());
        hi = std::max(hi, f.value(i).scalar_value());
      }
      return hi - lo;
    }
    case SpaceKind::Coordinate: {
      double lo = f.value(0).coord_values()[p.index()], hi = lo;
      for (std::size_t i = 1; i < f.size(); ++i) {
        const double v = f.value(i).coord_values()[p.index()];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      return hi - lo;
    }
    case SpaceKind::Finite: {
      // Pairwise over the distinct indices present, not over the grid.
      std::vector<bool> present(space.point_count(), false);
      for (std::size_t i = 0; i < f.size(); ++i) present[f.value(i).index_value()] = true;
      double best = 0.0;
      for (std::size_t a = 0; a < present.size(); ++a) {
        if (!present[a]) continue;
        for (std::size_t b = a; b < present.size(); ++b) {
          if (!present[b]) continue;
          best = std::max(best, space.distance(p, Point::index(a), Point::index(b)));
        }
      }
      return best;
    }
  }
  return 0.0;
}

double uniform_distance(const SampledFunction& f, const SampledFunction& g,
                        PseudometricId p) {
  if (!f.same_grid_and_space(g)) {
    throw std::invalid_argument("uniform_distance needs a shared grid and space");
  }
  f.space().require_pseudometric(p);
  double best = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    best = std::max(best, f.space().distance(p, f.value(i), g.value(i)));
  }
  return best;
}

std::vector<double> prefix_variation(const SampledFunction& f, PseudometricId p) {
  f.space().require_pseudometric(p);
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = 1; i < f.size(); ++i) {
    out[i] = out[i - 1] + f.space().distance(p, f.value(i), f.value(i - 1));
  }
  return out;
}

SampledFunction gen_dirichlet(const GageSpace& space, const Grid& grid,
                              const Point& x, const Point& y,
                              const std::vector<bool>& rational_mask) {
  if (rational_mask.size() != grid.size()) {
    throw std::invalid_argument("mask length must equal grid length");
  }
  std::vector<Point> values;
  values.reserve(grid.size());
  for (bool rational : rational_mask) values.push_back(rational ? x : y);
  return SampledFunction(space, grid, std::move(values));
}

SampledFunction gen_factorial_step(int j, bool include_midpoints) {
  if (j < 1 || j > 8) throw std::invalid_argument("gen_factorial_step needs 1 <= j <= 8");
  long factorial = 1;
  for (int i = 2; i <= j; ++i) factorial *= i;
  std::vector<double> ts;
  std::vector<Point> values;
  const Point x = Point::index(0), y = Point::index(1);
  for (long k = 0; k <= factorial; ++k) {
    if (include_midpoints && k > 0) {
      ts.push_back((static_cast<double>(k) - 0.5) / static_cast<double>(factorial));
      values.push_back(y);
    }
    ts.push_back(static_cast<double>(k) / static_cast<double>(factorial));
    values.push_back(x);
  }
  GageSpace space = GageSpace::finite({"x", "y"}, {{{0.0, 1.0}, {1.0, 0.0}}});
  return SampledFunction(std::move(space), Grid(std::move(ts)), std::move(values));
}

SampledFunction gen_monotone_ramp(const Grid& grid, double v0, double v1) {
  std::vector<Point> values;
  values.reserve(grid.size());
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double frac = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    values.push_back(Point::scalar(v0 + (v1 - v0) * frac));
  }
  return SampledFunction(GageSpace::scalar(), grid, std::move(values));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

[[noreturn]] void parse_fail(const std::string& name, std::size_t lineno,
                             const std::string& message) {
  std::ostringstream os;
  os << name << ":" << lineno << ": " << message;
  throw std::runtime_error(os.str());
}

double parse_number(const std::string& name, std::size_t lineno,
                    const std::string& field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    parse_fail(name, lineno, "not a number: '" + field + "'");
  }
}

}  // namespace

SampledFunction load_function_csv(std::istream& in, const GageSpace& space,
                                  const std::string& name) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) parse_fail(name, 1, "missing header");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);

  std::size_t expected_fields = 2;
  switch (space.kind()) {
    case SpaceKind::Scalar:
      if (header.size() != 2 || header[0] != "t" || header[1] != "v") {
        parse_fail(name, lineno, "expected header 't,v'");
      }
      break;
    case SpaceKind::Coordinate: {
      expected_fields = 1 + space.dimension();
      bool ok = header.size() == expected_fields && header[0] == "t";
      for (std::size_t c = 0; ok && c < space.dimension(); ++c) {
        ok = header[c + 1] == "v" + std::to_string(c);
      }
      if (!ok) parse_fail(name, lineno, "expected header 't,v0,..,v{N-1}'");
      break;
    }
    case SpaceKind::Finite:
      if (header.size() != 2 || header[0] != "t" || header[1] != "idx") {
        parse_fail(name, lineno, "expected header 't,idx'");
      }
      break;
  }

  std::vector<double> ts;
  std::vector<Point> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != expected_fields) {
      parse_fail(name, lineno, "expected " + std::to_string(expected_fields) + " fields");
    }
    const double t = parse_number(name, lineno, fields[0]);
    if (!ts.empty() && t <= ts.back()) {
      parse_fail(name, lineno, "column t must be strictly increasing");
    }
    ts.push_back(t);
    switch (space.kind()) {
      case SpaceKind::Scalar:
        values.push_back(Point::scalar(parse_number(name, lineno, fields[1])));
        break;
      case SpaceKind::Coordinate: {
        std::vector<double> coords(space.dimension());
        for (std::size_t c = 0; c < space.dimension(); ++c) {
          coords[c] = parse_number(name, lineno, fields[c + 1]);
        }
        values.push_back(Point::coords(std::move(coords)));
        break;
      }
      case SpaceKind::Finite: {
        const double raw = parse_number(name, lineno, fields[1]);
        const auto idx = static_cast<std::size_t>(raw);
        if (raw != static_cast<double>(idx) || idx >= space.point_count()) {
          parse_fail(name, lineno, "idx out of range: '" + fields[1] + "'");
        }
        values.push_back(Point::index(idx));
        break;
      }
    }
  }
  if (ts.empty()) parse_fail(name, lineno, "no data rows");
  return SampledFunction(space, Grid(std::move(ts)), std::move(values));
}

SampledFunction load_function_csv_file(const std::string& path,
                                       const GageSpace& space) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_function_csv(in, space, path);
}

void save_function_csv(std::ostream& out, const SampledFunction& f) {
  const GageSpace& space = f.space();
  switch (space.kind()) {
    case SpaceKind::Scalar: out << "t,v\n"; break;
    case SpaceKind::Coordinate:
      out << "t";
      for (std::size_t c = 0; c < space.dimension(); ++c) out << ",v" << c;
      out << "\n";
      break;
    case SpaceKind::Finite: out << "t,idx\n"; break;
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    out << format_double(f.t(i));
    switch (space.kind()) {
      case SpaceKind::Scalar:
        out << "," << format_double(f.value(i).scalar_value());
        break;
      case SpaceKind::Coordinate:
        for (double v : f.value(i).coord_values()) out << "," << format_double(v);
        break;
      case SpaceKind::Finite:
        out << "," << f.value(i).index_value();
        break;
    }
    out << "\n";
  }
}

void save_function_csv_file(const std::string& path, const SampledFunction& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  save_function_csv(out, f);
}

}  // namespace approxvar
