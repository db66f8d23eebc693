#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace approxvar {

/// Absolute tolerance for triangle-inequality and equality checks on reals.
inline constexpr double kNumTol = 1e-9;

enum class SpaceKind { Scalar, Coordinate, Finite };

/// Index of one pseudometric d_p in the space's family. Indices are dense
/// 0..count-1 and validated against the space they are used with.
class PseudometricId {
 public:
  constexpr explicit PseudometricId(std::size_t index) : index_(index) {}
  constexpr std::size_t index() const { return index_; }
  friend constexpr bool operator==(PseudometricId, PseudometricId) = default;

 private:
  std::size_t index_;
};

/// A value of the space: one real (scalar spaces), a coordinate vector,
/// or an index into a finite space's point list.
class Point {
 public:
  static Point scalar(double v);
  static Point coords(std::vector<double> c);
  static Point index(std::size_t i);

  SpaceKind kind() const;
  double scalar_value() const;
  const std::vector<double>& coord_values() const;
  std::size_t index_value() const;

  friend bool operator==(const Point& a, const Point& b) = default;

 private:
  std::variant<double, std::vector<double>, std::size_t> rep_;
};

/// A value universe with a finite indexed family of pseudometrics.
///
/// Three builders: scalar() is the real line with |x-y|; coordinate(N) is
/// R^N with one pseudometric per coordinate, d_p(x,y) = |x_p - y_p|;
/// finite() stores one explicit nonnegative distance table per pseudometric.
/// Immutable after construction.
class GageSpace {
 public:
  static GageSpace scalar();
  static GageSpace coordinate(std::size_t dim);
  /// `tables[p]` is a point_count x point_count matrix of nonnegative finite
  /// distances. Shape and entry signs are validated; the pseudometric axioms
  /// are not repaired, use check_pseudometric_axioms to audit them.
  static GageSpace finite(std::vector<std::string> point_names,
                          std::vector<std::vector<std::vector<double>>> tables);

  SpaceKind kind() const { return kind_; }
  std::size_t pseudometric_count() const;
  /// Coordinate dimension (1 for scalar, N for coordinate, 1 for finite).
  std::size_t dimension() const;
  std::size_t point_count() const;  // finite spaces only
  const std::vector<std::string>& point_names() const;

  double distance(PseudometricId p, const Point& x, const Point& y) const;

  bool contains(const Point& pt) const;
  void require_point(const Point& pt) const;
  void require_pseudometric(PseudometricId p) const;

  /// Optional explicit list of values usable as minimizer candidates.
  /// Finite spaces enumerate all their points; other kinds are empty unless
  /// set with with_candidates().
  const std::vector<Point>& candidate_enumeration() const { return candidates_; }
  GageSpace with_candidates(std::vector<Point> candidates) const;

  bool same_as(const GageSpace& other) const;

  static GageSpace from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  GageSpace() = default;

  struct FiniteData {
    std::vector<std::string> names;
    // One row-major point_count*point_count table per pseudometric.
    std::vector<std::vector<double>> tables;
  };

  SpaceKind kind_ = SpaceKind::Scalar;
  std::size_t coord_dim_ = 1;
  FiniteData finite_;
  std::vector<Point> candidates_;
};

struct AxiomViolation {
  enum class Kind { Identity, Symmetry, Triangle };
  Kind kind;
  std::size_t i, j, k;  // sample indices involved (k unused except Triangle)
  double lhs, rhs;
  std::string describe() const;
};

struct AxiomReport {
  std::vector<AxiomViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks d(x,x)=0, symmetry, and the triangle inequality on every triple of
/// the sample, up to the additive tolerance kNumTol.
AxiomReport check_pseudometric_axioms(const GageSpace& space, PseudometricId p,
                                      std::span<const Point> sample);

struct HausdorffViolation {
  std::size_t i, j;  // distinct sample points with d_p = 0 for every p
};

struct HausdorffReport {
  std::vector<HausdorffViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Reports every pair of distinct sample points that no pseudometric
/// separates (exact zero distance under all p).
HausdorffReport check_hausdorff(const GageSpace& space,
                                std::span<const Point> sample);

}  // namespace approxvar
