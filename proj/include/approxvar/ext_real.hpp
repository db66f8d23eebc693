#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>
#include <string>

namespace approxvar {

/// Nonnegative extended real. Either a finite value >= 0 or +infinity;
/// addition saturates at infinity, ordering is total.
class ExtReal {
 public:
  constexpr ExtReal() = default;

  ExtReal(double v) : v_(v) {
    if (std::isnan(v) || v < 0.0) {
      throw std::invalid_argument("ExtReal: value must be nonnegative, got " +
                                  std::to_string(v));
    }
  }

  static ExtReal infinity() {
    ExtReal r;
    r.v_ = std::numeric_limits<double>::infinity();
    return r;
  }

  bool is_finite() const { return std::isfinite(v_); }

  /// Finite value, or +inf as an IEEE infinity.
  double value() const { return v_; }

  friend ExtReal operator+(ExtReal a, ExtReal b) {
    ExtReal r;
    r.v_ = a.v_ + b.v_;
    return r;
  }

  friend auto operator<=>(const ExtReal& a, const ExtReal& b) = default;

 private:
  double v_ = 0.0;
};

}  // namespace approxvar
