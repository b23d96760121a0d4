#pragma once

#include <cmath>
#include <numbers>

namespace spinsim {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Planar angle, stored canonically in [0, 2*pi).
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double radians) : value_(canonical(radians)) {}

  double radians() const { return value_; }

  /// Signed difference (*this - other), reduced to (-pi, pi].
  double signed_diff(Angle other) const {
    double d = value_ - other.value_;
    if (d > pi) d -= two_pi;
    if (d <= -pi) d += two_pi;
    return d;
  }

  Angle operator+(Angle o) const { return Angle(value_ + o.value_); }
  Angle operator+(double r) const { return Angle(value_ + r); }
  Angle antipode() const { return Angle(value_ + pi); }

  friend bool operator==(Angle a, Angle b) { return a.value_ == b.value_; }

 private:
  static double canonical(double r) {
    double v = std::fmod(r, two_pi);
    if (v < 0.0) v += two_pi;
    if (v >= two_pi) v = 0.0;  // fmod rounding at the seam
    return v;
  }

  double value_ = 0.0;
};

/// Unsigned angular separation, in [0, pi].
inline double separation(Angle a, Angle b) { return std::abs(a.signed_diff(b)); }

}  // namespace spinsim
