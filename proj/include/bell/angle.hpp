#pragma once

#include <cmath>
#include <numbers>

namespace bell {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * (std::numbers::pi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / std::numbers::pi); }

/// Folds an arbitrary angle into [0, 2pi).
inline double normalize_angle(double rad) {
  double r = std::fmod(rad, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2pi
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Circular distance between two angles, in [0, pi].
inline double setting_distance(double a, double b) {
  const double d = normalize_angle(a - b);
  return d > kTwoPi - d ? kTwoPi - d : d;
}

/// Detector setting: an angle from the z-axis in the x-z plane.
class MeasurementDirection {
public:
  constexpr MeasurementDirection() = default;
  explicit MeasurementDirection(double radians) : radians_(normalize_angle(radians)) {}

  static MeasurementDirection from_degrees(double deg) {
    return MeasurementDirection(deg_to_rad(deg));
  }

  double radians() const { return radians_; }
  double degrees() const { return rad_to_deg(radians_); }

  friend bool operator==(const MeasurementDirection&, const MeasurementDirection&) = default;

private:
  double radians_ = 0.0;
};

}  // namespace bell
