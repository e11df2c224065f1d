#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace rgrip {

inline constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Point (or free vector) in a planar frame, millimetres.
struct PlanarPoint {
  double x{0.0};
  double y{0.0};

  friend PlanarPoint operator+(PlanarPoint a, PlanarPoint b) { return {a.x + b.x, a.y + b.y}; }
  friend PlanarPoint operator-(PlanarPoint a, PlanarPoint b) { return {a.x - b.x, a.y - b.y}; }
  friend PlanarPoint operator*(double s, PlanarPoint a) { return {s * a.x, s * a.y}; }
  friend PlanarPoint operator*(PlanarPoint a, double s) { return {s * a.x, s * a.y}; }
  friend bool operator==(PlanarPoint, PlanarPoint) = default;
};

inline double dot(PlanarPoint a, PlanarPoint b) { return a.x * b.x + a.y * b.y; }
inline double cross(PlanarPoint a, PlanarPoint b) { return a.x * b.y - a.y * b.x; }
inline double norm(PlanarPoint a) { return std::hypot(a.x, a.y); }
inline double distance(PlanarPoint a, PlanarPoint b) { return norm(a - b); }

/// Counter-clockwise rotation by `angle` radians.
inline PlanarPoint rotate(PlanarPoint v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

inline PlanarPoint unit(double angle) { return {std::cos(angle), std::sin(angle)}; }
inline PlanarPoint unit(PlanarPoint v) { return (1.0 / norm(v)) * v; }

/// Unsigned angle between two non-zero vectors, in [0, pi].
inline double angle_between(PlanarPoint a, PlanarPoint b) {
  return std::atan2(std::abs(cross(a, b)), dot(a, b));
}

struct Segment {
  PlanarPoint a;
  PlanarPoint b;
};

PlanarPoint closest_point(const Segment& s, PlanarPoint p);
double distance(const Segment& s, PlanarPoint p);
double distance(const Segment& s, const Segment& t);
bool intersects(const Segment& s, const Segment& t);

/// Result of intersecting two circles. `coincident` marks the degenerate
/// case of identical circles, where `points` is left empty.
struct CircleIntersection {
  std::vector<PlanarPoint> points;
  bool coincident{false};
};

/// All real intersection points of two circles. Tangency within 1e-12 of
/// the radius scale is reported as a single point. Throws
/// std::invalid_argument for non-positive radii.
CircleIntersection circle_intersect(PlanarPoint c1, double r1, PlanarPoint c2, double r2);

}  // namespace rgrip
