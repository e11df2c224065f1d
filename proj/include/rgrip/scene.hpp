#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rgrip/geometry.hpp"

namespace rgrip {

enum class ShapeKind : std::uint8_t { None, Circle, Rectangle, Slab };

std::string_view to_string(ShapeKind k);

/// Rigid object fixed in the world frame (palm centre line at x = 0,
/// y away from the palm).
struct SceneObject {
  ShapeKind kind{ShapeKind::None};
  std::string name;
  double diameter{0.0};
  double width{0.0};
  double height{0.0};
  /// Slab thickness; a slab lies on the surface plane y = center.y + thickness/2.
  double thickness{0.0};
  bool on_surface{true};
  PlanarPoint center;
  double rotation{0.0};

  void validate() const;
  friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

SceneObject make_circle(double diameter, PlanarPoint center);
SceneObject make_rectangle(double width, double height, PlanarPoint center, double rotation = 0.0);
SceneObject make_slab(double width, double thickness, double surface_y);

/// Height of the supporting surface plane of a slab.
double surface_height(const SceneObject& slab);

/// Characteristic size used for range checks: diameter or the larger side.
double object_size(const SceneObject& obj);

/// Corners (counter-clockwise) of a rectangle or slab.
std::array<PlanarPoint, 4> corners(const SceneObject& obj);

/// Depth of the deepest point of `seg` inside the object; negative values
/// are the separation distance. Empty scenes return -infinity.
double penetration(const SceneObject& obj, const Segment& seg);

/// Point of `seg` closest to (or deepest in) the object.
PlanarPoint contact_point(const SceneObject& obj, const Segment& seg);

}  // namespace rgrip
