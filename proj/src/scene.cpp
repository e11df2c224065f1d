#include "rgrip/scene.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rgrip {

std::string_view to_string(ShapeKind k) {
  switch (k) {
    case ShapeKind::None: return "none";
    case ShapeKind::Circle: return "circle";
    case ShapeKind::Rectangle: return "rectangle";
    case ShapeKind::Slab: return "slab";
  }
  return "unknown";
}

void SceneObject::validate() const {
  const auto require = [](bool ok, const char* field) {
    if (!ok) throw std::invalid_argument(std::string("object.") + field + " out of range");
  };
  require(std::isfinite(center.x) && std::isfinite(center.y), "center");
  require(std::isfinite(rotation), "rotation");
  switch (kind) {
    case ShapeKind::None: break;
    case ShapeKind::Circle: require(diameter > 0.0, "diameter"); break;
    case ShapeKind::Rectangle:
      require(width > 0.0, "width");
      require(height > 0.0, "height");
      break;
    case ShapeKind::Slab:
      require(width > 0.0, "width");
      require(thickness >= 0.0, "thickness");
      break;
  }
}

SceneObject make_circle(double diameter, PlanarPoint center) {
  SceneObject o;
  o.kind = ShapeKind::Circle;
  o.diameter = diameter;
  o.center = center;
  o.validate();
  return o;
}

SceneObject make_rectangle(double width, double height, PlanarPoint center, double rotation) {
  SceneObject o;
  o.kind = ShapeKind::Rectangle;
  o.width = width;
  o.height = height;
  o.center = center;
  o.rotation = rotation;
  o.validate();
  return o;
}

SceneObject make_slab(double width, double thickness, double surface_y) {
  SceneObject o;
  o.kind = ShapeKind::Slab;
  o.width = width;
  o.thickness = thickness;
  o.on_surface = true;
  o.center = {0.0, surface_y - thickness / 2.0};
  o.validate();
  return o;
}

double surface_height(const SceneObject& slab) { return slab.center.y + slab.thickness / 2.0; }

double object_size(const SceneObject& obj) {
  switch (obj.kind) {
    case ShapeKind::Circle: return obj.diameter;
    case ShapeKind::Rectangle: return std::max(obj.width, obj.height);
    case ShapeKind::Slab: return obj.width;
    case ShapeKind::None: break;
  }
  return 0.0;
}

namespace {

double half_height(const SceneObject& o) { return (o.kind == ShapeKind::Slab ? o.thickness : o.height) / 2.0; }

PlanarPoint to_local(const SceneObject& o, PlanarPoint p) { return rotate(p - o.center, -o.rotation); }

// Inside depth of a local point: min over the four edge distances.
double inside_depth(double hw, double hh, PlanarPoint q) {
  return std::min({hw - q.x, hw + q.x, hh - q.y, hh + q.y});
}

// Deepest parameter along a local segment; the depth is concave and
// piecewise affine, so its maximum sits at an end or where two pieces cross.
double deepest_param(double hw, double hh, PlanarPoint a, PlanarPoint b) {
  const PlanarPoint d = b - a;
  // Pieces: k + m t for edges +x, -x, +y, -y.
  const std::array<std::pair<double, double>, 4> pieces{
      std::pair{hw - a.x, -d.x}, {hw + a.x, d.x}, {hh - a.y, -d.y}, {hh + a.y, d.y}};
  double best_t = 0.0;
  double best = -INFINITY;
  const auto consider = [&](double t) {
    if (t < 0.0 || t > 1.0) return;
    const double v = inside_depth(hw, hh, a + t * d);
    if (v > best) {
      best = v;
      best_t = t;
    }
  };
  consider(0.0);
  consider(1.0);
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double dm = pieces[i].second - pieces[j].second;
      if (dm != 0.0) consider((pieces[j].first - pieces[i].first) / dm);
    }
  }
  return best_t;
}

}  // namespace

std::array<PlanarPoint, 4> corners(const SceneObject& o) {
  const double hw = o.width / 2.0;
  const double hh = half_height(o);
  std::array<PlanarPoint, 4> out{PlanarPoint{-hw, -hh}, {hw, -hh}, {hw, hh}, {-hw, hh}};
  for (auto& p : out) p = o.center + rotate(p, o.rotation);
  return out;
}

double penetration(const SceneObject& o, const Segment& seg) {
  switch (o.kind) {
    case ShapeKind::None: return -INFINITY;
    case ShapeKind::Circle: return o.diameter / 2.0 - distance(seg, o.center);
    case ShapeKind::Rectangle:
    case ShapeKind::Slab: {
      const double hw = o.width / 2.0;
      const double hh = half_height(o);
      const PlanarPoint a = to_local(o, seg.a);
      const PlanarPoint b = to_local(o, seg.b);
      const double depth = inside_depth(hw, hh, a + deepest_param(hw, hh, a, b) * (b - a));
      if (depth > 0.0) return depth;
      const auto c = corners(o);
      double gap = INFINITY;
      for (int i = 0; i < 4; ++i) gap = std::min(gap, distance(seg, Segment{c[i], c[(i + 1) % 4]}));
      return -gap;
    }
  }
  return -INFINITY;
}

PlanarPoint contact_point(const SceneObject& o, const Segment& seg) {
  switch (o.kind) {
    case ShapeKind::None: return closest_point(seg, {0.0, 0.0});
    case ShapeKind::Circle: return closest_point(seg, o.center);
    case ShapeKind::Rectangle:
    case ShapeKind::Slab: {
      const double hw = o.width / 2.0;
      const double hh = half_height(o);
      const PlanarPoint a = to_local(o, seg.a);
      const PlanarPoint b = to_local(o, seg.b);
      const double t = deepest_param(hw, hh, a, b);
      if (inside_depth(hw, hh, a + t * (b - a)) > 0.0) return seg.a + t * (seg.b - seg.a);
      // Separated: nearest point of the segment to the outline.
      const auto c = corners(o);
      PlanarPoint best = seg.a;
      double gap = INFINITY;
      for (int i = 0; i < 4; ++i) {
        const Segment edge{c[i], c[(i + 1) % 4]};
        for (const PlanarPoint q : {closest_point(edge, seg.a), closest_point(edge, seg.b), c[i]}) {
          const PlanarPoint p = closest_point(seg, q);
          const double g = distance(p, q);
          if (g < gap) {
            gap = g;
            best = p;
          }
        }
      }
      return best;
    }
  }
  return seg.a;
}

}  // namespace rgrip
