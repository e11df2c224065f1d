#include "rgrip/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace rgrip {

PlanarPoint closest_point(const Segment& s, PlanarPoint p) {
  const PlanarPoint ab = s.b - s.a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return s.a;
  const double t = std::clamp(dot(p - s.a, ab) / len2, 0.0, 1.0);
  return s.a + t * ab;
}

double distance(const Segment& s, PlanarPoint p) { return distance(closest_point(s, p), p); }

bool intersects(const Segment& s, const Segment& t) {
  const auto orient = [](PlanarPoint a, PlanarPoint b, PlanarPoint c) { return cross(b - a, c - a); };
  const double d1 = orient(t.a, t.b, s.a);
  const double d2 = orient(t.a, t.b, s.b);
  const double d3 = orient(s.a, s.b, t.a);
  const double d4 = orient(s.a, s.b, t.b);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  // Collinear / touching cases.
  const auto on = [](const Segment& seg, PlanarPoint p) { return distance(seg, p) == 0.0; };
  return on(t, s.a) || on(t, s.b) || on(s, t.a) || on(s, t.b);
}

double distance(const Segment& s, const Segment& t) {
  if (intersects(s, t)) return 0.0;
  return std::min({distance(t, s.a), distance(t, s.b), distance(s, t.a), distance(s, t.b)});
}

CircleIntersection circle_intersect(PlanarPoint c1, double r1, PlanarPoint c2, double r2) {
  if (!(r1 > 0.0) || !(r2 > 0.0)) {
    throw std::invalid_argument("circle_intersect: radii must be positive");
  }
  CircleIntersection out;
  const PlanarPoint dv = c2 - c1;
  const double d = norm(dv);
  const double scale = std::max({r1, r2, d});
  const double eps = 1e-12 * scale;

  if (d <= eps) {
    out.coincident = std::abs(r1 - r2) <= eps;
    return out;  // concentric: either identical or disjoint
  }
  if (d > r1 + r2 + eps || d < std::abs(r1 - r2) - eps) return out;

  const double a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
  const double h2 = r1 * r1 - a * a;
  const PlanarPoint ex = (1.0 / d) * dv;
  const PlanarPoint base = c1 + a * ex;
  if (h2 <= eps * scale) {
    out.points.push_back(base);
    return out;
  }
  const double h = std::sqrt(h2);
  const PlanarPoint ey{-ex.y, ex.x};
  out.points.push_back(base - h * ey);
  out.points.push_back(base + h * ey);
  return out;
}

}  // namespace rgrip
