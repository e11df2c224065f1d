#include "rgrip/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rgrip/transmission.hpp"

namespace rgrip {

double base_x(const GripperConfig& cfg, double base_translation) {
  return cfg.palm_half_width + base_translation / 2.0;
}

PlanarPoint to_world(const GripperConfig& cfg, int side, double base_translation, PlanarPoint local) {
  return {side * (base_x(cfg, base_translation) + local.x), local.y};
}

WorldFinger world_finger(const GripperConfig& cfg, int side, double base_translation, const FingerState& s) {
  const FingerPose pose = finger_pose(cfg.finger, s);
  const auto w = [&](PlanarPoint p) { return to_world(cfg, side, base_translation, p); };
  WorldFinger out;
  for (int i = 0; i < 3; ++i) out.proximal[i] = w(pose.proximal[i]);
  for (int i = 0; i < 2; ++i) out.middle[i] = w(pose.middle[i]);
  for (int i = 0; i < 2; ++i) out.distal[i] = w(pose.distal[i]);
  out.fingertip = w(pose.fingertip);
  return out;
}

double aperture(const GripperConfig& cfg, double base_translation, const FingerState& right,
                const FingerState& left) {
  return world_finger(cfg, +1, base_translation, right).fingertip.x -
         world_finger(cfg, -1, base_translation, left).fingertip.x;
}

FingerState parallel_state(const FingerParams& p, double drive) {
  FingerParams free = p;
  free.drive_limit = std::max(p.drive_limit, kPi);
  // Walk in small increments so theta1 stays on the non-degenerate branch.
  FingerState s = rest_pose(free);
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(drive) / deg_to_rad(2.0))));
  for (int i = 0; i < n; ++i) s = parallel_step(free, s, drive / n);
  s.saturated = false;
  return s;
}

double parallel_aperture(const GripperConfig& cfg, double base_translation, double drive) {
  const FingerState s = parallel_state(cfg.finger, drive);
  return aperture(cfg, base_translation, s, s);
}

double parallel_closure_drive(const GripperConfig& cfg, double base_translation) {
  double lo = 0.0;
  double hi = kPi - cfg.finger.mcp_rest;
  if (parallel_aperture(cfg, base_translation, lo) <= 0.0) return 0.0;
  if (parallel_aperture(cfg, base_translation, hi) > 0.0) {
    throw std::runtime_error("parallel posture never closes: palm too wide for the finger reach");
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (parallel_aperture(cfg, base_translation, mid) > 0.0 ? lo : hi) = mid;
  }
  return hi;
}

namespace {

double clearance(const std::array<Segment, 6>& walls, double palm, PlanarPoint c) {
  double r = c.y - palm;
  for (const auto& s : walls) r = std::min(r, distance(s, c));
  return r;
}

}  // namespace

double hollow_diameter(const GripperConfig& cfg, double base_translation, const FingerState& right,
                       const FingerState& left) {
  const WorldFinger R = world_finger(cfg, +1, base_translation, right);
  const WorldFinger L = world_finger(cfg, -1, base_translation, left);
  const std::array<Segment, 6> walls{Segment{R.proximal[0], R.proximal[1]}, Segment{R.proximal[1], R.proximal[2]},
                                     Segment{R.middle[0], R.middle[1]},     Segment{L.proximal[0], L.proximal[1]},
                                     Segment{L.proximal[1], L.proximal[2]}, Segment{L.middle[0], L.middle[1]}};
  const double y0 = cfg.palm_height;
  const double y1 = std::max(y0, std::min(R.middle[1].y, L.middle[1].y));
  // Coarse scan for the bracket, then golden-section refinement.
  const int n = 400;
  int best_i = 0;
  double best = -INFINITY;
  for (int i = 0; i <= n; ++i) {
    const double y = y0 + (y1 - y0) * i / n;
    const double r = clearance(walls, y0, {0.0, y});
    if (r > best) {
      best = r;
      best_i = i;
    }
  }
  double a = y0 + (y1 - y0) * std::max(0, best_i - 1) / n;
  double b = y0 + (y1 - y0) * std::min(n, best_i + 1) / n;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 80; ++i) {
    const double c = b - g * (b - a);
    const double d = a + g * (b - a);
    if (clearance(walls, y0, {0.0, c}) >= clearance(walls, y0, {0.0, d})) {
      b = d;
    } else {
      a = c;
    }
  }
  best = std::max(best, clearance(walls, y0, {0.0, 0.5 * (a + b)}));
  return 2.0 * std::max(0.0, best);
}

double closed_hollow(const GripperConfig& cfg, double base_translation) {
  const FingerState s = parallel_state(cfg.finger, parallel_closure_drive(cfg, base_translation));
  return hollow_diameter(cfg, base_translation, s, s);
}

double reconfigured_base(const GripperConfig& cfg) { return lock_geometry(cfg.transmission).seat; }

}  // namespace rgrip
