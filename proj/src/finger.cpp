#include "rgrip/finger.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rgrip {

std::string_view to_string(Behavior b) {
  switch (b) {
    case Behavior::Parallel: return "parallel";
    case Behavior::EnvelopingProximal: return "enveloping_proximal";
    case Behavior::EnvelopingDecoupled: return "enveloping_decoupled";
    case Behavior::ThinObject: return "thin_object";
  }
  return "unknown";
}

std::string_view to_string(Phalanx p) {
  switch (p) {
    case Phalanx::Proximal: return "proximal";
    case Phalanx::Middle: return "middle";
    case Phalanx::Distal: return "distal";
  }
  return "unknown";
}

void FingerParams::validate() const {
  geometry.validate();
  const auto require = [](bool ok, const char* field) {
    if (!ok) throw std::invalid_argument(std::string("FingerParams.") + field + " out of range");
  };
  require(mcp_rest > 0.0 && mcp_rest < kPi, "mcp_rest");
  require(drive_limit > 0.0, "drive_limit");
  require(pip_flex_limit > 0.0, "pip_flex_limit");
  require(dip_flex_limit > 0.0, "dip_flex_limit");
  require(pad_offset >= 0.0, "pad_offset");
  require(contact_tolerance > 0.0, "contact_tolerance");
  const std::array<double, 3> rest{geometry.L1_rest, geometry.L2_rest, geometry.L3_rest};
  for (int i = 0; i < 3; ++i) {
    require(L_min[i] > 0.0 && L_min[i] < rest[i], "L_min");
    require(S_min[i] > 0.0 && S_min[i] <= rest[i], "S_min");
  }
}

double parallel_theta2(const FingerParams& p, double drive) {
  return kPi / 2.0 - (p.mcp_rest + drive);
}

double rest_loop_theta1(const LinkageGeometry& g, double alpha, double previous) {
  const PlanarPoint om{-g.L1_rest - g.L1c * std::cos(alpha), g.L1c * std::sin(alpha)};
  const auto hits = circle_intersect({0.0, 0.0}, g.L1a, om, g.L1b);
  if (hits.coincident) return previous;
  if (hits.points.empty()) {
    std::ostringstream msg;
    msg << "proximal loop cannot close at rest length for alpha=" << rad_to_deg(alpha) << " deg";
    throw InfeasibleConfiguration(msg.str());
  }
  double best = 0.0;
  double best_gap = INFINITY;
  for (const auto& pt : hits.points) {
    const double t1 = std::atan2(pt.y, -pt.x);
    const double gap = std::abs(t1 - previous);
    if (gap < best_gap) {
      best_gap = gap;
      best = t1;
    }
  }
  return best;
}

FingerState rest_pose(const FingerParams& p) {
  const auto& g = p.geometry;
  FingerState s;
  s.drive = 0.0;
  s.theta2 = parallel_theta2(p, 0.0);
  // Start on the non-degenerate branch of the loop (the other solution
  // folds Oa onto O2).
  s.theta1 = rest_loop_theta1(g, alpha_from(s.theta2, g.beta), kPi);
  s.theta3 = p.theta3_rest;
  s.L1 = g.L1_rest;
  s.L2 = g.L2_rest;
  s.L3 = g.L3_rest;
  s.theta2_contact = s.theta2;
  s.behavior = Behavior::Parallel;
  return s;
}

FingerPose finger_pose(const FingerParams& p, const FingerState& s) {
  const auto& g = p.geometry;
  const double phi = p.mcp_rest + s.drive;
  const PlanarPoint u = unit(phi);
  const PlanarPoint back = rotate(u, -kPi / 2.0);
  const double alpha = alpha_from(s.theta2, g.beta);

  FingerPose pose;
  pose.O1 = {0.0, 0.0};
  pose.O2 = s.L1 * u;
  pose.Om = pose.O2 + g.L1c * (std::cos(alpha) * u + std::sin(alpha) * back);
  pose.Oa = g.L1a * (std::cos(s.theta1) * u + std::sin(s.theta1) * back);

  const PlanarPoint m = rotate(u, s.theta2);
  const PlanarPoint d = rotate(m, s.theta3 - p.theta3_rest);
  const PlanarPoint n_m = rotate(m, kPi / 2.0);
  const PlanarPoint n_d = rotate(d, kPi / 2.0);
  pose.O3 = pose.O2 + s.L2 * m;
  pose.tip = pose.O3 + s.L3 * d;
  pose.fingertip = pose.tip + p.pad_offset * n_d;
  pose.proximal = {pose.O1, pose.O2, pose.O2 + p.pad_offset * n_m};
  pose.middle = {pose.O2 + p.pad_offset * n_m, pose.O3 + p.pad_offset * n_m};
  pose.distal = {pose.O3 + p.pad_offset * n_d, pose.fingertip};
  return pose;
}

FingerState parallel_step(const FingerParams& p, const FingerState& s, double drive_delta) {
  if (s.behavior != Behavior::Parallel && s.behavior != Behavior::ThinObject) {
    throw std::logic_error("parallel_step: finger is not in parallel mode");
  }
  if (!s.contact_fixed.empty() && drive_delta > 0.0) {
    throw std::logic_error("parallel_step: finger has frozen phalanges");
  }
  FingerState out = s;
  out.saturated = false;
  if (drive_delta == 0.0) return out;

  double drive = s.drive + drive_delta;
  if (drive > p.drive_limit) {
    drive = p.drive_limit;
    out.saturated = true;
  } else if (drive < 0.0) {
    drive = 0.0;
    out.saturated = true;
  }
  out.drive = drive;
  out.theta2 = parallel_theta2(p, drive);
  out.theta2_contact = out.theta2;
  out.theta1 = rest_loop_theta1(p.geometry, alpha_from(out.theta2, p.geometry.beta), s.theta1);
  return out;
}

namespace {

constexpr double kLengthSlack = 1e-7;

// PIP flexion with L1 retraction; `flex` measured from theta2_contact.
bool flex_proximal(const FingerParams& p, FingerState& s, double flex) {
  const auto& g = p.geometry;
  if (flex <= 0.0) {
    s.theta2 = s.theta2_contact;
    s.L1 = g.L1_rest;
    return true;
  }
  const double theta2 = s.theta2_contact + flex;
  try {
    const double L1 = select_root(solve_proximal_retraction(g, s.theta1, theta2), s.L1);
    if (L1 > g.L1_rest + kLengthSlack || L1 < p.L_min[0] - kLengthSlack) return false;
    s.theta2 = theta2;
    s.L1 = std::min(L1, g.L1_rest);
    return true;
  } catch (const InfeasibleConfiguration&) {
    return false;
  } catch (const NonPhysicalConfiguration&) {
    return false;
  }
}

bool flex_middle(const FingerParams& p, FingerState& s, double flex) {
  const auto& g = p.geometry;
  if (flex <= 0.0) {
    s.theta3 = p.theta3_rest;
    s.L2 = g.L2_rest;
    return true;
  }
  const double theta3 = p.theta3_rest + flex;
  try {
    const double L2 = select_root(solve_middle_retraction(g, theta3, g.beta), s.L2);
    if (L2 > g.L2_rest + kLengthSlack || L2 < p.L_min[1] - kLengthSlack) return false;
    s.theta3 = theta3;
    s.L2 = std::min(L2, g.L2_rest);
    return true;
  } catch (const InfeasibleConfiguration&) {
    return false;
  } catch (const NonPhysicalConfiguration&) {
    return false;
  }
}

}  // namespace

FingerState advance(const FingerParams& p, const FingerState& s, double drive_delta) {
  FingerState out = s;
  out.saturated = false;
  if (drive_delta == 0.0) return out;

  if (drive_delta < 0.0) {
    // Opening releases the pads first.
    out.blocked = false;
    out.contact_fixed.erase(Phalanx::Distal);
    if (out.behavior == Behavior::Parallel || out.behavior == Behavior::ThinObject) {
      out.contact_fixed.erase(Phalanx::Middle);
    }
  }

  double remaining = drive_delta;
  for (int guard = 0; guard < 4 && remaining != 0.0; ++guard) {
    switch (out.behavior) {
      case Behavior::Parallel:
      case Behavior::ThinObject: {
        const bool sat = out.saturated;
        out = parallel_step(p, out, remaining);
        out.saturated = out.saturated || sat;
        remaining = 0.0;
        break;
      }
      case Behavior::EnvelopingProximal: {
        double target = (out.theta2 - out.theta2_contact) + remaining;
        remaining = 0.0;
        if (target < 0.0) {
          remaining = target;
          flex_proximal(p, out, 0.0);
          out.behavior = Behavior::Parallel;
          out.contact_fixed.erase(Phalanx::Proximal);
          break;
        }
        if (target > p.pip_flex_limit) {
          target = p.pip_flex_limit;
          out.saturated = true;
        }
        if (!flex_proximal(p, out, target)) out.saturated = true;
        break;
      }
      case Behavior::EnvelopingDecoupled: {
        double target = (out.theta3 - p.theta3_rest) + remaining;
        remaining = 0.0;
        if (target < 0.0) {
          remaining = target;
          flex_middle(p, out, 0.0);
          out.behavior = Behavior::EnvelopingProximal;
          out.contact_fixed.erase(Phalanx::Middle);
          break;
        }
        if (target > p.dip_flex_limit) {
          target = p.dip_flex_limit;
          out.saturated = true;
        }
        if (!flex_middle(p, out, target)) out.saturated = true;
        break;
      }
    }
  }
  return out;
}

FingerState apply_contact(const FingerParams& p, const FingerState& s, const PhalanxContact& c) {
  if (c.penetration < 0.0) throw std::invalid_argument("apply_contact: negative penetration");
  FingerState out = s;
  const auto check_travel = [&](double length, double min_length) {
    if (c.penetration > length - min_length) {
      std::ostringstream msg;
      msg << to_string(c.phalanx) << " phalanx over-compressed: penetration " << c.penetration
          << " mm exceeds remaining spring travel " << (length - min_length) << " mm";
      throw OverCompression(msg.str());
    }
  };

  switch (c.phalanx) {
    case Phalanx::Proximal:
      if (out.contact_fixed.contains(Phalanx::Proximal)) {
        check_travel(out.L1, p.L_min[0]);
        return out;
      }
      out.contact_fixed.insert(Phalanx::Proximal);
      if (out.behavior == Behavior::Parallel || out.behavior == Behavior::ThinObject) {
        out.behavior = Behavior::EnvelopingProximal;
        out.theta2_contact = out.theta2;
      }
      break;
    case Phalanx::Middle:
      if (out.contact_fixed.contains(Phalanx::Middle)) {
        check_travel(out.L2, p.L_min[1]);
        return out;
      }
      out.contact_fixed.insert(Phalanx::Middle);
      if (out.behavior == Behavior::EnvelopingProximal) {
        out.behavior = Behavior::EnvelopingDecoupled;
      } else if (out.behavior != Behavior::EnvelopingDecoupled) {
        // Parallel pinch on the middle pad.
        out.blocked = true;
      }
      break;
    case Phalanx::Distal:
      if (out.contact_fixed.contains(Phalanx::Distal)) {
        check_travel(out.L3, p.L_min[2]);
        return out;
      }
      out.contact_fixed.insert(Phalanx::Distal);
      out.blocked = true;
      break;
  }
  return out;
}

FingerState distal_retract(const FingerParams& p, const FingerState& s, double surface_height) {
  FingerState out = s;
  if (out.behavior == Behavior::Parallel) out.behavior = Behavior::ThinObject;

  FingerState probe = s;
  probe.L3 = p.geometry.L3_rest;
  const FingerPose pose = finger_pose(p, probe);
  const PlanarPoint d = (1.0 / p.geometry.L3_rest) * (pose.tip - pose.O3);
  if (d.y <= 0.0 || pose.fingertip.y <= surface_height) {
    out.L3 = p.geometry.L3_rest;
    return out;
  }
  const double needed = p.geometry.L3_rest - (pose.fingertip.y - surface_height) / d.y;
  if (needed < p.L_min[2] - 1e-9) {
    std::ostringstream msg;
    msg << "surface too high: fingertip needs " << (p.geometry.L3_rest - needed)
        << " mm of distal retraction, travel is " << (p.geometry.L3_rest - p.L_min[2]) << " mm";
    throw SurfaceTooHigh(msg.str());
  }
  out.L3 = needed;
  return out;
}

ContactLengths contact_lengths(const FingerParams& p, const FingerState& s) {
  const auto& g = p.geometry;
  const std::array<double, 3> rest{g.L1_rest, g.L2_rest, g.L3_rest};
  const std::array<double, 3> now{s.L1, s.L2, s.L3};
  ContactLengths out;
  double rest_total = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double slope = (rest[i] - p.S_min[i]) / (rest[i] - p.L_min[i]);
    const double S = std::clamp(p.S_min[i] + (now[i] - p.L_min[i]) * slope, p.S_min[i], rest[i]);
    out.S[i] = S;
    out.R[i] = (rest[i] - S) / rest[i];
    out.total += S;
    rest_total += rest[i];
  }
  out.R_total = (rest_total - out.total) / rest_total;
  return out;
}

SpringForces spring_forces(const FingerParams& p, const FingerState& s, const SpringBank& k) {
  const auto& g = p.geometry;
  return {k.K_MCP * (g.L1_rest - s.L1), k.K_PIP * (g.L2_rest - s.L2), k.K_DIP * (g.L3_rest - s.L3)};
}

}  // namespace rgrip
