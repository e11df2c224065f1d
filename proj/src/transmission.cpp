#include "rgrip/transmission.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rgrip {

std::string_view to_string(RackSegment s) {
  switch (s) {
    case RackSegment::PartA: return "part_a";
    case RackSegment::PartB1: return "part_b1";
    case RackSegment::RedLine: return "red_line";
    case RackSegment::PartB2: return "part_b2";
    case RackSegment::PartC: return "part_c";
  }
  return "unknown";
}

std::string_view to_string(LockStage s) {
  switch (s) {
    case LockStage::Neutral: return "neutral";
    case LockStage::UpperGroove: return "upper_groove";
    case LockStage::Engaged: return "engaged";
    case LockStage::LowerGroove: return "lower_groove";
    case LockStage::Released: return "released";
  }
  return "unknown";
}

double overall_ratio(const TransmissionParams& t) {
  return static_cast<double>(t.worm_ratio * t.large_gear_teeth) / t.small_gear_teeth;
}

GearOutputs gear_outputs(const TransmissionParams& t, double motor_rpm) {
  if (std::abs(motor_rpm) > t.motor_speed_limit_rpm) {
    std::ostringstream msg;
    msg << "motor speed " << motor_rpm << " rpm exceeds the " << t.motor_speed_limit_rpm << " rpm limit";
    throw OverSpeed(msg.str());
  }
  const double w = motor_rpm / overall_ratio(t);
  return {w, -w, w};
}

double output_torque(const TransmissionParams& t, double motor_torque) {
  if (motor_torque < 0.0) throw std::invalid_argument("motor torque must be non-negative");
  return overall_ratio(t) * motor_torque;
}

LockGeometry lock_geometry(const TransmissionParams& t) {
  const double T = t.base_travel;
  if (T == 0.0) return {0.0, 0.0, 0.0};
  const double seat = T - t.lock_offset;
  return {seat - t.groove_length, seat, seat + (T - seat) / 2.0};
}

RackLayout rack_layout(const GripperConfig& cfg) {
  const auto& t = cfg.transmission;
  const double a = cfg.finger.drive_limit * t.d1_pinion_radius;
  if (t.base_travel == 0.0) return {a, a, a, a, a};
  const LockGeometry lg = lock_geometry(t);
  const double red = a + lg.seat / 2.0;
  const double b2 = a + t.base_travel / 2.0;
  return {a, red - t.redline_width, red, b2, b2 + a};
}

RackSegment rack_segment(const RackLayout& l, double position) {
  if (!(position >= 0.0) || position > l.c_end) {
    std::ostringstream msg;
    msg << "rack position " << position << " mm outside travel [0, " << l.c_end << "]";
    throw RackRange(msg.str());
  }
  if (position <= l.a_end) return RackSegment::PartA;
  if (position <= l.b1_end) return RackSegment::PartB1;
  if (position <= l.redline_end) return RackSegment::RedLine;
  if (position <= l.b2_end) return RackSegment::PartB2;
  return RackSegment::PartC;
}

bool lock_permits(const LockState& lock, double delta) {
  return !(lock.stage == LockStage::Engaged && delta < 0.0);
}

LockState lock_step(const TransmissionParams& t, const LockState& lock, double delta) {
  if (delta == 0.0 || !lock_permits(lock, delta)) return lock;
  const LockGeometry g = lock_geometry(t);
  LockState out = lock;
  const double x = std::clamp(lock.block_position + delta, 0.0, t.base_travel);
  out.block_position = x;

  if (delta > 0.0) {
    switch (lock.stage) {
      case LockStage::Neutral:
      case LockStage::UpperGroove:
        if (x >= g.seat) {
          out.stage = LockStage::Engaged;
        } else if (x >= g.entry) {
          out.stage = LockStage::UpperGroove;
        }
        break;
      case LockStage::Engaged:
        if (x >= g.release) out.stage = LockStage::LowerGroove;
        break;
      case LockStage::LowerGroove:
        break;
      case LockStage::Released:
        if (x >= g.seat) out.stage = LockStage::LowerGroove;
        break;
    }
  } else {
    switch (lock.stage) {
      case LockStage::Neutral:
      case LockStage::Engaged:
        break;
      case LockStage::UpperGroove:
      case LockStage::Released:
        if (x < g.entry) out.stage = LockStage::Neutral;
        break;
      case LockStage::LowerGroove:
        out.stage = x < g.entry ? LockStage::Neutral : LockStage::Released;
        break;
    }
  }
  out.spring_compression = out.stage == LockStage::UpperGroove ? x - g.entry : 0.0;
  return out;
}

double rack_position(const GripperConfig& cfg, const TransmissionState& s) {
  const double R = cfg.transmission.d1_pinion_radius;
  const double a = cfg.finger.drive_limit * R;
  if (s.lock.stage == LockStage::Engaged && s.d1 > 0.0) {
    return a + cfg.transmission.base_travel / 2.0 + s.d1 * R;
  }
  if (s.base > 0.0 || s.lock.stage != LockStage::Neutral) return a + s.base / 2.0;
  return a - s.d1 * R;
}

double rack_travel(const GripperConfig& cfg, double motor_delta) {
  return motor_delta / overall_ratio(cfg.transmission) * cfg.transmission.rack_gear_radius;
}

StepResult step_transmission(const GripperConfig& cfg, const TransmissionState& s, double motor_delta) {
  const auto& t = cfg.transmission;
  StepResult r{s, PowerPath::Stall, 0.0};
  if (motor_delta == 0.0) return r;

  const double dp = std::abs(rack_travel(cfg, motor_delta));
  const double dd1 = dp / t.d1_pinion_radius;
  const double limit = cfg.finger.drive_limit;
  auto& out = r.state;

  const auto move_base = [&](double target) {
    out.lock = lock_step(t, s.lock, target - s.base);
    out.base = out.lock.block_position;
    r.path = PowerPath::Base;
  };

  if (motor_delta > 0.0) {
    if (s.d1 > 0.0) {
      out.d1 = std::max(0.0, s.d1 - dd1);
      r.path = PowerPath::D1;
    } else if (s.base < t.base_travel) {
      double target = std::min(t.base_travel, s.base + 2.0 * dp);
      if (s.lock.stage == LockStage::Neutral || s.lock.stage == LockStage::UpperGroove) {
        target = std::min(target, lock_geometry(t).seat);
      }
      move_base(target);
    }
  } else {
    if (s.lock.stage == LockStage::Engaged) {
      if (s.d1 < limit) {
        out.d1 = std::min(limit, s.d1 + dd1);
        r.path = PowerPath::D1;
      }
    } else if (s.base > 0.0) {
      move_base(std::max(0.0, s.base - 2.0 * dp));
    } else if (s.d1 < limit) {
      out.d1 = std::min(limit, s.d1 + dd1);
      r.path = PowerPath::D1;
    }
  }
  if (r.path == PowerPath::Stall) {
    // A stalled motor does not turn.
    r.stall_torque = output_torque(t, t.motor_torque_nm);
  } else {
    out.motor_angle += motor_delta;
  }
  return r;
}

UnlockSequence unlock_sequence(const GripperConfig& cfg, double motor_step) {
  const double dp = std::abs(rack_travel(cfg, motor_step));
  if (!(dp > 0.0)) throw std::invalid_argument("unlock_sequence: motor step must be non-zero");
  const auto& t = cfg.transmission;
  const double open_travel = cfg.finger.drive_limit * t.d1_pinion_radius;
  const int base_steps = static_cast<int>(std::ceil(t.base_travel / (2.0 * dp)));
  return {static_cast<int>(std::ceil(open_travel / dp)) + base_steps + 1, base_steps + 1};
}

}  // namespace rgrip
