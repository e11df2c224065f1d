#include "rgrip/gripper_sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rgrip {

std::string_view to_string(Verb v) {
  switch (v) {
    case Verb::Close: return "close";
    case Verb::Open: return "open";
    case Verb::Reconfigure: return "reconfigure";
    case Verb::ReleaseReconfigure: return "release-reconfigure";
    case Verb::PickThin: return "pick-thin";
  }
  return "unknown";
}

GripperAssembly build_gripper(const GripperConfig& cfg, double base_translation) {
  cfg.validate();
  if (base_translation < 0.0 || base_translation > cfg.transmission.base_travel) {
    throw std::invalid_argument("base translation outside [0, base_travel]");
  }
  GripperAssembly a;
  a.config = cfg;
  const FingerState rest = rest_pose(cfg.finger);
  a.fingers = {rest, rest, rest};
  a.transmission.base = base_translation;
  if (base_translation > 0.0) {
    a.transmission.lock = lock_step(cfg.transmission, LockState{}, base_translation);
  }
  return a;
}

double assembly_aperture(const GripperAssembly& a) {
  return aperture(a.config, a.transmission.base, a.fingers[0], a.fingers[2]);
}

double finger_progress(const FingerParams& p, const FingerState& s) {
  return s.drive + (s.theta2 - s.theta2_contact) + (s.theta3 - p.theta3_rest);
}

std::vector<PlanarPoint> phalanx_polyline(const GripperAssembly& a, int finger, Phalanx ph) {
  const WorldFinger w = world_finger(a.config, kFingerSides[finger], a.transmission.base, a.fingers[finger]);
  switch (ph) {
    case Phalanx::Proximal: return {w.proximal.begin(), w.proximal.end()};
    case Phalanx::Middle: return {w.middle.begin(), w.middle.end()};
    case Phalanx::Distal: return {w.distal.begin(), w.distal.end()};
  }
  return {};
}

namespace {

constexpr std::array<Phalanx, 3> kPhalanges{Phalanx::Proximal, Phalanx::Middle, Phalanx::Distal};

struct Deepest {
  double depth{-INFINITY};
  PlanarPoint point;
};

Deepest deepest(const std::vector<PlanarPoint>& line, const SceneObject& obj) {
  Deepest d;
  for (std::size_t k = 0; k + 1 < line.size(); ++k) {
    const Segment seg{line[k], line[k + 1]};
    const double p = penetration(obj, seg);
    if (p > d.depth) {
      d.depth = p;
      d.point = contact_point(obj, seg);
    }
  }
  return d;
}

std::vector<PlanarPoint> polyline_of(const GripperConfig& cfg, double base, int finger, const FingerState& s,
                                     Phalanx ph) {
  const WorldFinger w = world_finger(cfg, kFingerSides[finger], base, s);
  switch (ph) {
    case Phalanx::Proximal: return {w.proximal.begin(), w.proximal.end()};
    case Phalanx::Middle: return {w.middle.begin(), w.middle.end()};
    case Phalanx::Distal: return {w.distal.begin(), w.distal.end()};
  }
  return {};
}

bool enveloping(const FingerState& s) {
  return s.behavior == Behavior::EnvelopingProximal || s.behavior == Behavior::EnvelopingDecoupled;
}

}  // namespace

double phalanx_penetration(const GripperAssembly& a, const SceneObject& obj, int finger, Phalanx ph) {
  return deepest(phalanx_polyline(a, finger, ph), obj).depth;
}

std::vector<DetectedContact> contact_detect(const GripperAssembly& a, const SceneObject& obj) {
  std::vector<DetectedContact> out;
  if (obj.kind == ShapeKind::None) return out;
  const double tol = a.config.finger.contact_tolerance;
  for (int f = 0; f < 3; ++f) {
    for (Phalanx ph : kPhalanges) {
      const Deepest d = deepest(phalanx_polyline(a, f, ph), obj);
      if (d.depth >= -tol) out.push_back({f, ph, d.point, std::max(0.0, d.depth)});
    }
  }
  return out;
}

int classify_mode(const GripperAssembly& a) {
  const bool any_env = std::any_of(a.fingers.begin(), a.fingers.end(), enveloping);
  const auto& tx = a.transmission;
  if (tx.lock.stage == LockStage::Engaged) return any_env ? 5 : 4;
  if (tx.base > 0.0) {
    if (any_env) throw ClassificationError("enveloping finger during a translational base stroke");
    return 3;
  }
  return any_env ? 2 : 1;
}

Simulation::Simulation(GripperAssembly assembly, SceneObject object, SimOptions options)
    : asm_(std::move(assembly)), obj_(std::move(object)), opt_(options) {
  asm_.config.validate();
  obj_.validate();
  record("start", true);
}

double Simulation::penetration_of(int i, const FingerState& s, Phalanx ph) const {
  return deepest(polyline_of(asm_.config, asm_.transmission.base, i, s, ph), obj_).depth;
}

double Simulation::new_penetration(int i, const FingerState& s) const {
  if (obj_.kind == ShapeKind::None) return -INFINITY;
  double worst = -INFINITY;
  for (Phalanx ph : kPhalanges) {
    if (!s.contact_fixed.contains(ph)) worst = std::max(worst, penetration_of(i, s, ph));
  }
  return worst;
}

FingerState Simulation::thin_adjust(int i, const FingerState& s) const {
  if (!thin_) return s;
  FingerState probe = s;
  probe.L3 = asm_.config.finger.geometry.L3_rest;
  const FingerPose pose = finger_pose(asm_.config.finger, probe);
  if (!touched_[i] && pose.fingertip.y < surface_) return s;
  return distal_retract(asm_.config.finger, s, surface_);
}

FingerState Simulation::close_finger(int i, FingerState s, double delta, std::vector<std::string>& events) {
  const auto& p = asm_.config.finger;
  const double tol = p.contact_tolerance;
  double remaining = delta;
  for (int guard = 0; guard < 8 && remaining > 0.0 && !s.blocked; ++guard) {
    const FingerState cand = thin_adjust(i, advance(p, s, remaining));
    if (new_penetration(i, cand) <= 0.0) {
      s = cand;
      break;
    }
    double lo = 0.0;
    double hi = 1.0;
    for (int k = 0; k < 60; ++k) {
      const double mid = 0.5 * (lo + hi);
      (new_penetration(i, thin_adjust(i, advance(p, s, mid * remaining))) <= 0.0 ? lo : hi) = mid;
    }
    FingerState at = lo > 0.0 ? thin_adjust(i, advance(p, s, lo * remaining)) : s;
    std::vector<Phalanx> hits;
    for (Phalanx ph : kPhalanges) {
      if (!at.contact_fixed.contains(ph) && penetration_of(i, at, ph) >= -tol) hits.push_back(ph);
    }
    if (hits.empty()) {
      const FingerState over = thin_adjust(i, advance(p, s, hi * remaining));
      for (Phalanx ph : kPhalanges) {
        if (!over.contact_fixed.contains(ph) && penetration_of(i, over, ph) > 0.0) hits.push_back(ph);
      }
    }
    const bool knuckle = std::find(hits.begin(), hits.end(), Phalanx::Proximal) != hits.end();
    const bool pad = std::find(hits.begin(), hits.end(), Phalanx::Middle) != hits.end();
    if (knuckle && pad && (at.behavior == Behavior::Parallel || at.behavior == Behavior::ThinObject)) {
      // Knuckle and pad share a vertex. A flat face lying along the pad is a
      // parallel pinch; a touch at the shared vertex alone loads the knuckle.
      auto face = polyline_of(asm_.config, asm_.transmission.base, i, at, Phalanx::Middle);
      const PlanarPoint dir = unit(face[1] - face[0]);
      face[0] = face[0] + (0.5 * p.pad_offset) * dir;
      if (deepest(face, obj_).depth >= -tol) {
        std::erase(hits, Phalanx::Proximal);
      } else {
        std::erase(hits, Phalanx::Middle);
      }
    }
    for (Phalanx ph : hits) {
      const double depth = std::max(0.0, penetration_of(i, at, ph));
      at = apply_contact(p, at, {ph, {}, depth});
      events.push_back("contact finger " + std::to_string(i) + " " + std::string(to_string(ph)));
    }
    remaining -= lo * remaining;
    s = at;
  }
  return s;
}

bool Simulation::all_settled() const {
  return std::all_of(asm_.fingers.begin(), asm_.fingers.end(),
                     [](const FingerState& s) { return s.blocked || s.saturated; });
}

double Simulation::spring_torque() const {
  double force = 0.0;
  for (const auto& f : asm_.fingers) {
    const SpringForces sf = spring_forces(asm_.config.finger, f, asm_.config.springs);
    force += sf.mcp + sf.pip + sf.dip;
  }
  return force * asm_.config.finger.geometry.D1 / 1000.0;
}

Simulation::StepResultKind Simulation::d1_step(const TransmissionState& next) {
  const auto& p = asm_.config.finger;
  const double delta = next.d1 - asm_.transmission.d1;
  std::vector<std::string> events;

  if (delta < 0.0) {
    for (int i = 0; i < 3; ++i) {
      FingerState& s = asm_.fingers[i];
      const double excess = finger_progress(p, s) - next.d1;
      if (excess > 0.0) s = advance(p, s, -excess);
      s.saturated = false;
      if (s.behavior == Behavior::ThinObject) {
        if (s.drive <= 0.0) {
          s.behavior = Behavior::Parallel;
          s.L3 = p.geometry.L3_rest;
          touched_[i] = false;
        } else {
          s = distal_retract(p, s, surface_);
        }
      }
    }
    asm_.transmission = next;
    return StepResultKind::Moved;
  }

  const std::array<FingerState, 3> before = asm_.fingers;
  for (int i = 0; i < 3; ++i) {
    if (before[i].blocked || before[i].saturated) continue;
    FingerState s = close_finger(i, before[i], delta, events);
    if (thin_ && touched_[i]) {
      const double gap = surface_ - finger_pose(p, s).fingertip.y;
      if (gap > p.contact_tolerance) {
        // The fingertip would leave the surface: end this finger's stroke.
        s = before[i];
        s.saturated = true;
        events.push_back("finger " + std::to_string(i) + " reached the lowest point of its arc");
      }
    }
    if (thin_ && !touched_[i] && s.behavior == Behavior::ThinObject) {
      touched_[i] = true;
      events.push_back("finger " + std::to_string(i) + " touched the surface");
    }
    asm_.fingers[i] = s;
  }
  asm_.transmission = next;

  if (thin_) {
    for (int i = 0; i < 3; ++i) {
      if (!touched_[i]) continue;
      const double gap = std::abs(surface_ - finger_pose(p, asm_.fingers[i]).fingertip.y);
      max_gap_ = std::max(max_gap_.value_or(0.0), gap);
    }
  }

  if (!events.empty()) {
    if (!first_contact_ && std::any_of(asm_.fingers.begin(), asm_.fingers.end(),
                                       [](const FingerState& s) { return !s.contact_fixed.empty(); })) {
      first_contact_ = assembly_aperture(asm_);
    }
    std::string joined;
    for (const auto& e : events) joined += (joined.empty() ? "" : "; ") + e;
    pending_event_ = joined;
  }

  // Enveloping fingers interleave (the sides are staggered), so only an
  // all-parallel stroke ends when the fingertips meet.
  const bool parallel_stroke = std::none_of(asm_.fingers.begin(), asm_.fingers.end(), enveloping);
  if (parallel_stroke && assembly_aperture(asm_) < 0.0) {
    // Bisect the step back to the instant the fingertips meet.
    double lo = 0.0;
    double hi = 1.0;
    std::array<FingerState, 3> best = before;
    for (int k = 0; k < 60; ++k) {
      const double mid = 0.5 * (lo + hi);
      std::array<FingerState, 3> trial = before;
      std::vector<std::string> ignored;
      for (int i = 0; i < 3; ++i) {
        if (!before[i].blocked && !before[i].saturated) trial[i] = close_finger(i, before[i], mid * delta, ignored);
      }
      if (aperture(asm_.config, asm_.transmission.base, trial[0], trial[2]) >= 0.0) {
        lo = mid;
        best = trial;
      } else {
        hi = mid;
      }
    }
    asm_.fingers = best;
    asm_.transmission.d1 = asm_.transmission.d1 - (1.0 - lo) * delta;
    return StepResultKind::Closed;
  }
  if (spring_torque() > output_torque(asm_.config.transmission, asm_.config.transmission.motor_torque_nm)) {
    return StepResultKind::ForceStall;
  }
  if (all_settled()) return StepResultKind::Stable;
  return events.empty() ? StepResultKind::Moved : StepResultKind::Contact;
}

Simulation::StepResultKind Simulation::base_step(const TransmissionState& next) {
  const double delta = next.base - asm_.transmission.base;
  if (delta >= 0.0 || obj_.kind == ShapeKind::None) {
    asm_.transmission = next;
    return StepResultKind::Moved;
  }
  const auto worst_at = [&](double base) {
    GripperAssembly trial = asm_;
    trial.transmission.base = base;
    double w = -INFINITY;
    for (int f = 0; f < 3; ++f) {
      for (Phalanx ph : kPhalanges) w = std::max(w, phalanx_penetration(trial, obj_, f, ph));
    }
    return w;
  };
  const double from = asm_.transmission.base;
  if (worst_at(next.base) <= 0.0) {
    asm_.transmission = next;
    return StepResultKind::Moved;
  }
  double lo = 0.0;
  double hi = 1.0;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    (worst_at(from + mid * delta) <= 0.0 ? lo : hi) = mid;
  }
  const double base = from + lo * delta;
  asm_.transmission.lock = lock_step(asm_.config.transmission, asm_.transmission.lock, base - from);
  asm_.transmission.base = asm_.transmission.lock.block_position;
  asm_.transmission.motor_angle = next.motor_angle;

  // Translational contact: the fingertips only slide sideways, so contacts
  // stop the stroke without switching any finger out of parallel mode.
  std::string joined;
  const double tol = asm_.config.finger.contact_tolerance;
  for (int f = 0; f < 3; ++f) {
    for (Phalanx ph : kPhalanges) {
      if (phalanx_penetration(asm_, obj_, f, ph) >= -tol && !asm_.fingers[f].contact_fixed.contains(ph)) {
        asm_.fingers[f].contact_fixed.insert(ph);
        asm_.fingers[f].blocked = true;
        joined += (joined.empty() ? "" : "; ") + ("contact finger " + std::to_string(f) + " " +
                                                 std::string(to_string(ph)));
      }
    }
  }
  if (!first_contact_) first_contact_ = assembly_aperture(asm_);
  pending_event_ = joined.empty() ? "base blocked" : joined;
  return StepResultKind::BaseBlocked;
}

Simulation::StepResultKind Simulation::motor_step(double motor_delta) {
  const StepResult r = step_transmission(asm_.config, asm_.transmission, motor_delta);
  ++steps_;
  switch (r.path) {
    case PowerPath::Stall:
      asm_.transmission.motor_angle = r.state.motor_angle;
      return StepResultKind::Stall;
    case PowerPath::D1:
      try {
        return d1_step(r.state);
      } catch (const SurfaceTooHigh& e) {
        warnings_.push_back(e.what());
        return StepResultKind::SurfaceTooHigh;
      }
    case PowerPath::Base:
      return base_step(r.state);
  }
  return StepResultKind::Stall;
}

void Simulation::record(const std::string& event, bool force) {
  if (!force && event.empty() && (opt_.trace_stride <= 0 || steps_ % opt_.trace_stride != 0)) return;
  TraceFrame f;
  f.step = steps_;
  f.event = event;
  f.aperture = assembly_aperture(asm_);
  f.transmission = asm_.transmission;
  f.fingers = asm_.fingers;
  f.contacts = contact_detect(asm_, obj_);
  trace_.push_back(std::move(f));
}

namespace {

int budget_of(std::optional<int> budget, const SimOptions& opt) { return budget ? *budget : opt.max_steps; }

}  // namespace

std::string Simulation::close_loop(std::optional<int> budget) {
  const int n = budget_of(budget, opt_);
  for (int k = 0; k < n; ++k) {
    pending_event_.clear();
    const StepResultKind r = motor_step(-asm_.config.step);
    const auto finish = [&](const char* why) {
      record(pending_event_.empty() ? std::string(why) : pending_event_ + "; " + why, true);
      return std::string(why);
    };
    switch (r) {
      case StepResultKind::Moved:
      case StepResultKind::Contact: record(pending_event_, false); break;
      case StepResultKind::Stable: return finish("stable");
      case StepResultKind::Closed: return finish("closed");
      case StepResultKind::Stall: return finish("stall");
      case StepResultKind::ForceStall: return finish("force_stall");
      case StepResultKind::BaseBlocked: return finish("base_blocked");
      case StepResultKind::Lifted: return finish("lifted");
      case StepResultKind::SurfaceTooHigh: return finish("surface_too_high");
    }
  }
  record("step budget exhausted", true);
  return "steps";
}

std::string Simulation::open_loop(std::optional<int> budget) {
  const int n = budget_of(budget, opt_);
  for (int k = 0; k < n; ++k) {
    if (asm_.transmission.d1 <= 0.0) {
      record("open", true);
      return "opened";
    }
    pending_event_.clear();
    motor_step(asm_.config.step);
    record(pending_event_, false);
  }
  record("step budget exhausted", true);
  return "steps";
}

std::string Simulation::reconfigure_loop(std::optional<int> budget) {
  const int n = budget_of(budget, opt_);
  for (int k = 0; k < n; ++k) {
    if (asm_.transmission.lock.stage == LockStage::Engaged) {
      record("lock engaged", true);
      return "engaged";
    }
    pending_event_.clear();
    if (motor_step(asm_.config.step) == StepResultKind::Stall) {
      record("stall", true);
      return "stall";
    }
    record(pending_event_, false);
  }
  record("step budget exhausted", true);
  return "steps";
}

std::string Simulation::release_loop(std::optional<int> budget) {
  const int n = budget_of(budget, opt_);
  int k = 0;
  for (; k < n && asm_.transmission.lock.stage != LockStage::LowerGroove; ++k) {
    pending_event_.clear();
    if (motor_step(asm_.config.step) == StepResultKind::Stall) break;
    record(pending_event_, false);
  }
  record("unlock over-travel", true);
  for (; k < n; ++k) {
    if (asm_.transmission.base <= 0.0) {
      record("base returned", true);
      return "returned";
    }
    pending_event_.clear();
    const StepResultKind r = motor_step(-asm_.config.step);
    if (r == StepResultKind::BaseBlocked || r == StepResultKind::Stall) {
      record(pending_event_, true);
      return r == StepResultKind::Stall ? "stall" : "base_blocked";
    }
    record(pending_event_, false);
  }
  record("step budget exhausted", true);
  return "steps";
}

std::string Simulation::run(const Command& c) {
  switch (c.verb) {
    case Verb::Close: termination_ = close_loop(c.steps); break;
    case Verb::Open: termination_ = open_loop(c.steps); break;
    case Verb::Reconfigure: termination_ = reconfigure_loop(c.steps); break;
    case Verb::ReleaseReconfigure: termination_ = release_loop(c.steps); break;
    case Verb::PickThin:
      if (obj_.kind != ShapeKind::Slab) {
        warnings_.push_back("pick-thin needs a slab object");
        termination_ = "not_a_slab";
        break;
      }
      if (obj_.thickness < asm_.config.finger.contact_tolerance) {
        warnings_.push_back("slab thinner than the contact tolerance");
        termination_ = "slab_too_thin";
        break;
      }
      thin_ = true;
      surface_ = surface_height(obj_);
      termination_ = close_loop(c.steps);
      break;
  }
  return termination_;
}

GraspReport Simulation::report() const {
  GraspReport r;
  try {
    r.mode = classify_mode(asm_);
  } catch (const ClassificationError& e) {
    r.mode = 0;
    r.warnings.push_back(e.what());
  }
  r.termination = termination_;
  r.aperture = assembly_aperture(asm_);
  r.aperture_first_contact = first_contact_;
  r.steps = steps_;
  r.transmission = asm_.transmission;
  r.segment = rack_segment(rack_layout(asm_.config), rack_position(asm_.config, asm_.transmission));
  for (int i = 0; i < 3; ++i) {
    const auto& s = asm_.fingers[i];
    r.fingers[i] = {s, contact_lengths(asm_.config.finger, s),
                    spring_forces(asm_.config.finger, s, asm_.config.springs)};
  }
  const bool all_contact = std::all_of(asm_.fingers.begin(), asm_.fingers.end(),
                                       [](const FingerState& s) { return !s.contact_fixed.empty(); });
  r.success = obj_.kind != ShapeKind::None && all_contact && termination_ != "surface_too_high";
  if (thin_) {
    r.max_surface_gap = max_gap_.value_or(0.0);
    if (r.success && *r.max_surface_gap >= asm_.config.finger.contact_tolerance) r.success = false;
  }
  r.warnings.insert(r.warnings.end(), warnings_.begin(), warnings_.end());
  if (r.mode == 4 && obj_.kind != ShapeKind::None &&
      object_size(obj_) < closed_hollow(asm_.config, asm_.transmission.base)) {
    r.warnings.push_back("object fits inside the reconfigured hollow");
  }
  r.trace = trace_;
  return r;
}

GraspReport close_until_stable(const GripperAssembly& a, const SceneObject& obj, const SimOptions& opt) {
  Simulation sim(a, obj, opt);
  sim.run({Verb::Close, std::nullopt});
  return sim.report();
}

GraspReport thin_object_pickup(const GripperAssembly& a, const SceneObject& slab, const SimOptions& opt) {
  Simulation sim(a, slab, opt);
  sim.run({Verb::PickThin, std::nullopt});
  return sim.report();
}

GraspReport run_commands(const GripperConfig& cfg, const SceneObject& obj, const std::vector<Command>& commands,
                         const SimOptions& opt) {
  Simulation sim(build_gripper(cfg), obj, opt);
  for (const auto& c : commands) sim.run(c);
  return sim.report();
}

ModeRange aperture_range(const GripperConfig& cfg, int mode) {
  if (mode < 1 || mode > 5) throw std::invalid_argument("mode must be 1..5");
  ModeRange r{mode, true, 0.0, 0.0};
  const bool remote = mode >= 4;
  const double travel = cfg.transmission.base_travel;
  if (mode >= 3 && travel <= 0.0) {
    r.reachable = false;
    return r;
  }
  const double seat = reconfigured_base(cfg);
  // Motor-step resolution of the MCP drive.
  const double dd = std::abs(rack_travel(cfg, cfg.step)) / cfg.transmission.d1_pinion_radius;

  if (mode == 3) {
    const FingerState rest = rest_pose(cfg.finger);
    const double db = 2.0 * std::abs(rack_travel(cfg, cfg.step));
    r.min = r.max = aperture(cfg, 0.0, rest, rest);
    for (double b = 0.0;; b = std::min(travel, b + db)) {
      const double ap = aperture(cfg, b, rest, rest);
      r.min = std::min(r.min, ap);
      r.max = std::max(r.max, ap);
      if (b >= travel) break;
    }
    return r;
  }

  const double base = remote ? seat : 0.0;
  FingerParams p = cfg.finger;
  FingerState s = rest_pose(p);
  r.max = r.min = aperture(cfg, base, s, s);
  while (true) {
    s = parallel_step(p, s, dd);
    const double ap = aperture(cfg, base, s, s);
    r.max = std::max(r.max, ap);
    r.min = std::min(r.min, std::max(0.0, ap));
    if (ap <= 0.0 || s.saturated) break;
  }
  if (mode == 2 || mode == 5) r.min = closed_hollow(cfg, base);
  return r;
}

std::array<ModeRange, 5> sweep_ranges(const GripperConfig& cfg) {
  return {aperture_range(cfg, 1), aperture_range(cfg, 2), aperture_range(cfg, 3), aperture_range(cfg, 4),
          aperture_range(cfg, 5)};
}

}  // namespace rgrip
