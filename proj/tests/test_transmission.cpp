#include <cmath>
#include <functional>

#include "doctest.h"
#include "rgrip/transmission.hpp"

using namespace rgrip;

TEST_CASE("gear train: 30:1 overall, equal output speeds, torque x30") {
  const TransmissionParams t;
  CHECK(overall_ratio(t) == 30.0);
  CHECK(output_torque(t, 6.6) == doctest::Approx(198.0));
  for (double rpm : {-120.0, -37.5, 0.0, 1.0, 90.0, 120.0}) {
    const GearOutputs g = gear_outputs(t, rpm);
    CHECK(std::abs(g.g1) == std::abs(g.g2));
    CHECK(std::abs(g.g2) == std::abs(g.g3));
    CHECK(g.g1 == doctest::Approx(rpm / 30.0));
    // The middle gear meshes with both neighbours and turns the other way.
    if (rpm != 0.0) CHECK(g.g1 * g.g2 < 0.0);
  }
  for (double tq : {0.1, 1.0, 6.6}) CHECK(output_torque(t, tq) == doctest::Approx(30.0 * tq));
  CHECK_THROWS_AS(gear_outputs(t, 121.0), OverSpeed);
}

TEST_CASE("rack segments are right-closed and cover the travel") {
  const GripperConfig cfg;
  const RackLayout l = rack_layout(cfg);
  CHECK(l.a_end == doctest::Approx(cfg.finger.drive_limit * 7.5));
  CHECK(rack_segment(l, 0.0) == RackSegment::PartA);
  CHECK(rack_segment(l, l.a_end) == RackSegment::PartA);
  CHECK(rack_segment(l, std::nextafter(l.a_end, 1e9)) == RackSegment::PartB1);
  CHECK(rack_segment(l, l.b1_end) == RackSegment::PartB1);
  CHECK(rack_segment(l, l.redline_end) == RackSegment::RedLine);
  CHECK(rack_segment(l, l.b2_end) == RackSegment::PartB2);
  CHECK(rack_segment(l, l.c_end) == RackSegment::PartC);
  CHECK_THROWS_AS(rack_segment(l, -1e-9), RackRange);
  CHECK_THROWS_AS(rack_segment(l, l.c_end + 1e-9), RackRange);
}

TEST_CASE("lock automaton follows incline, seat and release") {
  const TransmissionParams t;
  const LockGeometry g = lock_geometry(t);
  CHECK(g.seat == doctest::Approx(49.5));
  CHECK(g.entry == doctest::Approx(44.5));

  LockState s;
  s = lock_step(t, s, 46.0);
  CHECK(s.stage == LockStage::UpperGroove);
  CHECK(s.spring_compression == doctest::Approx(1.5));
  s = lock_step(t, s, 3.5);
  CHECK(s.stage == LockStage::Engaged);
  // Engaged: the block refuses inward motion.
  CHECK_FALSE(lock_permits(s, -0.1));
  CHECK(lock_step(t, s, -5.0) == s);
  s = lock_step(t, s, 0.5);
  CHECK(s.stage == LockStage::LowerGroove);
  s = lock_step(t, s, -2.0);
  CHECK(s.stage == LockStage::Released);
  s = lock_step(t, s, -48.0);
  CHECK(s.stage == LockStage::Neutral);
  CHECK(s.block_position == 0.0);
}

TEST_CASE("upper groove backs out to neutral without locking") {
  const TransmissionParams t;
  LockState s = lock_step(t, {}, 45.0);
  REQUIRE(s.stage == LockStage::UpperGroove);
  s = lock_step(t, s, -10.0);
  CHECK(s.stage == LockStage::Neutral);
  CHECK(s.spring_compression == 0.0);
}

TEST_CASE("motor routing: forward opens D1 then moves the base, reverse mirrors it") {
  const GripperConfig cfg;
  const double step = deg_to_rad(0.5);
  TransmissionState s;
  s.d1 = deg_to_rad(10.0);
  StepResult r = step_transmission(cfg, s, step);
  CHECK(r.path == PowerPath::D1);
  CHECK(r.state.d1 < s.d1);
  CHECK(r.state.base == 0.0);
  CHECK(s.d1 - r.state.d1 == doctest::Approx(rack_travel(cfg, step) / 7.5));

  s.d1 = 0.0;
  r = step_transmission(cfg, s, step);
  CHECK(r.path == PowerPath::Base);
  CHECK(r.state.base == doctest::Approx(2.0 * rack_travel(cfg, step)));

  // Closing from rest drives D1.
  r = step_transmission(cfg, TransmissionState{}, -step);
  CHECK(r.path == PowerPath::D1);
  CHECK(r.state.d1 > 0.0);

  // Fully closed: the motor stalls and does not turn.
  TransmissionState closed;
  closed.d1 = cfg.finger.drive_limit;
  r = step_transmission(cfg, closed, -step);
  CHECK(r.path == PowerPath::Stall);
  CHECK(r.state == closed);
  CHECK(r.stall_torque == doctest::Approx(198.0));
}

TEST_CASE("forward stroke seats the base at the lock and closes from there") {
  const GripperConfig cfg;
  const double step = deg_to_rad(0.5);
  TransmissionState s;
  int guard = 0;
  while (s.lock.stage != LockStage::Engaged && guard++ < 100000) s = step_transmission(cfg, s, step).state;
  CHECK(s.base == doctest::Approx(lock_geometry(cfg.transmission).seat));
  const double base = s.base;
  for (int i = 0; i < 50; ++i) {
    const StepResult r = step_transmission(cfg, s, -step);
    CHECK(r.path == PowerPath::D1);
    s = r.state;
  }
  CHECK(s.base == base);
  CHECK(s.d1 > 0.0);
}

TEST_CASE("exclusivity and lock safety over random walks") {
  const GripperConfig cfg;
  const double step = deg_to_rad(40.0);
  std::function<void(const TransmissionState&, int)> walk = [&](const TransmissionState& s, int depth) {
    if (depth == 0) return;
    for (double d : {step, -step}) {
      const StepResult r = step_transmission(cfg, s, d);
      const bool d1_moved = r.state.d1 != s.d1;
      const bool base_moved = r.state.base != s.base;
      CHECK(!(d1_moved && base_moved));
      CHECK((r.path == PowerPath::Stall) == (!d1_moved && !base_moved));
      if (s.lock.stage == LockStage::Engaged) CHECK(r.state.base >= s.base);
      walk(r.state, depth - 1);
    }
  };
  walk(TransmissionState{}, 10);
}

TEST_CASE("unlock sequence returns the base home from a seated lock") {
  const GripperConfig cfg;
  const double step = deg_to_rad(5.0);
  TransmissionState s;
  s.base = 49.5;
  s.lock = lock_step(cfg.transmission, {}, 49.5);
  s.d1 = 0.3;
  REQUIRE(s.lock.stage == LockStage::Engaged);
  const UnlockSequence u = unlock_sequence(cfg, step);
  for (int i = 0; i < u.forward; ++i) s = step_transmission(cfg, s, step).state;
  CHECK(s.lock.stage == LockStage::LowerGroove);
  for (int i = 0; i < u.reverse; ++i) s = step_transmission(cfg, s, -step).state;
  CHECK(s.base == 0.0);
  CHECK(s.lock.stage == LockStage::Neutral);
}

TEST_CASE("rack position tracks the active path") {
  const GripperConfig cfg;
  const RackLayout l = rack_layout(cfg);
  TransmissionState s;
  CHECK(rack_segment(l, rack_position(cfg, s)) == RackSegment::PartA);
  s.base = 20.0;
  s.lock = lock_step(cfg.transmission, {}, 20.0);
  CHECK(rack_segment(l, rack_position(cfg, s)) == RackSegment::PartB1);
  s.base = 49.5;
  s.lock = lock_step(cfg.transmission, {}, 49.5);
  s.d1 = 0.5;
  CHECK(rack_segment(l, rack_position(cfg, s)) == RackSegment::PartC);
}

TEST_CASE("zero base travel disables reconfiguration") {
  GripperConfig cfg;
  cfg.transmission.base_travel = 0.0;
  const StepResult r = step_transmission(cfg, TransmissionState{}, deg_to_rad(1.0));
  CHECK(r.path == PowerPath::Stall);
}
