#include <cmath>
#include <random>

#include "doctest.h"
#include "rgrip/assembly.hpp"
#include "rgrip/finger.hpp"

using namespace rgrip;

namespace {

double assembly_angle(const FingerPose& pose) {
  return angle_between(pose.tip - pose.O2, pose.Om - pose.O2);
}

// Parallel stroke to `drive`, then proximal contact.
FingerState frozen_at(const FingerParams& p, double drive) {
  FingerState s = advance(p, rest_pose(p), drive);
  return apply_contact(p, s, {Phalanx::Proximal, {}, 0.0});
}

}  // namespace

TEST_CASE("rest pose holds the linkages at their rest lengths") {
  const FingerParams p;
  const FingerState s = rest_pose(p);
  CHECK(s.behavior == Behavior::Parallel);
  CHECK(s.L1 == doctest::Approx(p.geometry.L1_rest));
  CHECK(s.L2 == doctest::Approx(p.geometry.L2_rest));
  CHECK(s.L3 == doctest::Approx(p.geometry.L3_rest));
  CHECK(s.contact_fixed.empty());
  CHECK(proximal_closure_residual(p.geometry, s.theta1, alpha_from(s.theta2, p.geometry.beta), s.L1) ==
        doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("parallel stroke keeps the distal assembly normal to O2Om") {
  const FingerParams p;
  FingerState s = rest_pose(p);
  const double step = deg_to_rad(0.5);
  double worst = 0.0;
  while (!s.saturated) {
    const FingerPose pose = finger_pose(p, s);
    worst = std::max(worst, std::abs(assembly_angle(pose) - kPi / 2.0));
    s = advance(p, s, step);
  }
  CHECK(worst < 1e-9);
  CHECK(s.drive == doctest::Approx(p.drive_limit));
}

TEST_CASE("parallel stroke keeps the middle phalanx at a fixed world orientation") {
  const GripperConfig cfg;
  const FingerState a = parallel_state(cfg.finger, 0.0);
  const FingerState b = parallel_state(cfg.finger, deg_to_rad(40.0));
  const WorldFinger wa = world_finger(cfg, 1, 0.0, a);
  const WorldFinger wb = world_finger(cfg, 1, 0.0, b);
  const PlanarPoint da = wa.middle[1] - wa.middle[0];
  const PlanarPoint db = wb.middle[1] - wb.middle[0];
  CHECK(angle_between(da, db) < 1e-9);
}

TEST_CASE("parallel_step rejects enveloping behaviour and clamps at the limits") {
  const FingerParams p;
  FingerState s = rest_pose(p);
  FingerState back = parallel_step(p, s, -0.1);
  CHECK(back.drive == 0.0);
  CHECK(back.saturated);
  FingerState env = frozen_at(p, deg_to_rad(10.0));
  CHECK_THROWS_AS(parallel_step(p, env, 0.01), std::logic_error);
}

TEST_CASE("compression against a fixed object is monotone and ordered") {
  const FingerParams p;
  FingerState s = frozen_at(p, deg_to_rad(20.0));
  const double step = deg_to_rad(0.5);
  double prev_L1 = s.L1;
  int moves = 0;
  while (!s.saturated && moves < 400) {
    s = advance(p, s, step);
    CHECK(s.L1 <= prev_L1 + 1e-12);
    // L2 stays at rest until the middle phalanx is frozen as well.
    CHECK(s.L2 == doctest::Approx(p.geometry.L2_rest));
    prev_L1 = s.L1;
    ++moves;
  }
  CHECK(s.L1 < p.geometry.L1_rest);
  CHECK(s.L1 >= p.L_min[0] - 1e-9);

  FingerState m = frozen_at(p, deg_to_rad(20.0));
  m = advance(p, m, deg_to_rad(8.0));
  const double L1_frozen = m.L1;
  m = apply_contact(p, m, {Phalanx::Middle, {}, 0.0});
  CHECK(m.behavior == Behavior::EnvelopingDecoupled);
  double prev_L2 = m.L2;
  moves = 0;
  while (!m.saturated && moves < 400) {
    m = advance(p, m, step);
    CHECK(m.L2 <= prev_L2 + 1e-12);
    CHECK(m.L1 == doctest::Approx(L1_frozen));
    prev_L2 = m.L2;
    ++moves;
  }
  CHECK(m.L2 < p.geometry.L2_rest);
  CHECK(m.L2 >= p.L_min[1] - 1e-9);
}

TEST_CASE("opening unwinds an enveloping stroke back to rest") {
  const FingerParams p;
  FingerState s = frozen_at(p, deg_to_rad(20.0));
  s = advance(p, s, deg_to_rad(10.0));
  s = advance(p, s, -deg_to_rad(30.0));
  CHECK(s.drive == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(s.L1 == doctest::Approx(p.geometry.L1_rest).epsilon(1e-9));
}

TEST_CASE("a second push on a frozen phalanx beyond its slider travel is over-compression") {
  const FingerParams p;
  FingerState s = frozen_at(p, deg_to_rad(20.0));
  CHECK_NOTHROW(apply_contact(p, s, {Phalanx::Proximal, {}, 1.0}));
  CHECK_THROWS_AS(apply_contact(p, s, {Phalanx::Proximal, {}, 100.0}), OverCompression);
  CHECK_THROWS_AS(apply_contact(p, s, {Phalanx::Proximal, {}, -1.0}), std::invalid_argument);
}

TEST_CASE("contact lengths follow the affine occlusion model") {
  const FingerParams p;
  FingerState s = rest_pose(p);
  ContactLengths c = contact_lengths(p, s);
  CHECK(c.total == doctest::Approx(176.0));
  CHECK(c.R_total == doctest::Approx(0.0));

  s.L1 = (p.geometry.L1_rest + p.L_min[0]) / 2.0;
  c = contact_lengths(p, s);
  CHECK(c.R[0] == doctest::Approx(0.5 * 30.0 / 70.0));
  CHECK(c.R[1] == 0.0);

  s.L1 = p.L_min[0];
  s.L2 = p.L_min[1];
  s.L3 = p.L_min[2];
  c = contact_lengths(p, s);
  CHECK(c.total == doctest::Approx(102.0));
  CHECK(c.R_total == doctest::Approx(74.0 / 176.0));
}

TEST_CASE("contact lengths stay inside the published bounds for reachable states") {
  const FingerParams p;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> drive(0.0, p.drive_limit);
  std::uniform_real_distribution<double> flex(0.0, deg_to_rad(120.0));
  for (int i = 0; i < 300; ++i) {
    FingerState s = frozen_at(p, drive(rng));
    s = advance(p, s, flex(rng));
    if (i % 2) {
      s = apply_contact(p, s, {Phalanx::Middle, {}, 0.0});
      s = advance(p, s, flex(rng));
    }
    const ContactLengths c = contact_lengths(p, s);
    CHECK(c.S[0] >= 40.0 - 1e-9);
    CHECK(c.S[0] <= 70.0 + 1e-9);
    CHECK(c.S[1] >= 26.0 - 1e-9);
    CHECK(c.S[1] <= 55.0 + 1e-9);
    CHECK(c.S[2] >= 36.0 - 1e-9);
    CHECK(c.S[2] <= 51.0 + 1e-9);
  }
}

TEST_CASE("spring work along a compression path equals the stored energy") {
  const FingerParams p;
  const SpringBank k;
  FingerState s = frozen_at(p, deg_to_rad(15.0));
  double work = 0.0;
  double prev_L1 = s.L1;
  double prev_F = spring_forces(p, s, k).mcp;
  for (int i = 0; i < 200 && !s.saturated; ++i) {
    s = advance(p, s, deg_to_rad(0.25));
    const double F = spring_forces(p, s, k).mcp;
    work += 0.5 * (F + prev_F) * (prev_L1 - s.L1);
    prev_L1 = s.L1;
    prev_F = F;
  }
  const double delta = p.geometry.L1_rest - s.L1;
  REQUIRE(delta > 1.0);
  CHECK(std::abs(work - 0.5 * k.K_MCP * delta * delta) <= 1e-6 * work);
}

TEST_CASE("distal retraction keeps the fingertip on the surface plane") {
  const FingerParams p;
  FingerState s = advance(p, rest_pose(p), deg_to_rad(20.0));
  const double tip_y = finger_pose(p, s).fingertip.y;
  const double plane = tip_y - 5.0;
  const FingerState r = distal_retract(p, s, plane);
  CHECK(r.behavior == Behavior::ThinObject);
  CHECK(finger_pose(p, r).fingertip.y == doctest::Approx(plane).epsilon(1e-12));
  CHECK(r.L3 < p.geometry.L3_rest);

  // Plane beyond the fingertip: nothing to retract.
  CHECK(distal_retract(p, s, tip_y + 1.0).L3 == p.geometry.L3_rest);
  // Plane deeper than the slider travel.
  CHECK_THROWS_AS(distal_retract(p, s, tip_y - 40.0), SurfaceTooHigh);
}

TEST_CASE("finger parameters validate") {
  FingerParams p;
  CHECK_NOTHROW(p.validate());
  p.pad_offset = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
