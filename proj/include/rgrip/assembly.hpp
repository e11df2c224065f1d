#pragma once

#include <array>

#include "rgrip/config.hpp"
#include "rgrip/finger.hpp"

namespace rgrip {

/// Two fingers on the right (+x) side and one opposed on the left. All
/// three lie in the same grasp plane; the right pair shares one pose.
inline constexpr std::array<int, 3> kFingerSides{+1, +1, -1};

/// World x of a side's MCP pivot column: the palm half-width plus half of
/// the reconfiguration shift.
double base_x(const GripperConfig& cfg, double base_translation);

PlanarPoint to_world(const GripperConfig& cfg, int side, double base_translation, PlanarPoint local);

struct WorldFinger {
  std::array<PlanarPoint, 3> proximal;
  std::array<PlanarPoint, 2> middle;
  std::array<PlanarPoint, 2> distal;
  PlanarPoint fingertip;
};

WorldFinger world_finger(const GripperConfig& cfg, int side, double base_translation, const FingerState& s);

/// Fingertip gap between the right finger and the opposed left finger.
double aperture(const GripperConfig& cfg, double base_translation, const FingerState& right,
                const FingerState& left);

/// Parallel-mode state at an arbitrary MCP drive, ignoring drive_limit.
FingerState parallel_state(const FingerParams& p, double drive);

/// Aperture of the symmetric parallel posture at `drive`.
double parallel_aperture(const GripperConfig& cfg, double base_translation, double drive);

/// Drive at which the symmetric parallel posture closes to aperture 0.
double parallel_closure_drive(const GripperConfig& cfg, double base_translation);

/// Diameter of the largest circle on the centre line enclosed by the palm
/// and the proximal/middle phalanges of the two opposed fingers.
double hollow_diameter(const GripperConfig& cfg, double base_translation, const FingerState& right,
                       const FingerState& left);

/// hollow_diameter of the symmetric posture closed to aperture 0.
double closed_hollow(const GripperConfig& cfg, double base_translation);

/// Base translation where a full reconfiguration stroke seats the lock.
double reconfigured_base(const GripperConfig& cfg);

}  // namespace rgrip
