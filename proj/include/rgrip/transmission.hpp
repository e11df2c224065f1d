#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>

#include "rgrip/config.hpp"

namespace rgrip {

enum class RackSegment : std::uint8_t { PartA, PartB1, RedLine, PartB2, PartC };
enum class LockStage : std::uint8_t { Neutral, UpperGroove, Engaged, LowerGroove, Released };

std::string_view to_string(RackSegment s);
std::string_view to_string(LockStage s);

class OverSpeed : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RackRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Reduction from motor to each output gear (worm stage times spur stage).
double overall_ratio(const TransmissionParams& t);

struct GearOutputs {
  double g1{0.0};
  double g2{0.0};
  double g3{0.0};
};

/// Signed output speeds (rpm) for a signed motor speed.
GearOutputs gear_outputs(const TransmissionParams& t, double motor_rpm);
double output_torque(const TransmissionParams& t, double motor_torque);

/// Right-closed segment boundaries along the rack, in mm.
struct RackLayout {
  double a_end{0.0};
  double b1_end{0.0};
  double redline_end{0.0};
  double b2_end{0.0};
  double c_end{0.0};
};

RackLayout rack_layout(const GripperConfig& cfg);
RackSegment rack_segment(const RackLayout& layout, double position);

/// Base translations where the lock mechanism changes stage.
struct LockGeometry {
  /// Start of the upper-groove incline.
  double entry{0.0};
  /// Lock seat; forward base motion from Neutral/UpperGroove stops here.
  double seat{0.0};
  /// Forward over-travel past which the block drops into the lower groove.
  double release{0.0};
};

LockGeometry lock_geometry(const TransmissionParams& t);

struct LockState {
  LockStage stage{LockStage::Neutral};
  /// Lock-block spring compression on the upper incline.
  double spring_compression{0.0};
  /// Base translation seen by the block.
  double block_position{0.0};

  friend bool operator==(const LockState&, const LockState&) = default;
};

/// True when the lock lets the base move by `delta` (mm, signed).
bool lock_permits(const LockState& lock, double delta);

/// Advances the lock automaton by a base motion. A motion the lock does
/// not permit leaves the state unchanged.
LockState lock_step(const TransmissionParams& t, const LockState& lock, double delta);

struct TransmissionState {
  double motor_angle{0.0};
  /// D1 rotation from the fully open position, closing positive.
  double d1{0.0};
  /// Aperture shift of the reconfiguration rail, in [0, base_travel].
  double base{0.0};
  LockState lock;

  double tension_spring_extension() const { return base / 2.0; }
  friend bool operator==(const TransmissionState&, const TransmissionState&) = default;
};

double rack_position(const GripperConfig& cfg, const TransmissionState& s);

enum class PowerPath : std::uint8_t { D1, Base, Stall };

struct StepResult {
  TransmissionState state;
  PowerPath path{PowerPath::Stall};
  /// Output torque at stall, zero otherwise.
  double stall_torque{0.0};
};

/// Rack travel produced by a motor rotation.
double rack_travel(const GripperConfig& cfg, double motor_delta);

/// Routes one motor step; positive motor rotation opens. The step moves
/// along exactly one path (or stalls) and is clamped at that path's end.
StepResult step_transmission(const GripperConfig& cfg, const TransmissionState& s, double motor_delta);

/// Motor step counts that undo a reconfiguration from any state: open D1
/// and drive the base past the release point, then reverse it back home.
struct UnlockSequence {
  int forward{0};
  int reverse{0};
};

UnlockSequence unlock_sequence(const GripperConfig& cfg, double motor_step);

}  // namespace rgrip
