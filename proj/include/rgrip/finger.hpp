#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string_view>

#include "rgrip/geometry.hpp"
#include "rgrip/mechanism.hpp"

namespace rgrip {

enum class Behavior : std::uint8_t { Parallel, EnvelopingProximal, EnvelopingDecoupled, ThinObject };
enum class Phalanx : std::uint8_t { Proximal = 0, Middle = 1, Distal = 2 };

std::string_view to_string(Behavior b);
std::string_view to_string(Phalanx p);

class PhalanxSet {
 public:
  constexpr bool contains(Phalanx p) const { return (bits_ >> static_cast<int>(p)) & 1u; }
  constexpr void insert(Phalanx p) { bits_ |= static_cast<std::uint8_t>(1u << static_cast<int>(p)); }
  constexpr void erase(Phalanx p) { bits_ &= static_cast<std::uint8_t>(~(1u << static_cast<int>(p))); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return (bits_ & 1) + ((bits_ >> 1) & 1) + ((bits_ >> 2) & 1); }
  friend constexpr bool operator==(PhalanxSet, PhalanxSet) = default;

 private:
  std::uint8_t bits_{0};
};

/// Per-finger kinematic and calibration parameters.
struct FingerParams {
  LinkageGeometry geometry;
  /// Proximal phalanx angle above the palm line at rest.
  double mcp_rest{deg_to_rad(30.564755650)};
  double theta3_rest{0.0};
  /// MCP travel from rest; reaching it saturates a parallel stroke.
  double drive_limit{deg_to_rad(83.992125440)};
  /// Enveloping flexion travel of the PIP after proximal contact.
  double pip_flex_limit{deg_to_rad(33.040861328)};
  /// Decoupled flexion travel of the DIP after middle contact.
  double dip_flex_limit{deg_to_rad(85.267198282)};
  /// Fully retracted linkage lengths (slider stops) and the matching
  /// exposed contact lengths; the occlusion model is affine between
  /// (L_min, S_min) and (L_rest, L_rest).
  std::array<double, 3> L_min{46.0, 36.0, 36.0};
  std::array<double, 3> S_min{40.0, 26.0, 36.0};
  /// Inward offset of the middle/distal contact faces from the linkage line.
  double pad_offset{6.0};
  double contact_tolerance{0.01};

  void validate() const;
};

struct FingerState {
  /// MCP rotation from rest, closing positive.
  double drive{0.0};
  double theta1{0.0};
  double theta2{0.0};
  double theta3{0.0};
  double L1{0.0};
  double L2{0.0};
  double L3{0.0};
  /// PIP angle at the instant the proximal phalanx was frozen.
  double theta2_contact{0.0};
  Behavior behavior{Behavior::Parallel};
  PhalanxSet contact_fixed;
  /// A joint limit or branch end stopped the last advance.
  bool saturated{false};
  /// The finger can no longer move towards the object.
  bool blocked{false};

  friend bool operator==(const FingerState&, const FingerState&) = default;
};

/// Derived joint points and contact polylines in the finger frame: the
/// MCP pivot O1 at the origin, y away from the palm, closing towards -x.
struct FingerPose {
  PlanarPoint O1, O2, Om, Oa, O3, tip;
  /// Inner end of the distal contact face; the fingertip used for apertures.
  PlanarPoint fingertip;
  /// O1, O2 and the PIP knuckle at the base of the middle contact face.
  std::array<PlanarPoint, 3> proximal;
  std::array<PlanarPoint, 2> middle;
  std::array<PlanarPoint, 2> distal;
};

struct PhalanxContact {
  Phalanx phalanx{Phalanx::Proximal};
  PlanarPoint point;
  double penetration{0.0};
};

struct SpringBank {
  double K_MCP{1.0};   // N/mm, tension
  double K_PIP{0.8};   // N/mm, tension
  double K_DIP{0.55};  // N/mm, compression
};

struct SpringForces {
  double mcp{0.0};
  double pip{0.0};
  double dip{0.0};
};

struct ContactLengths {
  std::array<double, 3> S{};
  std::array<double, 3> R{};
  double total{0.0};
  double R_total{0.0};
};

class OverCompression : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SurfaceTooHigh : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// PIP angle that keeps the middle/distal assembly normal to the palm.
double parallel_theta2(const FingerParams& p, double drive);

/// Non-trivial proximal loop angle theta1 at rest length for a given alpha,
/// continued from `previous`.
double rest_loop_theta1(const LinkageGeometry& g, double alpha, double previous);

FingerState rest_pose(const FingerParams& p);
FingerPose finger_pose(const FingerParams& p, const FingerState& s);

/// Rigid rotation of the proximal loop; theta2 tracks the drive so the
/// distal assembly keeps its orientation. Saturates at [0, drive_limit].
FingerState parallel_step(const FingerParams& p, const FingerState& s, double drive_delta);

/// Routes a drive increment (either sign) through the current behaviour:
/// MCP rotation, PIP flexion with L1 retraction, or DIP flexion with L2
/// retraction. Negative increments unwind the same path in reverse.
FingerState advance(const FingerParams& p, const FingerState& s, double drive_delta);

FingerState apply_contact(const FingerParams& p, const FingerState& s, const PhalanxContact& c);

/// Compresses L3 so the fingertip stays on the plane y = surface_height.
FingerState distal_retract(const FingerParams& p, const FingerState& s, double surface_height);

ContactLengths contact_lengths(const FingerParams& p, const FingerState& s);
SpringForces spring_forces(const FingerParams& p, const FingerState& s, const SpringBank& k);

}  // namespace rgrip
