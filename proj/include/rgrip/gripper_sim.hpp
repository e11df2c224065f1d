#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rgrip/assembly.hpp"
#include "rgrip/config.hpp"
#include "rgrip/finger.hpp"
#include "rgrip/scene.hpp"
#include "rgrip/transmission.hpp"

namespace rgrip {

struct GripperAssembly {
  GripperConfig config;
  std::array<FingerState, 3> fingers;
  TransmissionState transmission;
};

/// Rest assembly; a non-zero base is placed as if reconfigured to it.
GripperAssembly build_gripper(const GripperConfig& cfg, double base_translation = 0.0);

double assembly_aperture(const GripperAssembly& a);

/// Total drive a finger has consumed: MCP rotation plus PIP and DIP flexion.
double finger_progress(const FingerParams& p, const FingerState& s);

struct DetectedContact {
  int finger{0};
  Phalanx phalanx{Phalanx::Proximal};
  PlanarPoint point;
  double penetration{0.0};
};

/// World-frame polyline of one phalanx.
std::vector<PlanarPoint> phalanx_polyline(const GripperAssembly& a, int finger, Phalanx ph);

/// Deepest penetration of a phalanx into the object (negative: clearance).
double phalanx_penetration(const GripperAssembly& a, const SceneObject& obj, int finger, Phalanx ph);

/// All phalanges within contact tolerance, ordered by finger then phalanx.
std::vector<DetectedContact> contact_detect(const GripperAssembly& a, const SceneObject& obj);

class ClassificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int classify_mode(const GripperAssembly& a);

enum class Verb { Close, Open, Reconfigure, ReleaseReconfigure, PickThin };

std::string_view to_string(Verb v);

struct Command {
  Verb verb{Verb::Close};
  /// Motor step budget; nullopt runs until the command's own end condition.
  std::optional<int> steps;

  friend bool operator==(const Command&, const Command&) = default;
};

struct TraceFrame {
  int step{0};
  std::string event;
  double aperture{0.0};
  TransmissionState transmission;
  std::array<FingerState, 3> fingers;
  std::vector<DetectedContact> contacts;
};

struct FingerSummary {
  FingerState state;
  ContactLengths lengths;
  SpringForces forces;
};

struct GraspReport {
  int mode{0};
  bool success{false};
  std::string termination;
  std::optional<double> aperture_first_contact;
  double aperture{0.0};
  int steps{0};
  TransmissionState transmission;
  RackSegment segment{RackSegment::PartA};
  std::array<FingerSummary, 3> fingers;
  /// Largest fingertip-to-surface gap after the first surface touch.
  std::optional<double> max_surface_gap;
  std::vector<std::string> warnings;
  std::vector<TraceFrame> trace;
};

struct SimOptions {
  /// Keep every n-th step in the trace, plus every event frame.
  int trace_stride{40};
  /// Safety bound on steps for commands run to completion.
  int max_steps{200000};
};

class Simulation {
 public:
  Simulation(GripperAssembly assembly, SceneObject object, SimOptions options = {});

  /// Executes one command and returns its termination reason.
  std::string run(const Command& c);
  GraspReport report() const;
  const GripperAssembly& assembly() const { return asm_; }

 private:
  enum class StepResultKind { Moved, Contact, Stable, Closed, Stall, ForceStall, BaseBlocked, Lifted, SurfaceTooHigh };

  StepResultKind motor_step(double motor_delta);
  StepResultKind d1_step(const TransmissionState& next);
  StepResultKind base_step(const TransmissionState& next);
  FingerState close_finger(int i, FingerState s, double delta, std::vector<std::string>& events);
  FingerState thin_adjust(int i, const FingerState& s) const;
  double new_penetration(int i, const FingerState& s) const;
  double penetration_of(int i, const FingerState& s, Phalanx ph) const;
  bool all_settled() const;
  double spring_torque() const;
  void record(const std::string& event, bool force);

  std::string close_loop(std::optional<int> budget);
  std::string open_loop(std::optional<int> budget);
  std::string reconfigure_loop(std::optional<int> budget);
  std::string release_loop(std::optional<int> budget);

  GripperAssembly asm_;
  SceneObject obj_;
  SimOptions opt_;
  bool thin_{false};
  double surface_{0.0};
  std::array<bool, 3> touched_{};
  std::optional<double> max_gap_;
  std::optional<double> first_contact_;
  std::string termination_{"none"};
  std::vector<std::string> warnings_;
  std::vector<TraceFrame> trace_;
  int steps_{0};
  std::string pending_event_;
};

/// Closes from the assembly's current state until the grasp settles.
GraspReport close_until_stable(const GripperAssembly& a, const SceneObject& obj, const SimOptions& opt = {});

/// Closes with the fingertips tracking the slab's support surface.
GraspReport thin_object_pickup(const GripperAssembly& a, const SceneObject& slab, const SimOptions& opt = {});

GraspReport run_commands(const GripperConfig& cfg, const SceneObject& obj, const std::vector<Command>& commands,
                         const SimOptions& opt = {});

struct ModeRange {
  int mode{0};
  bool reachable{false};
  double min{0.0};
  double max{0.0};
};

ModeRange aperture_range(const GripperConfig& cfg, int mode);
std::array<ModeRange, 5> sweep_ranges(const GripperConfig& cfg);

}  // namespace rgrip
