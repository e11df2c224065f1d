#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rgrip/config.hpp"
#include "rgrip/gripper_sim.hpp"
#include "rgrip/scene.hpp"

namespace rgrip {

struct Diagnostic {
  int line{0};
  int column{0};
  std::string message;
};

std::string format_diagnostic(const std::string& source, const Diagnostic& d);

class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Object description in file units (mm, degrees).
struct ObjectSpec {
  ShapeKind kind{ShapeKind::None};
  std::string name;
  double diameter{0.0};
  double width{0.0};
  double height{0.0};
  double thickness{0.0};
  double center_x{0.0};
  double center_y{0.0};
  double rotation_deg{0.0};
  /// Support-plane height of a slab.
  double surface_y{0.0};
  bool on_surface{true};

  SceneObject build() const;
  friend bool operator==(const ObjectSpec&, const ObjectSpec&) = default;
};

struct Scenario {
  /// [gripper] overrides in file units, in configuration-field order.
  std::vector<std::pair<std::string, double>> overrides;
  ObjectSpec object_spec;
  std::vector<Command> commands;

  GripperConfig config() const;
  SceneObject object() const { return object_spec.build(); }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parses the `[gripper]` / `[object]` / `[commands]` text format. Throws
/// ScenarioError carrying every diagnostic found.
Scenario parse_scenario(const std::string& text);

/// Canonical text form; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& s);

}  // namespace rgrip
