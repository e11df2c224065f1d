#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rgrip/finger.hpp"

namespace rgrip {

/// Gear set, rack and reconfiguration-rail parameters.
struct TransmissionParams {
  int worm_ratio{15};
  int small_gear_teeth{15};
  int large_gear_teeth{30};
  double motor_speed_limit_rpm{120.0};
  double motor_torque_nm{6.6};
  /// Pitch radius of the large gear meshing with the rack.
  double rack_gear_radius{15.0};
  /// Pitch radius of the pinion that turns D1 from the rack.
  double d1_pinion_radius{7.5};
  /// Total aperture shift of the reconfiguration (both sides together).
  double base_travel{50.0};
  /// Distance short of full travel where the lock block seats.
  double lock_offset{0.5};
  /// Length of the upper-groove incline before the lock seat.
  double groove_length{5.0};
  /// Rack width of the red-line marker between PartB1 and PartB2.
  double redline_width{0.05};

  void validate() const;
};

struct GripperConfig {
  FingerParams finger;
  SpringBank springs;
  TransmissionParams transmission;
  /// Palm contact surface height above the MCP pivots.
  double palm_height{18.391910478};
  /// Lateral offset of each MCP pivot from the palm centre line at base 0.
  double palm_half_width{9.226150647};
  /// Motor angle per simulation step.
  double step{deg_to_rad(0.5)};

  void validate() const;
};

/// Every length (linkage, stops, palm, rails) multiplied by k; angles kept.
GripperConfig scaled(const GripperConfig& cfg, double k);

enum class FieldUnit { Length, Angle, Scalar };

/// Named handle to one tunable configuration value. Angles are exposed in
/// degrees, everything else in its native unit.
struct ConfigField {
  std::string name;
  FieldUnit unit;
  std::function<double&(GripperConfig&)> ref;
};

const std::vector<ConfigField>& config_fields();
const ConfigField* find_config_field(const std::string& name);
double get_field(const ConfigField& f, const GripperConfig& cfg);
void set_field(const ConfigField& f, GripperConfig& cfg, double external_value);

/// FNV-1a over the canonical text form of the configuration.
std::uint64_t config_hash(const GripperConfig& cfg);
std::string canonical_text(const GripperConfig& cfg);

}  // namespace rgrip
