#include "rgrip/config.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rgrip {

void TransmissionParams::validate() const {
  const auto require = [](bool ok, const char* field) {
    if (!ok) throw std::invalid_argument(std::string("transmission.") + field + " out of range");
  };
  require(worm_ratio > 0, "worm_ratio");
  require(small_gear_teeth > 0, "small_gear_teeth");
  require(large_gear_teeth > 0, "large_gear_teeth");
  require(motor_speed_limit_rpm > 0.0, "motor_speed_limit_rpm");
  require(motor_torque_nm >= 0.0, "motor_torque_nm");
  require(rack_gear_radius > 0.0, "rack_gear_radius");
  require(d1_pinion_radius > 0.0, "d1_pinion_radius");
  require(base_travel >= 0.0, "base_travel");
  require(base_travel == 0.0 || (lock_offset >= 0.0 && lock_offset < base_travel / 2.0), "lock_offset");
  require(base_travel == 0.0 || (groove_length > 0.0 && groove_length < base_travel - lock_offset),
          "groove_length");
  require(redline_width > 0.0, "redline_width");
}

void GripperConfig::validate() const {
  finger.validate();
  transmission.validate();
  if (!(palm_height >= 0.0)) throw std::invalid_argument("gripper.palm_height out of range");
  if (!(palm_half_width > 0.0)) throw std::invalid_argument("gripper.palm_half_width out of range");
  if (!(step > 0.0 && step <= deg_to_rad(5.0))) throw std::invalid_argument("gripper.step out of range");
  if (!(springs.K_MCP > 0.0 && springs.K_PIP > 0.0 && springs.K_DIP > 0.0)) {
    throw std::invalid_argument("springs must be positive");
  }
}

const std::vector<ConfigField>& config_fields() {
  using U = FieldUnit;
  static const std::vector<ConfigField> fields = {
      {"L1_rest", U::Length, [](GripperConfig& c) -> double& { return c.finger.geometry.L1_rest; }},
      {"L1a", U::Length, [](GripperConfig& c) -> double& { return c.finger.geometry.L1a; }},
      {"L1b", U::Length, [](GripperConfig& c) -> double& { return c.finger.geometry.L1b; }},
      {"L1c", U::Length, [](GripperConfig& c) -> double& { return c.finger.geometry.L1c; }},
      {"L2_rest", U::Length, [](GripperConfig& c) -> double& { return c.finger.geometry.L2_rest; }},
      {"L2a", U::Length, [](GripperConfig& c) -> double& { return c.finger.geometry.L2a; }},
      {"L2b", U::Length, [](GripperConfig& c) -> double& { return c.finger.geometry.L2b; }},
      {"L2c", U::Length, [](GripperConfig& c) -> double& { return c.finger.geometry.L2c; }},
      {"L3_rest", U::Length, [](GripperConfig& c) -> double& { return c.finger.geometry.L3_rest; }},
      {"L3a", U::Length, [](GripperConfig& c) -> double& { return c.finger.geometry.L3a; }},
      {"D1", U::Length, [](GripperConfig& c) -> double& { return c.finger.geometry.D1; }},
      {"D2", U::Length, [](GripperConfig& c) -> double& { return c.finger.geometry.D2; }},
      {"kappa", U::Angle, [](GripperConfig& c) -> double& { return c.finger.geometry.kappa; }},
      {"mcp_rest", U::Angle, [](GripperConfig& c) -> double& { return c.finger.mcp_rest; }},
      {"theta3_rest", U::Angle, [](GripperConfig& c) -> double& { return c.finger.theta3_rest; }},
      {"drive_limit", U::Angle, [](GripperConfig& c) -> double& { return c.finger.drive_limit; }},
      {"pip_flex_limit", U::Angle, [](GripperConfig& c) -> double& { return c.finger.pip_flex_limit; }},
      {"dip_flex_limit", U::Angle, [](GripperConfig& c) -> double& { return c.finger.dip_flex_limit; }},
      {"L1_min", U::Length, [](GripperConfig& c) -> double& { return c.finger.L_min[0]; }},
      {"L2_min", U::Length, [](GripperConfig& c) -> double& { return c.finger.L_min[1]; }},
      {"L3_min", U::Length, [](GripperConfig& c) -> double& { return c.finger.L_min[2]; }},
      {"S1_min", U::Length, [](GripperConfig& c) -> double& { return c.finger.S_min[0]; }},
      {"S2_min", U::Length, [](GripperConfig& c) -> double& { return c.finger.S_min[1]; }},
      {"S3_min", U::Length, [](GripperConfig& c) -> double& { return c.finger.S_min[2]; }},
      {"pad_offset", U::Length, [](GripperConfig& c) -> double& { return c.finger.pad_offset; }},
      {"contact_tolerance", U::Length, [](GripperConfig& c) -> double& { return c.finger.contact_tolerance; }},
      {"K_MCP", U::Scalar, [](GripperConfig& c) -> double& { return c.springs.K_MCP; }},
      {"K_PIP", U::Scalar, [](GripperConfig& c) -> double& { return c.springs.K_PIP; }},
      {"K_DIP", U::Scalar, [](GripperConfig& c) -> double& { return c.springs.K_DIP; }},
      {"motor_torque", U::Scalar, [](GripperConfig& c) -> double& { return c.transmission.motor_torque_nm; }},
      {"rack_gear_radius", U::Length, [](GripperConfig& c) -> double& { return c.transmission.rack_gear_radius; }},
      {"d1_pinion_radius", U::Length, [](GripperConfig& c) -> double& { return c.transmission.d1_pinion_radius; }},
      {"base_travel", U::Length, [](GripperConfig& c) -> double& { return c.transmission.base_travel; }},
      {"lock_offset", U::Length, [](GripperConfig& c) -> double& { return c.transmission.lock_offset; }},
      {"groove_length", U::Length, [](GripperConfig& c) -> double& { return c.transmission.groove_length; }},
      {"redline_width", U::Length, [](GripperConfig& c) -> double& { return c.transmission.redline_width; }},
      {"palm_height", U::Length, [](GripperConfig& c) -> double& { return c.palm_height; }},
      {"palm_half_width", U::Length, [](GripperConfig& c) -> double& { return c.palm_half_width; }},
      {"step", U::Angle, [](GripperConfig& c) -> double& { return c.step; }},
  };
  return fields;
}

const ConfigField* find_config_field(const std::string& name) {
  for (const auto& f : config_fields()) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

double get_field(const ConfigField& f, const GripperConfig& cfg) {
  const double v = f.ref(const_cast<GripperConfig&>(cfg));
  return f.unit == FieldUnit::Angle ? rad_to_deg(v) : v;
}

void set_field(const ConfigField& f, GripperConfig& cfg, double external_value) {
  f.ref(cfg) = f.unit == FieldUnit::Angle ? deg_to_rad(external_value) : external_value;
}

GripperConfig scaled(const GripperConfig& cfg, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("scale factor must be positive");
  GripperConfig out = cfg;
  for (const auto& f : config_fields()) {
    if (f.unit == FieldUnit::Length) f.ref(out) *= k;
  }
  return out;
}

std::string canonical_text(const GripperConfig& cfg) {
  std::string out;
  char buf[96];
  for (const auto& f : config_fields()) {
    std::snprintf(buf, sizeof buf, "%s = %.17g\n", f.name.c_str(), get_field(f, cfg));
    out += buf;
  }
  return out;
}

std::uint64_t config_hash(const GripperConfig& cfg) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : canonical_text(cfg)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace rgrip
