#pragma once

#include "rgrip/config.hpp"

namespace rgrip {

struct CalibrationTargets {
  double rest_aperture{127.0};
  double hollow_proximal{16.0};
  double hollow_remote{34.0};
  double L1_min{46.0};
  double L2_min{36.0};
  /// Extra MCP travel beyond the reconfigured parallel closure.
  double drive_margin{deg_to_rad(1.0)};
};

/// Physical (upper) root of the middle loop as a function of delta.
double middle_branch_length(const LinkageGeometry& g, double delta);

struct MiddleCalibration {
  double L2c{0.0};
  double kappa{0.0};
  double dip_flex_limit{0.0};
  double L2_min{0.0};
};

/// L2c so that the branch minimum equals `L2_min`, kappa so that theta3 = 0
/// gives L2_rest on the descending side, and the flexion that reaches the
/// minimum.
MiddleCalibration calibrate_middle(const LinkageGeometry& g, double L2_min);

/// Smallest L1 reachable by freezing the proximal phalanx anywhere in
/// [0, drive_limit] and flexing the PIP by up to `flex_limit`.
double proximal_workspace_min(const FingerParams& p, double flex_limit);

double calibrate_pip_flex_limit(const FingerParams& p, double L1_min);

struct BaseCalibration {
  double mcp_rest{0.0};
  double palm_height{0.0};
  double palm_half_width{0.0};
  double drive_limit{0.0};
  double hollow_proximal{0.0};
  double hollow_remote{0.0};
  int iterations{0};
};

/// Solves mcp_rest and palm_height for the two hollow diameters while the
/// palm half-width holds the rest aperture; drive_limit then covers the
/// reconfigured parallel closure.
BaseCalibration calibrate_base(const GripperConfig& cfg, const CalibrationTargets& t);

struct CalibrationResult {
  GripperConfig config;
  MiddleCalibration middle;
  BaseCalibration base;
  double pip_flex_limit{0.0};
  double L1_workspace_min{0.0};
};

CalibrationResult calibrate(const GripperConfig& cfg, const CalibrationTargets& t = {});

}  // namespace rgrip
