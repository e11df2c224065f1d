#pragma once

#include <stdexcept>
#include <string>

#include "rgrip/geometry.hpp"

namespace rgrip {

/// Constant link lengths (mm) and fixed angles (rad) of one finger.
///
/// L1c, L2c and kappa have no published value; the defaults are the
/// calibrated constants produced by `calibrate_geometry` (see
/// calibration.hpp). D2 is carried for completeness and not used by any
/// kinematic relation.
struct LinkageGeometry {
  double L1_rest{70.0};
  double L1a{70.0};
  double L1b{30.0};
  double L1c{30.0};
  double L2_rest{55.0};
  double L2a{30.0};
  double L2b{76.0};
  double L2c{29.138501945};
  double L3_rest{51.0};
  double L3a{29.0};
  double D1{85.0};
  double D2{68.0};
  double beta{kPi / 2.0};
  double kappa{0.793455061};

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;
};

/// Both roots of a monic quadratic x^2 + b x + c.
struct QuadraticRoots {
  double root_lo{0.0};
  double root_hi{0.0};
  double discriminant{0.0};
  double b{0.0};
  double c{0.0};
};

class InfeasibleConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonPhysicalConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Discriminants in [-kTangencyClamp, 0) are treated as exact tangency.
inline constexpr double kTangencyClamp = 1e-9;

constexpr double alpha_from(double theta2, double beta) { return beta - theta2; }

/// Joint points of the proximal loop in the frame anchored at O1 whose
/// x-axis points from O2 towards O1.
struct ProximalJoints {
  PlanarPoint O1;
  PlanarPoint O2;
  PlanarPoint Om;
  PlanarPoint Oa;
};

ProximalJoints joint_positions(const LinkageGeometry& geom, double theta1, double alpha, double L1);

/// Solves x^2 + b x + c = 0 with the tangency clamp. Throws
/// InfeasibleConfiguration when the discriminant is negative.
QuadraticRoots solve_monic_quadratic(double b, double c, const std::string& context);

/// Retractable proximal length L1 for the given joint angles.
///   b1 = 2 L1c cos(a) - 2 L1a cos(t1)
///   c1 = L1a^2 + L1c^2 - 2 L1a L1c cos(a - t1) - L1b^2,  a = beta - theta2
QuadraticRoots solve_proximal_retraction(const LinkageGeometry& geom, double theta1, double theta2);

/// Retractable middle length L2, delta = kappa - theta3:
///   b2 = 2 L2c cos(delta) - 2 L2a cos(beta)
///   c2 = L2a^2 + L2c^2 - 2 L2a L2c cos(delta - beta) - L2b^2
QuadraticRoots solve_middle_retraction(const LinkageGeometry& geom, double theta3, double beta);

/// Constant term of the proximal quadratic as printed with +L1b^2. Kept
/// only so the regression suite can show it has no real roots.
double printed_proximal_constant(const LinkageGeometry& geom, double theta1, double alpha);

/// Loop-closure residuals (mm^2); zero on a closed loop.
double proximal_closure_residual(const LinkageGeometry& geom, double theta1, double alpha, double L1);
double middle_closure_residual(const LinkageGeometry& geom, double delta, double beta, double L2);

/// Root nearest to `previous_length`, positive roots first, ties to root_lo.
/// Throws NonPhysicalConfiguration when neither root is positive.
double select_root(const QuadraticRoots& roots, double previous_length);

}  // namespace rgrip
