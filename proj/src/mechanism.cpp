#include "rgrip/mechanism.hpp"

#include <cmath>
#include <sstream>

namespace rgrip {

void LinkageGeometry::validate() const {
  const std::pair<const char*, double> lengths[] = {
      {"L1_rest", L1_rest}, {"L1a", L1a}, {"L1b", L1b}, {"L1c", L1c}, {"L2_rest", L2_rest},
      {"L2a", L2a},         {"L2b", L2b}, {"L2c", L2c}, {"L3_rest", L3_rest}, {"L3a", L3a},
      {"D1", D1},           {"D2", D2}};
  for (const auto& [name, value] : lengths) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw std::invalid_argument(std::string("LinkageGeometry.") + name + " must be positive");
    }
  }
  if (std::abs(beta - kPi / 2.0) > 1e-12) throw std::invalid_argument("LinkageGeometry.beta must be a right angle");
  if (!std::isfinite(kappa)) throw std::invalid_argument("LinkageGeometry.kappa must be finite");
}

ProximalJoints joint_positions(const LinkageGeometry& geom, double theta1, double alpha, double L1) {
  if (!(L1 > 0.0)) throw std::invalid_argument("joint_positions: L1 must be positive");
  return ProximalJoints{
      .O1 = {0.0, 0.0},
      .O2 = {-L1, 0.0},
      .Om = {-L1 - geom.L1c * std::cos(alpha), geom.L1c * std::sin(alpha)},
      .Oa = {-geom.L1a * std::cos(theta1), geom.L1a * std::sin(theta1)},
  };
}

QuadraticRoots solve_monic_quadratic(double b, double c, const std::string& context) {
  double disc = b * b - 4.0 * c;
  if (disc < 0.0 && disc >= -kTangencyClamp) disc = 0.0;
  if (disc < 0.0) {
    std::ostringstream msg;
    msg << "infeasible configuration (" << context << "): discriminant " << disc;
    throw InfeasibleConfiguration(msg.str());
  }
  const double sq = std::sqrt(disc);
  // Cancellation-free pair: q is the larger-magnitude root.
  const double q = -0.5 * (b + std::copysign(sq, b));
  double r1 = q;
  double r2 = q != 0.0 ? c / q : -0.5 * b;
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2, disc, b, c};
}

namespace {

std::string angle_context(const char* a_name, double a, const char* b_name, double b) {
  std::ostringstream s;
  s << a_name << "=" << rad_to_deg(a) << " deg, " << b_name << "=" << rad_to_deg(b) << " deg";
  return s.str();
}

}  // namespace

QuadraticRoots solve_proximal_retraction(const LinkageGeometry& g, double theta1, double theta2) {
  const double alpha = alpha_from(theta2, g.beta);
  const double b = 2.0 * g.L1c * std::cos(alpha) - 2.0 * g.L1a * std::cos(theta1);
  const double c = g.L1a * g.L1a + g.L1c * g.L1c -
                   2.0 * g.L1a * g.L1c * std::cos(alpha - theta1) - g.L1b * g.L1b;
  return solve_monic_quadratic(b, c, angle_context("theta1", theta1, "alpha", alpha));
}

QuadraticRoots solve_middle_retraction(const LinkageGeometry& g, double theta3, double beta) {
  const double delta = g.kappa - theta3;
  const double b = 2.0 * g.L2c * std::cos(delta) - 2.0 * g.L2a * std::cos(beta);
  const double c = g.L2a * g.L2a + g.L2c * g.L2c -
                   2.0 * g.L2a * g.L2c * std::cos(delta - beta) - g.L2b * g.L2b;
  return solve_monic_quadratic(b, c, angle_context("theta3", theta3, "delta", delta));
}

double printed_proximal_constant(const LinkageGeometry& g, double theta1, double alpha) {
  return g.L1a * g.L1a + g.L1b * g.L1b + g.L1c * g.L1c -
         2.0 * g.L1a * g.L1c * std::cos(alpha - theta1);
}

double proximal_closure_residual(const LinkageGeometry& g, double theta1, double alpha, double L1) {
  const double dx = L1 + g.L1c * std::cos(alpha) - g.L1a * std::cos(theta1);
  const double dy = g.L1a * std::sin(theta1) - g.L1c * std::sin(alpha);
  return dx * dx + dy * dy - g.L1b * g.L1b;
}

double middle_closure_residual(const LinkageGeometry& g, double delta, double beta, double L2) {
  const double dx = L2 + g.L2c * std::cos(delta) - g.L2a * std::cos(beta);
  const double dy = g.L2a * std::sin(beta) - g.L2c * std::sin(delta);
  return dx * dx + dy * dy - g.L2b * g.L2b;
}

double select_root(const QuadraticRoots& roots, double previous_length) {
  const bool lo_ok = roots.root_lo > 0.0;
  const bool hi_ok = roots.root_hi > 0.0;
  if (!lo_ok && !hi_ok) {
    throw NonPhysicalConfiguration("both retraction roots are non-positive");
  }
  if (lo_ok != hi_ok) return lo_ok ? roots.root_lo : roots.root_hi;
  const double d_lo = std::abs(roots.root_lo - previous_length);
  const double d_hi = std::abs(roots.root_hi - previous_length);
  return d_hi < d_lo ? roots.root_hi : roots.root_lo;
}

}  // namespace rgrip
