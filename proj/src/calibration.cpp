#include "rgrip/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rgrip/assembly.hpp"

namespace rgrip {

double middle_branch_length(const LinkageGeometry& g, double delta) {
  const double b = 2.0 * g.L2c * std::cos(delta) - 2.0 * g.L2a * std::cos(g.beta);
  const double c = g.L2a * g.L2a + g.L2c * g.L2c - 2.0 * g.L2a * g.L2c * std::cos(delta - g.beta) -
                   g.L2b * g.L2b;
  return solve_monic_quadratic(b, c, "middle branch").root_hi;
}

namespace {

// Golden-section minimum of the middle branch over delta in [lo, hi].
double branch_argmin(const LinkageGeometry& g, double lo, double hi) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 200; ++i) {
    const double c = hi - r * (hi - lo);
    const double d = lo + r * (hi - lo);
    if (middle_branch_length(g, c) <= middle_branch_length(g, d)) {
      hi = d;
    } else {
      lo = c;
    }
  }
  return 0.5 * (lo + hi);
}

template <typename F>
double bisect(F f, double lo, double hi, int iterations = 100) {
  double flo = f(lo);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

MiddleCalibration calibrate_middle(const LinkageGeometry& g0, double L2_min) {
  if (!(L2_min > 0.0 && L2_min < g0.L2_rest)) throw std::invalid_argument("L2_min must lie in (0, L2_rest)");
  LinkageGeometry g = g0;
  // The branch stays real for every delta while L2a + L2c < L2b.
  const double lo = -kPi / 2.0;
  const double hi = kPi / 2.0;
  const auto min_for = [&](double L2c) {
    g.L2c = L2c;
    return middle_branch_length(g, branch_argmin(g, lo, hi)) - L2_min;
  };
  g.L2c = bisect(min_for, 1e-3, std::min(g.L2b - g.L2a, g.L2_rest) - 1e-3);
  const double delta_min = branch_argmin(g, lo, hi);
  const double kappa = bisect([&](double d) { return middle_branch_length(g, d) - g.L2_rest; }, delta_min, hi);
  return {g.L2c, kappa, kappa - delta_min, middle_branch_length(g, delta_min)};
}

double proximal_workspace_min(const FingerParams& p, double flex_limit) {
  const auto& g = p.geometry;
  const double flex_step = deg_to_rad(0.25);
  const int contacts = std::max(1, static_cast<int>(std::ceil(rad_to_deg(p.drive_limit))));
  double best = g.L1_rest;
  for (int i = 0; i <= contacts; ++i) {
    const FingerState s = parallel_state(p, p.drive_limit * i / contacts);
    double L1 = g.L1_rest;
    const int n = static_cast<int>(std::ceil(flex_limit / flex_step));
    for (int k = 1; k <= n; ++k) {
      const double flex = std::min(flex_limit, k * flex_step);
      try {
        L1 = select_root(solve_proximal_retraction(g, s.theta1, s.theta2 + flex), L1);
      } catch (const std::runtime_error&) {
        break;
      }
      if (L1 > g.L1_rest + 1e-7) break;
      best = std::min(best, L1);
    }
  }
  return best;
}

double calibrate_pip_flex_limit(const FingerParams& p, double L1_min) {
  const double hi = deg_to_rad(90.0);
  if (proximal_workspace_min(p, hi) > L1_min) {
    throw std::runtime_error("proximal workspace cannot reach the requested L1 minimum");
  }
  return bisect([&](double f) { return proximal_workspace_min(p, f) - L1_min; }, 0.0, hi, 40);
}

namespace {

struct BaseResidual {
  double r0;
  double r1;
};

GripperConfig with_base(const GripperConfig& cfg, const CalibrationTargets& t, double mcp_rest, double palm_height) {
  GripperConfig c = cfg;
  c.finger.mcp_rest = mcp_rest;
  c.palm_height = palm_height;
  c.palm_half_width = t.rest_aperture / 2.0 + c.finger.pad_offset - c.finger.geometry.L1_rest * std::cos(mcp_rest);
  return c;
}

BaseResidual base_residual(const GripperConfig& cfg, const CalibrationTargets& t, double m, double h) {
  const GripperConfig c = with_base(cfg, t, m, h);
  return {closed_hollow(c, 0.0) - t.hollow_proximal, closed_hollow(c, reconfigured_base(c)) - t.hollow_remote};
}

}  // namespace

BaseCalibration calibrate_base(const GripperConfig& cfg, const CalibrationTargets& t) {
  double m = cfg.finger.mcp_rest;
  double h = cfg.palm_height;
  BaseCalibration out;
  const double dm = deg_to_rad(0.01);
  const double dh = 0.01;
  for (int it = 0; it < 50; ++it) {
    const BaseResidual f = base_residual(cfg, t, m, h);
    out.iterations = it;
    if (std::abs(f.r0) < 1e-6 && std::abs(f.r1) < 1e-6) break;
    const BaseResidual fm = base_residual(cfg, t, m + dm, h);
    const BaseResidual fh = base_residual(cfg, t, m, h + dh);
    const double a = (fm.r0 - f.r0) / dm, b = (fh.r0 - f.r0) / dh;
    const double c = (fm.r1 - f.r1) / dm, d = (fh.r1 - f.r1) / dh;
    const double det = a * d - b * c;
    if (std::abs(det) < 1e-12) throw std::runtime_error("base calibration: singular Jacobian");
    double step_m = -(d * f.r0 - b * f.r1) / det;
    double step_h = -(-c * f.r0 + a * f.r1) / det;
    // Damp large steps to stay inside the region where the posture closes.
    const double scale = std::min({1.0, deg_to_rad(5.0) / std::abs(step_m), 5.0 / std::abs(step_h)});
    m += scale * step_m;
    h += scale * step_h;
  }
  const GripperConfig c = with_base(cfg, t, m, h);
  out.mcp_rest = m;
  out.palm_height = h;
  out.palm_half_width = c.palm_half_width;
  out.drive_limit = parallel_closure_drive(c, reconfigured_base(c)) + t.drive_margin;
  out.hollow_proximal = closed_hollow(c, 0.0);
  out.hollow_remote = closed_hollow(c, reconfigured_base(c));
  return out;
}

CalibrationResult calibrate(const GripperConfig& cfg, const CalibrationTargets& t) {
  CalibrationResult out;
  out.config = cfg;
  auto& c = out.config;

  out.middle = calibrate_middle(c.finger.geometry, t.L2_min);
  c.finger.geometry.L2c = out.middle.L2c;
  c.finger.geometry.kappa = out.middle.kappa;
  c.finger.theta3_rest = 0.0;
  c.finger.dip_flex_limit = out.middle.dip_flex_limit;

  out.base = calibrate_base(c, t);
  c.finger.mcp_rest = out.base.mcp_rest;
  c.palm_height = out.base.palm_height;
  c.palm_half_width = out.base.palm_half_width;
  c.finger.drive_limit = out.base.drive_limit;

  out.pip_flex_limit = calibrate_pip_flex_limit(c.finger, t.L1_min);
  c.finger.pip_flex_limit = out.pip_flex_limit;
  out.L1_workspace_min = proximal_workspace_min(c.finger, out.pip_flex_limit);
  return out;
}

}  // namespace rgrip
