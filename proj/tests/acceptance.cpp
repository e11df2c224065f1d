// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rgrip/calibration.hpp"
#include "rgrip/report.hpp"
#include "rgrip/scenario.hpp"

using namespace rgrip;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass{true};
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string read(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Scenario fixture(const std::string& name) { return parse_scenario(read(fs::path(RGRIP_FIXTURE_DIR) / (name + ".scn"))); }

// Free-joint lengths from two mirrored circles: the free joint slides on
// y = h, so it is where the coupler circle about the fixed joint meets its
// reflection across that line.
std::vector<double> oracle_lengths(PlanarPoint fixed, double coupler, double h, double offset_x) {
  const PlanarPoint mirror{fixed.x, 2.0 * h - fixed.y};
  std::vector<double> out;
  for (const auto& p : circle_intersect(fixed, coupler, mirror, coupler).points) out.push_back(-p.x - offset_x);
  std::sort(out.begin(), out.end());
  return out;
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  const LinkageGeometry g;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  double worst[2] = {0.0, 0.0};

  for (int solver = 0; solver < 2; ++solver) {
    int n = 0;
    while (n < 10000) {
      const double a = angle(rng);
      const double b = angle(rng);
      QuadraticRoots r;
      std::vector<double> ref;
      try {
        if (solver == 0) {
          r = solve_proximal_retraction(g, a, g.beta - b);
          const PlanarPoint oa{-g.L1a * std::cos(a), g.L1a * std::sin(a)};
          ref = oracle_lengths(oa, g.L1b, g.L1c * std::sin(b), g.L1c * std::cos(b));
        } else {
          r = solve_middle_retraction(g, a, b);
          const double delta = g.kappa - a;
          const PlanarPoint fixed{-g.L2a * std::cos(b), g.L2a * std::sin(b)};
          ref = oracle_lengths(fixed, g.L2b, g.L2c * std::sin(delta), g.L2c * std::cos(delta));
        }
      } catch (const InfeasibleConfiguration&) {
        continue;
      }
      if (ref.size() != 2) continue;
      worst[solver] = std::max({worst[solver], std::abs(r.root_lo - ref[0]), std::abs(r.root_hi - ref[1])});
      ++n;
    }
  }
  const double t = seconds_since(t0);
  Outcome o;
  o.pass = worst[0] < 1e-9 && worst[1] < 1e-9 && t < 2.0;
  o.detail = "max |root - oracle| proximal " + fmt("%.2e", worst[0]) + " mm, middle " + fmt("%.2e", worst[1]) +
             " mm over 2 x 10000 samples, " + fmt("%.3f", t) + " s";
  return o;
}

Outcome sign_correction() {
  const LinkageGeometry g;
  const double t1 = deg_to_rad(30.0);
  const double alpha = deg_to_rad(60.0);
  const QuadraticRoots r = solve_proximal_retraction(g, t1, g.beta - alpha);
  const double printed_disc = r.b * r.b - 4.0 * printed_proximal_constant(g, t1, alpha);
  const PlanarPoint oa{-g.L1a * std::cos(t1), g.L1a * std::sin(t1)};
  const auto ref = oracle_lengths(oa, g.L1b, g.L1c * std::sin(alpha), g.L1c * std::cos(alpha));
  Outcome o;
  o.pass = printed_disc < 0.0 && std::abs(r.root_lo - 17.01) <= 0.01 && std::abs(r.root_hi - 74.23) <= 0.01 &&
           ref.size() == 2 && std::abs(ref[0] - r.root_lo) < 1e-9 && std::abs(ref[1] - r.root_hi) < 1e-9;
  o.detail = "printed-form discriminant " + fmt("%.2f", printed_disc) + ", corrected roots {" +
             fmt("%.4f", r.root_lo) + ", " + fmt("%.4f", r.root_hi) + "} mm";
  return o;
}

Outcome retraction_capacity() {
  const CalibrationResult cal = calibrate(GripperConfig{});
  const FingerParams& p = cal.config.finger;
  const double L1 = cal.L1_workspace_min;
  const double L2 = cal.middle.L2_min;
  // The distal slider reaches its stop when the desk is that much deeper.
  FingerState s = rest_pose(p);
  const double tip = finger_pose(p, s).fingertip.y;
  const double span = p.geometry.L3_rest - p.L_min[2];
  const PlanarPoint d = finger_pose(p, s).tip - finger_pose(p, s).O3;
  const double L3 = distal_retract(p, s, tip - span * d.y / norm(d)).L3;

  const double dL = (p.geometry.L1_rest - L1) + (p.geometry.L2_rest - L2) + (p.geometry.L3_rest - L3);
  s.L1 = L1;
  s.L2 = L2;
  s.L3 = L3;
  const ContactLengths c = contact_lengths(p, s);
  const auto within = [](double v, double target) { return std::abs(v - target) <= 0.1 * target; };
  Outcome o;
  o.pass = within(L1, 46.0) && within(L2, 36.0) && within(L3, 36.0) && within(dL, 57.0) && within(c.total, 102.0) &&
           within(c.R_total, 0.4205);
  o.detail = "minima (" + fmt("%.2f", L1) + ", " + fmt("%.2f", L2) + ", " + fmt("%.2f", L3) + ") mm, total dL " +
             fmt("%.2f", dL) + " mm, contact minimum " + fmt("%.2f", c.total) + " mm, R_total " +
             fmt("%.2f", 100.0 * c.R_total) + " %";
  return o;
}

Outcome mode_ranges() {
  const auto t0 = Clock::now();
  const auto r = sweep_ranges(GripperConfig{});
  const double t = seconds_since(t0);
  const double expected[5][2] = {{0, 127}, {16, 127}, {127, 177}, {0, 177}, {34, 177}};
  Outcome o;
  o.pass = t < 10.0;
  for (int m = 0; m < 5; ++m) {
    o.pass = o.pass && r[m].reachable && std::abs(r[m].min - expected[m][0]) <= 2.0 &&
             std::abs(r[m].max - expected[m][1]) <= 2.0;
    o.detail += "M" + std::to_string(m + 1) + " [" + fmt("%.1f", r[m].min) + "," + fmt("%.1f", r[m].max) + "] ";
  }
  const bool nested = r[1].min >= r[0].min && r[1].max <= r[0].max && r[4].min >= r[3].min && r[4].max <= r[3].max;
  o.pass = o.pass && nested;
  o.detail += nested ? "nested, " : "NOT nested, ";
  o.detail += fmt("%.3f s", t);
  return o;
}

Outcome self_lock() {
  const auto t0 = Clock::now();
  const GripperConfig cfg;
  // One step moves the rack across the whole PartA width.
  const double a_width = rack_layout(cfg).a_end;
  const double coarse = a_width / cfg.transmission.rack_gear_radius * overall_ratio(cfg.transmission);
  int strings = 0;
  int violations_a = 0;
  int violations_b = 0;
  int violations_c = 0;
  int engaged_visits = 0;

  for (double delta : {coarse, coarse / 2.0}) {
    const UnlockSequence unlock = unlock_sequence(cfg, delta);
    for (int len = 1; len <= 8; ++len) {
      for (int bits = 0; bits < (1 << len); ++bits) {
        ++strings;
        TransmissionState s;
        for (int i = 0; i < len; ++i) {
          const double d = (bits >> i) & 1 ? delta : -delta;
          const StepResult r = step_transmission(cfg, s, d);
          const bool d1_changed = r.state.d1 != s.d1;
          const bool base_changed = r.state.base != s.base;
          if (s.lock.stage == LockStage::Engaged) {
            ++engaged_visits;
            if (r.state.base < s.base) ++violations_a;
          }
          const bool moved = r.path != PowerPath::Stall;
          if (moved ? d1_changed == base_changed : (d1_changed || base_changed)) ++violations_c;
          s = r.state;
        }
        for (int i = 0; i < unlock.forward; ++i) s = step_transmission(cfg, s, delta).state;
        for (int i = 0; i < unlock.reverse; ++i) s = step_transmission(cfg, s, -delta).state;
        if (s.base != 0.0 || s.lock.stage != LockStage::Neutral) ++violations_b;
      }
    }
  }
  const double t = seconds_since(t0);
  Outcome o;
  o.pass = violations_a == 0 && violations_b == 0 && violations_c == 0 && engaged_visits > 0 && t < 5.0;
  o.detail = std::to_string(strings) + " command strings at two step sizes, " + std::to_string(engaged_visits) +
             " engaged steps; violations (a) " + std::to_string(violations_a) + " (b) " +
             std::to_string(violations_b) + " (c) " + std::to_string(violations_c) + ", " + fmt("%.3f s", t);
  return o;
}

Outcome table_iv_trends() {
  const auto run = [](const std::string& name) {
    const Scenario s = fixture(name);
    return run_commands(s.config(), s.object(), s.commands);
  };
  const auto min_of = [](const GraspReport& r, int k) {
    double v = 1e9;
    for (const auto& f : r.fingers) v = std::min(v, f.lengths.R[k]);
    return v;
  };
  const auto max_of = [](const GraspReport& r, int k) {
    double v = -1e9;
    for (const auto& f : r.fingers) v = std::max(v, f.lengths.R[k]);
    return v;
  };
  Outcome o;
  for (const char* zero : {"trend_cyl40", "trend_cyl120", "trend_pingpong", "trend_tennis"}) {
    const GraspReport r = run(zero);
    const bool ok = r.success && max_of(r, 2) == 0.0;
    o.pass = o.pass && ok;
    o.detail += std::string(zero + 6) + " R_D " + fmt("%.2f%%", 100.0 * max_of(r, 2)) + ", ";
  }
  for (const char* thin : {"trend_ruler", "trend_cardboard"}) {
    const GraspReport r = run(thin);
    const bool ok = r.success && min_of(r, 2) > 0.15;
    o.pass = o.pass && ok;
    o.detail += std::string(thin + 6) + " R_D " + fmt("%.2f%%", 100.0 * min_of(r, 2)) + ", ";
  }
  const GraspReport c25 = run("trend_cyl25");
  const GraspReport c40 = run("trend_cyl40");
  o.pass = o.pass && min_of(c25, 0) > max_of(c40, 0);
  o.detail += "R_P cyl25 " + fmt("%.2f%%", 100.0 * min_of(c25, 0)) + " > cyl40 " + fmt("%.2f%%", 100.0 * max_of(c40, 0));
  return o;
}

Outcome perpendicularity() {
  const GripperConfig cfg;
  double worst = 0.0;
  int steps = 0;
  const auto check = [&](const FingerState& s) {
    const FingerPose pose = finger_pose(cfg.finger, s);
    worst = std::max(worst, std::abs(angle_between(pose.tip - pose.O2, pose.Om - pose.O2) - kPi / 2.0));
    ++steps;
  };
  // Closing stroke through the whole simulator with nothing to grasp.
  SimOptions opt;
  opt.trace_stride = 1;
  const GraspReport r = close_until_stable(build_gripper(cfg), SceneObject{}, opt);
  for (const TraceFrame& f : r.trace) {
    for (const FingerState& s : f.fingers) check(s);
  }
  // And a single finger out to its drive limit.
  FingerState s = rest_pose(cfg.finger);
  while (!s.saturated) {
    check(s);
    s = advance(cfg.finger, s, cfg.step);
  }
  check(s);
  Outcome o;
  o.pass = worst < 1e-9 && steps > 100;
  o.detail = "max deviation " + fmt("%.2e", worst) + " rad over " + std::to_string(steps) + " finger states";
  return o;
}

Outcome determinism() {
  int files = 0;
  int mismatches = 0;
  std::size_t svgs = 0;
  std::vector<fs::path> paths;
  for (const auto& e : fs::directory_iterator(RGRIP_FIXTURE_DIR)) {
    if (e.path().extension() == ".scn") paths.push_back(e.path());
  }
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) {
    const Scenario s = parse_scenario(read(p));
    const std::string name = p.stem().string();
    const auto once = [&] {
      const GraspReport r = run_commands(s.config(), s.object(), s.commands);
      return std::make_pair(report_json(r, s.config(), s.object(), name), svg_frames(r, s.config(), s.object(), name));
    };
    const auto a = once();
    const auto b = once();
    ++files;
    svgs += a.second.size();
    if (a != b) ++mismatches;
  }
  Outcome o;
  o.pass = files >= 6 && mismatches == 0;
  o.detail = std::to_string(files) + " fixtures run twice, " + std::to_string(svgs) + " SVG frames each pass, " +
             std::to_string(mismatches) + " differences";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 oracle equivalence", oracle_equivalence},
      {"2 sign-correction regression", sign_correction},
      {"3 retraction capacity", retraction_capacity},
      {"4 mode ranges", mode_ranges},
      {"5 self-lock model check", self_lock},
      {"6 contact-length trends", table_iv_trends},
      {"7 parallel-mode perpendicularity", perpendicularity},
      {"8 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    if (!o.pass) ++failed;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
