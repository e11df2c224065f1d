#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "rgrip/mechanism.hpp"

using namespace rgrip;

namespace {

// Lengths from a construction independent of the quadratic: the free joint
// lies on the horizontal line y = h, so it is where the coupler circle about
// the fixed joint meets its own mirror image across that line.
std::vector<double> oracle_lengths(PlanarPoint fixed, double coupler, double h, double offset_x) {
  const PlanarPoint mirror{fixed.x, 2.0 * h - fixed.y};
  std::vector<double> out;
  if (std::abs(fixed.y - h) < 1e-9) return out;
  const auto hit = circle_intersect(fixed, coupler, mirror, coupler);
  for (const auto& p : hit.points) out.push_back(-p.x - offset_x);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("proximal quadratic coefficients at a reference pose") {
  LinkageGeometry g;
  const double t1 = deg_to_rad(30.0);
  const double alpha = deg_to_rad(60.0);
  const auto r = solve_proximal_retraction(g, t1, g.beta - alpha);
  CHECK(r.b == doctest::Approx(-91.2436).epsilon(1e-5));
  CHECK(r.c == doctest::Approx(1262.69).epsilon(1e-5));
  CHECK(r.root_lo == doctest::Approx(17.01).epsilon(1e-3));
  CHECK(r.root_hi == doctest::Approx(74.23).epsilon(1e-3));
}

TEST_CASE("printed constant term has no real roots where the loop closes") {
  LinkageGeometry g;
  const double t1 = deg_to_rad(30.0);
  const double alpha = deg_to_rad(60.0);
  const auto r = solve_proximal_retraction(g, t1, g.beta - alpha);
  const double c_printed = printed_proximal_constant(g, t1, alpha);
  CHECK(r.b * r.b - 4.0 * c_printed < 0.0);
}

TEST_CASE("roots close the loop and match the circle oracle") {
  LinkageGeometry g;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> t1d(deg_to_rad(-10.0), deg_to_rad(80.0));
  std::uniform_real_distribution<double> ad(deg_to_rad(0.0), deg_to_rad(150.0));
  int compared = 0;
  for (int i = 0; i < 2000; ++i) {
    const double t1 = t1d(rng);
    const double alpha = ad(rng);
    QuadraticRoots r;
    try {
      r = solve_proximal_retraction(g, t1, g.beta - alpha);
    } catch (const InfeasibleConfiguration&) {
      const PlanarPoint oa{-g.L1a * std::cos(t1), g.L1a * std::sin(t1)};
      CHECK(std::abs(oa.y - g.L1c * std::sin(alpha)) > g.L1b - 1e-9);
      continue;
    }
    for (double L : {r.root_lo, r.root_hi}) {
      CHECK(proximal_closure_residual(g, t1, alpha, L) == doctest::Approx(0.0).epsilon(1e-9).scale(1e4));
    }
    const PlanarPoint oa{-g.L1a * std::cos(t1), g.L1a * std::sin(t1)};
    const auto ref = oracle_lengths(oa, g.L1b, g.L1c * std::sin(alpha), g.L1c * std::cos(alpha));
    if (ref.size() == 2) {
      CHECK(r.root_lo == doctest::Approx(ref[0]).epsilon(1e-6).scale(100));
      CHECK(r.root_hi == doctest::Approx(ref[1]).epsilon(1e-6).scale(100));
      ++compared;
    }
  }
  CHECK(compared > 500);
}

TEST_CASE("middle loop matches the circle oracle") {
  LinkageGeometry g;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> t3d(0.0, deg_to_rad(90.0));
  int compared = 0;
  for (int i = 0; i < 1000; ++i) {
    const double t3 = t3d(rng);
    const double delta = g.kappa - t3;
    const auto r = solve_middle_retraction(g, t3, g.beta);
    for (double L : {r.root_lo, r.root_hi}) {
      CHECK(middle_closure_residual(g, delta, g.beta, L) == doctest::Approx(0.0).epsilon(1e-9).scale(1e4));
    }
    const PlanarPoint fixed{-g.L2a * std::cos(g.beta), g.L2a * std::sin(g.beta)};
    const auto ref = oracle_lengths(fixed, g.L2b, g.L2c * std::sin(delta), g.L2c * std::cos(delta));
    if (ref.size() == 2) {
      CHECK(r.root_lo == doctest::Approx(ref[0]).epsilon(1e-6).scale(100));
      CHECK(r.root_hi == doctest::Approx(ref[1]).epsilon(1e-6).scale(100));
      ++compared;
    }
  }
  CHECK(compared > 500);
}

TEST_CASE("middle quadratic at delta = 0") {
  LinkageGeometry g;
  g.L2c = 20.0;
  g.kappa = 0.0;
  const auto r = solve_middle_retraction(g, 0.0, g.beta);
  CHECK(r.b == doctest::Approx(40.0));
  CHECK(r.c == doctest::Approx(-4476.0));
  CHECK(r.root_lo == doctest::Approx(-89.833).epsilon(1e-4));
  CHECK(r.root_hi == doctest::Approx(49.833).epsilon(1e-4));
}

TEST_CASE("tangency clamp and infeasibility") {
  CHECK(solve_monic_quadratic(2.0, 1.0 + 1e-10, "t").discriminant == 0.0);
  CHECK_THROWS_AS(solve_monic_quadratic(2.0, 1.0 + 1e-6, "t"), InfeasibleConfiguration);
  const auto r = solve_monic_quadratic(-1e8, 1.0, "t");
  CHECK(r.root_lo == doctest::Approx(1e-8).epsilon(1e-12));
}

TEST_CASE("select_root") {
  CHECK(select_root({-3.0, 5.0, 1, 0, 0}, 100.0) == 5.0);
  CHECK(select_root({10.0, 60.0, 1, 0, 0}, 55.0) == 60.0);
  CHECK(select_root({10.0, 60.0, 1, 0, 0}, 20.0) == 10.0);
  CHECK(select_root({10.0, 30.0, 1, 0, 0}, 20.0) == 10.0);
  CHECK_THROWS_AS(select_root({-3.0, -1.0, 1, 0, 0}, 1.0), NonPhysicalConfiguration);
}

TEST_CASE("geometry validation") {
  LinkageGeometry g;
  CHECK_NOTHROW(g.validate());
  g.L2b = -1.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = LinkageGeometry{};
  g.beta = 1.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}
