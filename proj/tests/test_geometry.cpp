#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "rgrip/geometry.hpp"

using namespace rgrip;

TEST_CASE("circle_intersect two points lie on both circles") {
  const PlanarPoint c1{0.0, 0.0}, c2{3.0, 1.0};
  const auto hit = circle_intersect(c1, 2.5, c2, 1.8);
  REQUIRE(hit.points.size() == 2);
  for (const auto& p : hit.points) {
    CHECK(distance(p, c1) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(distance(p, c2) == doctest::Approx(1.8).epsilon(1e-12));
  }
}

TEST_CASE("circle_intersect degenerate cases") {
  CHECK(circle_intersect({0, 0}, 1.0, {5, 0}, 1.0).points.empty());
  CHECK(circle_intersect({0, 0}, 5.0, {1, 0}, 1.0).points.empty());
  const auto tangent = circle_intersect({0, 0}, 1.0, {2, 0}, 1.0);
  REQUIRE(tangent.points.size() == 1);
  CHECK(tangent.points[0].x == doctest::Approx(1.0));
  CHECK(circle_intersect({1, 1}, 2.0, {1, 1}, 2.0).coincident);
  CHECK_FALSE(circle_intersect({1, 1}, 2.0, {1, 1}, 3.0).coincident);
  CHECK_THROWS_AS(circle_intersect({0, 0}, 0.0, {1, 0}, 1.0), std::invalid_argument);
}

TEST_CASE("segment distances") {
  const Segment s{{0, 0}, {10, 0}};
  CHECK(distance(s, PlanarPoint{5, 3}) == doctest::Approx(3.0));
  CHECK(distance(s, PlanarPoint{-4, 3}) == doctest::Approx(5.0));
  CHECK(distance(s, Segment{{2, 2}, {2, 5}}) == doctest::Approx(2.0));
  CHECK(intersects(s, Segment{{5, -1}, {5, 1}}));
  CHECK(distance(s, Segment{{5, -1}, {5, 1}}) == 0.0);
  CHECK_FALSE(intersects(s, Segment{{11, -1}, {11, 1}}));
}

TEST_CASE("rotate and angles") {
  const auto v = rotate({1, 0}, kPi / 2.0);
  CHECK(v.x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(v.y == doctest::Approx(1.0));
  CHECK(angle_between({1, 0}, {0, 2}) == doctest::Approx(kPi / 2.0));
  CHECK(rad_to_deg(deg_to_rad(37.0)) == doctest::Approx(37.0));
}
