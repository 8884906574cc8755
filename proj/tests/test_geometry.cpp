#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fdrrt/collision.hpp"
#include "fdrrt/geometry.hpp"
#include "fdrrt/steering.hpp"

using namespace fdrrt;

namespace {

RobotProfile car() {
  RobotProfile p;
  p.id = "car";
  p.footprint = RectangleFootprint{3.6, 1.6};
  p.kappa_max = 0.2;
  p.sigma_max = 0.15;
  return p;
}

RobotProfile disk_robot(double r) {
  RobotProfile p;
  p.id = "disk";
  p.footprint = DiskFootprint{r};
  p.kappa_max = 1.0;
  p.sigma_max = 2.0;
  return p;
}

LocalPath straight(Configuration from, double length) {
  LocalPath path;
  path.start = from;
  path.segments = {Segment::line(length)};
  path.end = advance(from, path.segments[0], length);
  path.total_length = length;
  return path;
}

OrientedShape random_shape(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-4.0, 4.0);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  std::uniform_real_distribution<double> dim(0.1, 3.0);
  if (rng() % 2 == 0) return Disk<double>{Vec2d(pos(rng), pos(rng)), dim(rng)};
  OrientedBox<double> b;
  b.center = Vec2d(pos(rng), pos(rng));
  const double a = ang(rng);
  b.axis = Vec2d(std::cos(a), std::sin(a));
  b.half_length = dim(rng);
  b.half_width = dim(rng);
  return b;
}

}  // namespace

TEST_CASE("normalize_angle maps into [-pi, pi)") {
  CHECK(normalize_angle(M_PI) == doctest::Approx(-M_PI));
  CHECK(normalize_angle(-M_PI) == doctest::Approx(-M_PI));
  CHECK(normalize_angle(3 * M_PI / 2) == doctest::Approx(-M_PI / 2));
  CHECK(normalize_angle(0.25) == 0.25);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> any(-100.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = normalize_angle(any(rng));
    CHECK(a >= -M_PI);
    CHECK(a < M_PI);
  }
}

TEST_CASE("footprint_at places and rotates footprints") {
  SUBCASE("identity pose") {
    auto box = std::get<OrientedBox<double>>(footprint_at(car(), {0, 0, 0, 0}));
    const Aabb b = bounds(OrientedShape{box});
    CHECK(b.lo.x() == doctest::Approx(-1.8));
    CHECK(b.hi.x() == doctest::Approx(1.8));
    CHECK(b.lo.y() == doctest::Approx(-0.8));
    CHECK(b.hi.y() == doctest::Approx(0.8));
  }
  SUBCASE("quarter turn") {
    const Aabb b = bounds(footprint_at(car(), {0, 0, M_PI / 2, 0}));
    CHECK(b.lo.x() == doctest::Approx(-0.8));
    CHECK(b.hi.x() == doctest::Approx(0.8));
    CHECK(b.lo.y() == doctest::Approx(-1.8));
    CHECK(b.hi.y() == doctest::Approx(1.8));
  }
  SUBCASE("disk ignores heading") {
    auto d = std::get<Disk<double>>(footprint_at(disk_robot(0.4), {2, 3, 1.2, 0}));
    CHECK(d.center == Vec2d(2, 3));
    CHECK(d.radius == 0.4);
  }
}

TEST_CASE("shapes_intersect examples") {
  const Disk<double> a{{0, 0}, 1.0};
  CHECK_FALSE(shapes_intersect(a, Disk<double>{{3, 0}, 1.0}));
  CHECK(shapes_intersect(a, Disk<double>{{2, 0}, 1.0}));  // tangent

  const auto b0 = footprint_at(car(), {0, 0, 0, 0});
  CHECK(shapes_intersect(b0, footprint_at(car(), {0, 1.5, 0, 0})));
  CHECK(shapes_intersect(b0, footprint_at(car(), {0, 1.6, 0, 0})));  // edge contact
  CHECK_FALSE(shapes_intersect(b0, footprint_at(car(), {0, 1.61, 0, 0})));
  // Rotated box whose corner just misses: SAT needs the rotated axes here.
  CHECK_FALSE(shapes_intersect(b0, footprint_at(car(), {3.6, 1.9, M_PI / 4, 0})));
}

TEST_CASE("shapes_intersect is symmetric") {
  std::mt19937_64 rng(42);
  int hits = 0;
  for (int i = 0; i < 5000; ++i) {
    const OrientedShape a = random_shape(rng);
    const OrientedShape b = random_shape(rng);
    const bool ab = shapes_intersect(a, b);
    CHECK(ab == shapes_intersect(b, a));
    hits += ab;
  }
  CHECK(hits > 500);
  CHECK(hits < 4500);
}

TEST_CASE("box intersection agrees with dense point sampling") {
  // Brute force: two boxes intersect iff some point of one lies in the other,
  // approximated by a fine grid over each box; near-contact pairs are skipped.
  std::mt19937_64 rng(7);
  auto inside = [](const OrientedBox<double>& b, const Vec2d& p) {
    const Vec2d d = p - b.center;
    return std::abs(d.dot(b.axis)) <= b.half_length && std::abs(d.dot(b.normal())) <= b.half_width;
  };
  auto grid_hit = [&](const OrientedBox<double>& a, const OrientedBox<double>& b) {
    const int n = 60;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        const Vec2d p = a.center + (2.0 * i / n - 1.0) * a.half_length * a.axis +
                        (2.0 * j / n - 1.0) * a.half_width * a.normal();
        if (inside(b, p)) return true;
      }
    return false;
  };
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    auto sa = random_shape(rng);
    auto sb = random_shape(rng);
    if (!std::holds_alternative<OrientedBox<double>>(sa) ||
        !std::holds_alternative<OrientedBox<double>>(sb))
      continue;
    const auto& a = std::get<OrientedBox<double>>(sa);
    const auto& b = std::get<OrientedBox<double>>(sb);
    OrientedBox<double> grown = a;
    grown.half_length += 0.1;
    grown.half_width += 0.1;
    OrientedBox<double> shrunk = a;
    shrunk.half_length = std::max(0.01, a.half_length - 0.1);
    shrunk.half_width = std::max(0.01, a.half_width - 0.1);
    // Only unambiguous pairs: grid verdict stable under +-0.1 growth.
    const bool g = grid_hit(grown, b) || grid_hit(b, grown);
    const bool s = grid_hit(shrunk, b) || grid_hit(b, shrunk);
    if (g != s) continue;
    CHECK(intersects(a, b) == s);
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("polygon validation") {
  CHECK_NOTHROW(make_polygon({{0, 0}, {1, 0}, {0, 1}}));
  CHECK_THROWS_AS(make_polygon({{0, 0}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(make_polygon({{0, 0}, {0, 1}, {1, 0}}), std::invalid_argument);  // clockwise
  CHECK_THROWS_AS(make_polygon({{0, 0}, {1, 0}, {2, 0}, {1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(make_polygon({{0, 0}, {2, 0}, {1, 1}, {2, 2}, {0, 2}}), std::invalid_argument);
}

TEST_CASE("polygon primitives") {
  const auto square = make_rectangle(0, 0, 2, 2);
  CHECK(intersects(square, Disk<double>{{1, 1}, 0.1}));      // contained
  CHECK(intersects(square, Disk<double>{{3, 1}, 1.0}));      // touching edge
  CHECK_FALSE(intersects(square, Disk<double>{{3, 3}, 1.0}));  // corner gap sqrt(2)-1
  const auto box = std::get<OrientedBox<double>>(footprint_at(car(), {-1.0, 1.0, 0, 0}));
  CHECK(intersects(square, box));
  const auto far_box = std::get<OrientedBox<double>>(footprint_at(car(), {-2.0, 1.0, 0, 0}));
  CHECK_FALSE(intersects(square, far_box));
}

TEST_CASE("path_in_collision examples") {
  const RobotProfile bot = disk_robot(0.2);
  SUBCASE("empty space") {
    CHECK_FALSE(path_in_collision(bot, straight({0, 0, 0, 0}, 5.0), {}, 0.1));
  }
  SUBCASE("polygon at the midpoint") {
    const std::vector<Obstacle> obstacles{make_rectangle(2.3, -0.5, 2.7, 0.5)};
    CHECK(path_in_collision(car(), straight({0, 0, 0, 0}, 5.0), obstacles, 0.1));
  }
  SUBCASE("grazing a point obstacle") {
    // Clearance 0.15 < 0.2 along x in [0.868, 1.132]; 0.05 spacing must land there.
    const std::vector<Obstacle> obstacles{Disk<double>{{1.0, 0.15}, 0.0}};
    CHECK(path_in_collision(bot, straight({0, 0, 0, 0}, 2.0), obstacles, 0.05));
    const std::vector<Obstacle> clear{Disk<double>{{1.0, 0.25}, 0.0}};
    CHECK_FALSE(path_in_collision(bot, straight({0, 0, 0, 0}, 2.0), clear, 0.05));
  }
  SUBCASE("endpoints are always sampled") {
    const std::vector<Obstacle> at_end{Disk<double>{{3.0, 0.0}, 0.05}};
    CHECK(path_in_collision(bot, straight({0, 0, 0, 0}, 2.8), at_end, 10.0));
  }
  CHECK_THROWS(path_in_collision(bot, straight({0, 0, 0, 0}, 1.0), {}, 0.0));
}

TEST_CASE("path_in_collision monotonicity") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pos(-5.0, 15.0);
  std::uniform_real_distribution<double> rad(0.05, 0.6);
  const RobotProfile bot = disk_robot(0.3);
  RobotProfile steerer = disk_robot(0.3);
  int positives = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_real_distribution<double> ang(-1.0, 1.0);
    const Configuration from{0, 0, 0, 0};
    const Configuration to{pos(rng) + 6.0, pos(rng) * 0.3, ang(rng), 0.0};
    auto path = steer(from, to, steerer);
    if (!path) continue;
    std::vector<Obstacle> obstacles;
    bool previous = false;
    for (int k = 0; k < 6; ++k) {
      obstacles.push_back(Disk<double>{{pos(rng), pos(rng) * 0.3}, rad(rng)});
      const bool now = path_in_collision(bot, *path, obstacles, 0.2);
      if (previous) CHECK(now);  // adding obstacles never clears a collision
      previous = now;
      // Halving the step never loses a collision.
      if (now) CHECK(path_in_collision(bot, *path, obstacles, 0.1));
    }
    positives += previous;
  }
  CHECK(positives > 10);
}

TEST_CASE("default step respects footprint size") {
  CHECK(default_step(car()) == doctest::Approx(0.1));
  CHECK(default_step(disk_robot(0.02)) == doctest::Approx(0.02));
}
