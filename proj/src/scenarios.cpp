#include "fdrrt/scenarios.hpp"

#include <algorithm>
#include <random>

#include "fdrrt/collision.hpp"
#include "overloaded.hpp"

namespace fdrrt {

namespace {

constexpr double kPi = std::numbers::pi;

Vec2d rotate(const Vec2d& v, double angle) {
  return Eigen::Rotation2D<double>(angle) * v;
}

Configuration rotate(const Configuration& q, double angle) {
  const Vec2d p = rotate(q.position(), angle);
  return {p.x(), p.y(), normalize_angle(q.theta + angle), q.kappa};
}

// Distance from the crossing of entry and exit centerlines to either end of the
// sharpest continuous-curvature quarter turn.
double quarter_turn_reach(const RobotProfile& p) {
  const double delta = kPi / 2;
  const double k = p.kappa_max;
  const double sigma = p.sigma_max;
  std::vector<Segment> turn;
  if (delta >= k * k / sigma) {
    turn = {Segment::clothoid(0.0, sigma, k / sigma), Segment::arc(k, (delta - k * k / sigma) / k),
            Segment::clothoid(k, -sigma, k / sigma)};
  } else {
    const double peak = std::sqrt(delta * sigma);
    turn = {Segment::clothoid(0.0, sigma, peak / sigma), Segment::clothoid(peak, -sigma, peak / sigma)};
  }
  Configuration q{0.0, 0.0, 0.0, 0.0};
  for (const Segment& seg : turn) q = advance(q, seg, seg.length);
  return q.x;
}

bool same_obstacle(const Obstacle& a, const Obstacle& b) {
  if (a.index() != b.index()) return false;
  return std::visit(detail::overloaded{
                        [&](const ConvexPolygon<double>& p) {
                          return p.vertices == std::get<ConvexPolygon<double>>(b).vertices;
                        },
                        [&](const Disk<double>& d) {
                          const auto& e = std::get<Disk<double>>(b);
                          return d.center == e.center && d.radius == e.radius;
                        },
                    },
                    a);
}

void check_count(int robot_count, int capacity, std::string_view name) {
  if (robot_count < 1 || robot_count > capacity)
    throw ScenarioError(ScenarioError::Code::capacity_exceeded,
                        std::string(name) + " holds 1.." + std::to_string(capacity) + " robots, got " +
                            std::to_string(robot_count));
}

}  // namespace

bool operator==(const Scenario& a, const Scenario& b) {
  if (a.name != b.name || a.robots != b.robots || a.sampling != b.sampling || a.seed != b.seed ||
      a.obstacles.size() != b.obstacles.size())
    return false;
  for (std::size_t i = 0; i < a.obstacles.size(); ++i) {
    if (!same_obstacle(a.obstacles[i], b.obstacles[i])) return false;
  }
  return true;
}

void validate(const Scenario& scenario) {
  const auto& robots = scenario.robots;
  for (std::size_t i = 0; i < robots.size(); ++i) {
    validate(robots[i].profile);
    if (configuration_in_collision(robots[i].profile, robots[i].q_init, scenario.obstacles))
      throw ScenarioError(ScenarioError::Code::invalid,
                          "robot " + std::to_string(i) + " starts inside an obstacle");
    if (configuration_in_collision(robots[i].profile, robots[i].q_goal, scenario.obstacles))
      throw ScenarioError(ScenarioError::Code::invalid,
                          "robot " + std::to_string(i) + " ends inside an obstacle");
    for (std::size_t j = 0; j < i; ++j) {
      if (shapes_intersect(footprint_at(robots[i].profile, robots[i].q_init),
                           footprint_at(robots[j].profile, robots[j].q_init)))
        throw ScenarioError(ScenarioError::Code::invalid, "robots " + std::to_string(j) + " and " +
                                                              std::to_string(i) + " start overlapping");
      if (shapes_intersect(footprint_at(robots[i].profile, robots[i].q_goal),
                           footprint_at(robots[j].profile, robots[j].q_goal)))
        throw ScenarioError(ScenarioError::Code::invalid, "robots " + std::to_string(j) + " and " +
                                                              std::to_string(i) + " end overlapping");
    }
  }
  validate(scenario.sampling);
}

// ---------------------------------------------------------------------------
// Intersection

RobotProfile IntersectionOptions::default_vehicle() {
  RobotProfile p;
  p.id = "vehicle";
  p.footprint = RectangleFootprint{3.6, 1.6};
  p.kappa_max = 0.2;
  p.sigma_max = 0.15;
  p.connection_radius = 15.0;
  p.roadmap_size = 40;
  return p;
}

Scenario make_intersection(int robot_count, std::uint64_t seed, const IntersectionOptions& o) {
  const int capacity = 4 * o.lanes;
  check_count(robot_count, capacity, "intersection");
  if (o.lanes < 1 || o.lane_width <= 0.0) throw ScenarioError(ScenarioError::Code::invalid, "bad lanes");

  Scenario s;
  s.name = "intersection";
  s.seed = seed;
  std::mt19937_64 rng(seed);

  const double w = o.lanes * o.lane_width;  // half road width
  const double far = w + o.arm_length;
  const double c = o.corner_chamfer;
  for (int a = 0; a < 4; ++a) {
    // North-east block, rotated into each quadrant.
    std::vector<Vec2d> block{{w + c, w}, {far, w}, {far, far}, {w, far}, {w, w + c}};
    for (auto& v : block) v = rotate(v, a * kPi / 2);
    s.obstacles.push_back(make_polygon(std::move(block)));
  }

  std::vector<std::pair<int, int>> slots = o.slots;
  if (slots.empty()) {
    for (int a = 0; a < 4; ++a)
      for (int lane = 0; lane < o.lanes; ++lane) slots.emplace_back(a, lane);
    std::shuffle(slots.begin(), slots.end(), rng);
    slots.resize(robot_count);
  } else if (static_cast<int>(slots.size()) != robot_count) {
    throw ScenarioError(ScenarioError::Code::invalid, "slot list does not match robot count");
  }

  std::uniform_real_distribution<double> jitter(-o.offset_jitter, o.offset_jitter);
  for (const auto& [approach, lane] : slots) {
    if (approach < 0 || approach > 3 || lane < 0 || lane >= o.lanes)
      throw ScenarioError(ScenarioError::Code::invalid, "bad slot");
    // Built for the northbound approach, then rotated.
    const double lane_x = (lane + 0.5) * o.lane_width;
    const double start_y = -(w + o.start_offset + jitter(rng));
    const double goal_d = w + o.goal_offset + jitter(rng);
    RobotTask task;
    task.profile = o.vehicle;
    task.profile.id = o.vehicle.id + "-" + std::to_string(s.robots.size());
    task.q_init = {lane_x, start_y, kPi / 2, 0.0};

    const bool left = (lane == 0 && o.lanes > 1);
    const bool right = (lane == o.lanes - 1 && o.lanes > 2);
    if (left) {
      // Quarter circle about the south-west box corner into the inner westbound lane.
      const double radius = w + lane_x;
      const Vec2d center(-w, -w);
      const Vec2d mid = center + radius * Vec2d(std::cos(kPi / 4), std::sin(kPi / 4));
      task.via_points.push_back({mid.x(), mid.y(), 3 * kPi / 4, 1.0 / radius});
      task.q_goal = {-goal_d, lane_x, normalize_angle(kPi), 0.0};
    } else if (right) {
      const double radius = o.right_turn_radius;
      const Vec2d center(lane_x + radius, -lane_x - radius);
      const Vec2d mid = center + radius * Vec2d(-std::cos(kPi / 4), std::sin(kPi / 4));
      task.via_points.push_back({mid.x(), mid.y(), kPi / 4, -1.0 / radius});
      task.q_goal = {goal_d, -lane_x, 0.0, 0.0};
    } else {
      task.q_goal = {lane_x, goal_d, kPi / 2, 0.0};
    }

    const double angle = approach * kPi / 2;
    task.q_init = rotate(task.q_init, angle);
    task.q_goal = rotate(task.q_goal, angle);
    for (auto& v : task.via_points) v = rotate(v, angle);
    s.robots.push_back(std::move(task));
  }
  validate(s);
  return s;
}

// ---------------------------------------------------------------------------
// Warehouse

RobotProfile WarehouseOptions::default_robot() {
  RobotProfile p;
  p.id = "agv";
  p.footprint = DiskFootprint{0.4};
  p.kappa_max = 1.0;
  p.sigma_max = 2.0;
  p.connection_radius = 5.0;
  p.roadmap_size = 40;
  return p;
}

Scenario make_warehouse(int robot_count, std::uint64_t seed, const WarehouseOptions& o) {
  check_count(robot_count, 10, "warehouse");
  const double radius = std::get<DiskFootprint>(o.robot.footprint).radius;
  const double a = o.aisle_width;
  if (a < 2.0 * radius + 0.4)
    throw ScenarioError(ScenarioError::Code::invalid, "aisles narrower than one robot plus clearance");
  if (o.lane_offset < 0.0 || 0.5 * a - o.lane_offset < radius + 0.1)
    throw ScenarioError(ScenarioError::Code::invalid, "lane offset leaves no clearance to the shelves");
  // Two lanes let oncoming robots pass.
  const bool two_way = 2.0 * o.lane_offset >= 2.0 * radius + 0.2;
  const int cols = o.shelf_columns;
  const int rows = o.shelf_rows;
  const double shelf_w = (o.hall_length - (cols + 1) * a) / cols;
  const double shelf_h = (o.hall_width - (rows + 1) * a) / rows;
  if (cols < 1 || rows < 1 || shelf_w <= 0.0 || shelf_h <= 0.0)
    throw ScenarioError(ScenarioError::Code::invalid, "shelves do not fit in the hall");

  Scenario s;
  s.name = "warehouse";
  s.seed = seed;
  const double L = o.hall_length;
  const double H = o.hall_width;
  const double t = 0.5;  // wall thickness
  s.obstacles.push_back(make_rectangle(-t, -t, L + t, 0.0));
  s.obstacles.push_back(make_rectangle(-t, H, L + t, H + t));
  s.obstacles.push_back(make_rectangle(-t, 0.0, 0.0, H));
  s.obstacles.push_back(make_rectangle(L, 0.0, L + t, H));
  for (int cx = 0; cx < cols; ++cx)
    for (int cy = 0; cy < rows; ++cy) {
      const double x0 = a + cx * (shelf_w + a);
      const double y0 = a + cy * (shelf_h + a);
      s.obstacles.push_back(make_rectangle(x0, y0, x0 + shelf_w, y0 + shelf_h));
    }

  auto column_x = [&](int v) { return 0.5 * a + v * (shelf_w + a); };
  auto row_y = [&](int h) { return 0.5 * a + h * (shelf_h + a); };
  // Aisle endpoints sit in the first shelf-length stretch from each end.
  const double x_lo = a + 0.5 * shelf_w;
  const double x_hi = L - a - 0.5 * shelf_w;
  const double y_lo = a + 0.5 * shelf_h;
  const double y_hi = H - a - 0.5 * shelf_h;

  struct Route {
    Configuration start;
    Configuration goal;
    std::vector<Configuration> via;
    // (aisle, forward) per aisle driven; horizontal aisles 0..rows, vertical
    // aisles offset by 100.
    std::vector<std::pair<int, bool>> aisles;
  };
  // Right-hand lanes: a robot heading `th` keeps `lane` to the right of the
  // aisle centerline.
  const double lane = o.lane_offset;
  auto right_of = [&](double th) { return Vec2d(std::sin(th), -std::cos(th)); };
  auto on_lane = [&](double x, double y, double th) {
    const Vec2d p = Vec2d(x, y) + lane * right_of(th);
    return Configuration{p.x(), p.y(), th, 0.0};
  };
  std::vector<Route> routes;
  for (int h = 0; h <= rows; ++h) {
    const double y = row_y(h);
    routes.push_back({on_lane(x_lo, y, 0.0), on_lane(x_hi, y, 0.0), {}, {{h, true}}});
    routes.push_back({on_lane(x_hi, y, -kPi), on_lane(x_lo, y, -kPi), {}, {{h, false}}});
  }
  for (int v = 0; v <= cols; ++v) {
    const double x = column_x(v);
    routes.push_back({on_lane(x, y_lo, kPi / 2), on_lane(x, y_hi, kPi / 2), {}, {{100 + v, true}}});
    routes.push_back({on_lane(x, y_hi, -kPi / 2), on_lane(x, y_lo, -kPi / 2), {}, {{100 + v, false}}});
  }
  const double reach = quarter_turn_reach(o.robot);
  const double min_leg = 1.0;  // straight run kept outside the turn's via points
  for (int h = 0; h <= rows; ++h) {
    for (int v = 1; v < cols; ++v) {
      const Vec2d crossing(column_x(v), row_y(h));
      if (crossing.x() - x_lo <= reach + lane + min_leg || x_hi - crossing.x() <= reach + lane + min_leg) continue;
      for (const bool east : {true, false}) {
        const double heading = east ? 0.0 : -kPi;
        const Configuration start = on_lane(east ? x_lo : x_hi, crossing.y(), heading);
        for (const bool north : {true, false}) {
          if (north && h == rows) continue;
          if (!north && h == 0) continue;
          const double exit = north ? kPi / 2 : -kPi / 2;
          const Configuration goal = on_lane(crossing.x(), north ? y_hi : y_lo, exit);
          if (std::abs(goal.y - crossing.y()) <= reach + lane + min_leg) continue;
          // Corner where the entry lane meets the exit lane.
          const Vec2d corner = crossing + lane * (right_of(heading) + right_of(exit));
          const Vec2d in = corner - reach * Vec2d(std::cos(heading), std::sin(heading));
          const Vec2d out = corner + reach * Vec2d(std::cos(exit), std::sin(exit));
          routes.push_back({start, goal, {{in.x(), in.y(), heading, 0.0}, {out.x(), out.y(), exit, 0.0}},
                            {{h, east}, {100 + v, north}}});
        }
      }
    }
  }

  std::mt19937_64 rng(seed);
  auto clash = [&](const Configuration& p, const Configuration& q) {
    return (p.position() - q.position()).norm() < 2.0 * radius + 0.2;
  };
  auto head_on = [](const Route& p, const Route& q) {
    for (const auto& [ap, fp] : p.aisles)
      for (const auto& [aq, fq] : q.aisles)
        if (ap == aq && fp != fq) return true;
    return false;
  };
  std::vector<const Route*> chosen;
  for (int attempt = 0; attempt < 10000 && static_cast<int>(chosen.size()) < robot_count; ++attempt) {
    const Route& r = routes[std::uniform_int_distribution<std::size_t>(0, routes.size() - 1)(rng)];
    bool ok = true;
    for (const Route* c : chosen) {
      // Distinct starts, distinct goals, nobody parks on another robot's
      // start, and no head-on pairs in a single-lane aisle.
      if (clash(c->start, r.start) || clash(c->goal, r.goal) || clash(c->goal, r.start) ||
          clash(c->start, r.goal) || (!two_way && head_on(*c, r))) {
        ok = false;
        break;
      }
    }
    if (ok) chosen.push_back(&r);
  }
  if (static_cast<int>(chosen.size()) < robot_count)
    throw ScenarioError(ScenarioError::Code::capacity_exceeded, "could not place all warehouse robots");

  for (const Route* r : chosen) {
    RobotTask task;
    task.profile = o.robot;
    task.profile.id = o.robot.id + "-" + std::to_string(s.robots.size());
    task.q_init = r->start;
    task.q_goal = r->goal;
    task.via_points = r->via;
    task.q_init.theta = normalize_angle(task.q_init.theta);
    task.q_goal.theta = normalize_angle(task.q_goal.theta);
    s.robots.push_back(std::move(task));
  }
  validate(s);
  return s;
}

// ---------------------------------------------------------------------------
// UAV field

RobotProfile UavFieldOptions::default_drone() {
  RobotProfile p;
  p.id = "uav";
  p.footprint = DiskFootprint{0.2};
  p.kappa_max = 2.0;
  p.sigma_max = 8.0;
  p.connection_radius = 7.0;
  p.roadmap_size = 30;
  return p;
}

Scenario make_uav_field(int robot_count, std::uint64_t seed, const UavFieldOptions& o) {
  check_count(robot_count, 12, "uav field");
  Scenario s;
  s.name = "uav";
  s.seed = seed;
  std::mt19937_64 rng(seed);
  const double side = o.side;
  const double inset = 1.0;
  const double radius = std::get<DiskFootprint>(o.drone.footprint).radius;
  const double spacing = 2.0 * radius + 0.6;

  std::vector<std::pair<Vec2d, Vec2d>> legs;
  if (o.pattern == UavFieldOptions::Pattern::antipodal) {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi / robot_count);
    const double offset = phase(rng);
    const Vec2d center(0.5 * side, 0.5 * side);
    const double ring = 0.5 * side - inset;
    for (int i = 0; i < robot_count; ++i) {
      // Half-turn spread keeps antipodal goals off everyone's start.
      const double ang = offset + kPi * i / robot_count;
      const Vec2d u(std::cos(ang), std::sin(ang));
      legs.emplace_back(center + ring * u, center - ring * u);
    }
  } else {
    std::uniform_int_distribution<int> edge(0, 3);
    std::uniform_real_distribution<double> along(2.0, side - 2.0);
    auto point_on = [&](int e, double t) -> Vec2d {
      switch (e) {
        case 0: return {t, inset};
        case 1: return {side - inset, t};
        case 2: return {t, side - inset};
        default: return {inset, t};
      }
    };
    for (int attempt = 0; attempt < 10000 && static_cast<int>(legs.size()) < robot_count; ++attempt) {
      const int e = edge(rng);
      const Vec2d start = point_on(e, along(rng));
      const Vec2d goal = point_on((e + 2) % 4, along(rng));
      bool ok = true;
      for (const auto& [ps, pg] : legs) {
        for (const Vec2d& p : {ps, pg})
          for (const Vec2d& q : {start, goal})
            if ((p - q).norm() < spacing) ok = false;
      }
      if (ok) legs.emplace_back(start, goal);
    }
    if (static_cast<int>(legs.size()) < robot_count)
      throw ScenarioError(ScenarioError::Code::capacity_exceeded, "could not place all drones");
  }

  for (const auto& [start, goal] : legs) {
    const Vec2d d = goal - start;
    const double heading = normalize_angle(std::atan2(d.y(), d.x()));
    RobotTask task;
    task.profile = o.drone;
    task.profile.id = o.drone.id + "-" + std::to_string(s.robots.size());
    task.q_init = {start.x(), start.y(), heading, 0.0};
    task.q_goal = {goal.x(), goal.y(), heading, 0.0};
    s.robots.push_back(std::move(task));
  }
  validate(s);
  return s;
}

Scenario make_scenario(std::string_view generator, int robot_count, std::uint64_t seed) {
  if (generator == "intersection") return make_intersection(robot_count, seed);
  if (generator == "warehouse") return make_warehouse(robot_count, seed);
  if (generator == "uav") return make_uav_field(robot_count, seed);
  throw ScenarioError(ScenarioError::Code::invalid, "unknown generator: " + std::string(generator));
}

std::uint64_t roadmap_seed(std::uint64_t scenario_seed, std::size_t index) {
  // splitmix64 finalizer over (seed, index)
  std::uint64_t z = scenario_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<LocalRoadmap> build_roadmaps(const Scenario& scenario, const BuildOptions& options) {
  std::vector<LocalRoadmap> out;
  out.reserve(scenario.robots.size());
  for (std::size_t i = 0; i < scenario.robots.size(); ++i) {
    const RobotTask& task = scenario.robots[i];
    SamplingParams params = scenario.sampling;
    params.rng_seed = roadmap_seed(scenario.seed ^ scenario.sampling.rng_seed, i);
    try {
      out.push_back(build_roadmap(task.q_init, task.q_goal, task.profile, scenario.obstacles, params,
                                  task.via_points, options));
    } catch (const RoadmapError& e) {
      throw RoadmapError(e.code(), "robot " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace fdrrt
