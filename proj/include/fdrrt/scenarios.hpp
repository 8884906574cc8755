#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fdrrt/geometry.hpp"
#include "fdrrt/kcprm.hpp"

namespace fdrrt {

struct RobotTask {
  RobotProfile profile;
  Configuration q_init;
  Configuration q_goal;
  std::vector<Configuration> via_points;

  bool operator==(const RobotTask&) const = default;
};

struct Scenario {
  std::string name;
  std::vector<Obstacle> obstacles;
  std::vector<RobotTask> robots;
  SamplingParams sampling;
  std::uint64_t seed = 0;
};

bool operator==(const Scenario& a, const Scenario& b);

class ScenarioError : public std::runtime_error {
 public:
  enum class Code { capacity_exceeded, invalid };

  ScenarioError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// Throws ScenarioError{invalid} if a start or goal footprint touches an
/// obstacle, two start footprints touch, or two goal footprints touch.
void validate(const Scenario& scenario);

/// Four-way junction with `lanes` incoming and outgoing lanes per arm and
/// chamfered corner blocks. Inner lanes turn left, middle lanes go straight,
/// outer lanes turn right (right-hand traffic).
struct IntersectionOptions {
  double arm_length = 30.0;
  double lane_width = 3.5;
  int lanes = 3;
  double corner_chamfer = 6.0;
  double right_turn_radius = 8.0;
  double start_offset = 14.0;  // distance from the junction box edge
  double goal_offset = 14.0;
  double offset_jitter = 3.0;  // uniform +- along the lane, per robot
  RobotProfile vehicle = default_vehicle();
  /// Explicit (approach, lane) slots; drawn from the seed when empty.
  std::vector<std::pair<int, int>> slots;

  static RobotProfile default_vehicle();
};

Scenario make_intersection(int robot_count, std::uint64_t seed,
                           const IntersectionOptions& options = {});

/// Rectangular hall with a grid of shelves; robots drive in right-hand lanes
/// along aisles, some turning once at an aisle crossing. A turn is pinned by two
/// via points on the entry and exit lanes, one sharpest-turn tangent length
/// either side of the point where the lanes meet.
struct WarehouseOptions {
  double hall_length = 20.0;
  double hall_width = 15.0;
  int shelf_columns = 4;
  int shelf_rows = 3;
  double aisle_width = 2.5;
  /// Right-hand lane distance from the aisle centerline. Lanes far enough apart
  /// for two robots make aisles two-way; otherwise head-on pairs are not drawn.
  double lane_offset = 0.625;
  RobotProfile robot = default_robot();

  static RobotProfile default_robot();
};

Scenario make_warehouse(int robot_count, std::uint64_t seed, const WarehouseOptions& options = {});

/// Obstacle-free square field. Robots start on the perimeter and cross to the
/// opposite side.
struct UavFieldOptions {
  enum class Pattern { opposite_edges, antipodal };

  double side = 20.0;
  Pattern pattern = Pattern::opposite_edges;
  RobotProfile drone = default_drone();

  static RobotProfile default_drone();
};

Scenario make_uav_field(int robot_count, std::uint64_t seed, const UavFieldOptions& options = {});

/// Generator by name: "intersection", "warehouse" or "uav".
Scenario make_scenario(std::string_view generator, int robot_count, std::uint64_t seed);

/// Seed used for robot `index`'s roadmap in a scenario.
std::uint64_t roadmap_seed(std::uint64_t scenario_seed, std::size_t index);

/// One roadmap per robot. Throws RoadmapError naming the failing robot.
std::vector<LocalRoadmap> build_roadmaps(const Scenario& scenario, const BuildOptions& options = {});

}  // namespace fdrrt
