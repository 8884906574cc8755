#include "fdrrt/collision.hpp"

#include <stdexcept>

namespace fdrrt {

double default_step(const RobotProfile& profile) {
  return std::min(0.1, 0.5 * min_dimension(profile.footprint));
}

double sampling_margin(const RobotProfile& profile, double step) {
  return 0.5 * step * (1.0 + profile.kappa_max * circumradius(profile.footprint));
}

bool configuration_in_collision(const RobotProfile& profile, const Configuration& q,
                                std::span<const Obstacle> obstacles, double margin) {
  const OrientedShape shape = footprint_at(profile, q, margin);
  const Aabb box = bounds(shape);
  for (const Obstacle& obstacle : obstacles) {
    if (box.overlaps(bounds(obstacle)) && shape_hits_obstacle(shape, obstacle)) return true;
  }
  return false;
}

bool path_in_collision(const RobotProfile& profile, const LocalPath& path,
                       std::span<const Obstacle> obstacles, double step_ds, double margin) {
  if (!(step_ds > 0.0)) throw std::invalid_argument("step_ds must be positive");
  if (obstacles.empty()) return false;

  std::vector<Aabb> obstacle_bounds;
  obstacle_bounds.reserve(obstacles.size());
  for (const Obstacle& o : obstacles) obstacle_bounds.push_back(bounds(o));

  // Every path point lies within half the path length of the chord midpoint.
  const double reach = circumradius(profile.footprint) + margin;
  const Vec2d grow = Vec2d::Constant(reach + 0.5 * path.total_length);
  const Vec2d mid = 0.5 * (path.start.position() + path.end.position());
  const Aabb corridor{mid - grow, mid + grow};
  std::vector<std::size_t> nearby;
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    if (corridor.overlaps(obstacle_bounds[i])) nearby.push_back(i);
  }
  if (nearby.empty()) return false;

  for (const Configuration& q : sample_path(path, step_ds)) {
    const OrientedShape shape = footprint_at(profile, q, margin);
    const Aabb box = bounds(shape);
    for (std::size_t i : nearby) {
      if (box.overlaps(obstacle_bounds[i]) && shape_hits_obstacle(shape, obstacles[i])) return true;
    }
  }
  return false;
}

}  // namespace fdrrt
