#pragma once

#include <span>

#include "fdrrt/geometry.hpp"
#include "fdrrt/local_path.hpp"

namespace fdrrt {

/// Default sampling step for swept-footprint checks: 0.1 m, never more than
/// half the smallest footprint dimension.
double default_step(const RobotProfile& profile);

/// Growth that makes a check sampled every `step` metres of arc conservative:
/// between samples a footprint point drifts at most step/2 * (1 + kappa_max * R)
/// where R is the footprint circumradius.
double sampling_margin(const RobotProfile& profile, double step);

/// True iff the footprint (grown by `margin`) at any path sample spaced at most
/// `step_ds` apart, endpoints included, touches an obstacle.
bool path_in_collision(const RobotProfile& profile, const LocalPath& path,
                       std::span<const Obstacle> obstacles, double step_ds, double margin = 0.0);

/// Footprint at a single configuration against obstacles.
bool configuration_in_collision(const RobotProfile& profile, const Configuration& q,
                                std::span<const Obstacle> obstacles, double margin = 0.0);

}  // namespace fdrrt
