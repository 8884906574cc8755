#pragma once

#include <limits>
#include <optional>

#include "fdrrt/geometry.hpp"
#include "fdrrt/local_path.hpp"

namespace fdrrt {

/// Forward-only continuous-curvature steering.
///
/// Paths have the shape  ramp - turn - line - turn - ramp.  The ramps are
/// clothoids taking the start curvature down to zero and zero up to the goal
/// curvature. Each turn is either clothoid-arc-clothoid at full curvature, or a
/// pair of clothoids peaking below kappa_max when the deflection is small.
/// Curvature never exceeds kappa_max and changes at exactly +-sigma_max inside
/// clothoids, so the result is continuous in curvature by construction.
///
/// The family is not complete (no turn-turn-turn words); an empty optional means
/// no member of the family joins the two states, not that none exists.
std::optional<LocalPath> steer(const Configuration& from, const Configuration& to,
                               const RobotProfile& profile,
                               double max_length = std::numeric_limits<double>::infinity());

/// Length <= r and the target lies strictly in front of the source heading.
bool is_reachable(const Configuration& from, const Configuration& to, const LocalPath& path,
                  double r);

/// The parts of is_reachable that do not need a path: straight-line distance
/// bound and the half-plane test. Used to skip hopeless steering attempts.
bool may_be_reachable(const Configuration& from, const Configuration& to, double r);

/// Closure tolerances a steered path is held to.
inline constexpr double kClosurePosition = 1e-8;
inline constexpr double kClosureAngle = 1e-9;

}  // namespace fdrrt
