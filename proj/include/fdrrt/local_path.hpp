#pragma once

#include <vector>

#include "fdrrt/geometry.hpp"

namespace fdrrt {

enum class SegmentKind { line, arc, clothoid };

/// One piece of a forward path. Curvature along the piece is
/// kappa0 + sigma * s for s in [0, length]; lines and arcs have sigma = 0.
struct Segment {
  SegmentKind kind = SegmentKind::line;
  double kappa0 = 0.0;
  double sigma = 0.0;
  double length = 0.0;

  static Segment line(double length) { return {SegmentKind::line, 0.0, 0.0, length}; }
  static Segment arc(double kappa, double length) { return {SegmentKind::arc, kappa, 0.0, length}; }
  static Segment clothoid(double kappa0, double sigma, double length) {
    return {SegmentKind::clothoid, kappa0, sigma, length};
  }

  double end_kappa() const { return kappa0 + sigma * length; }
  double heading_change(double s) const { return kappa0 * s + 0.5 * sigma * s * s; }

  bool operator==(const Segment&) const = default;
};

/// Moves `q` forward by arc length `ds` along `seg` (0 <= ds <= seg.length).
/// Line and arc pieces are closed form; clothoids use composite Gauss-Legendre
/// quadrature accurate to rounding.
Configuration advance(const Configuration& q, const Segment& seg, double ds);

/// Forward-only, curvature-continuous path with arc-length parameterization.
struct LocalPath {
  Configuration start;
  Configuration end;
  std::vector<Segment> segments;
  double total_length = 0.0;

  /// Configuration at arc length s, clamped to [0, total_length]. The endpoints
  /// return `start` and `end` exactly.
  Configuration at(double s) const;

  bool operator==(const LocalPath&) const = default;
};

/// Samples at arc lengths 0, ds, 2ds, ... plus the endpoint.
std::vector<Configuration> sample_path(const LocalPath& path, double ds);

/// Joins paths end to start; throws std::invalid_argument if they do not meet.
LocalPath concatenate(const std::vector<LocalPath>& pieces);

}  // namespace fdrrt
