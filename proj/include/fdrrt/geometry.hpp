#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

namespace fdrrt {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

using Vec2d = Vec2<double>;

/// Wraps an angle into [-pi, pi).
template <typename Scalar>
Scalar normalize_angle(Scalar a) {
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  a = std::fmod(a + std::numbers::pi_v<Scalar>, two_pi);
  if (a < Scalar(0)) a += two_pi;
  a -= std::numbers::pi_v<Scalar>;
  // fmod can land exactly on +pi after the shift back
  if (a >= std::numbers::pi_v<Scalar>) a -= two_pi;
  return a;
}

/// Planar robot state: position, heading and signed curvature.
struct Configuration {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double kappa = 0.0;

  Vec2d position() const { return {x, y}; }
  Vec2d heading() const { return {std::cos(theta), std::sin(theta)}; }

  bool operator==(const Configuration&) const = default;
};

struct RectangleFootprint {
  double length = 0.0;
  double width = 0.0;
  bool operator==(const RectangleFootprint&) const = default;
};

struct DiskFootprint {
  double radius = 0.0;
  bool operator==(const DiskFootprint&) const = default;
};

using Footprint = std::variant<RectangleFootprint, DiskFootprint>;

/// Radius of the smallest disk about the reference point containing the footprint.
double circumradius(const Footprint& footprint);

/// Smallest footprint dimension (width for rectangles, diameter for disks).
double min_dimension(const Footprint& footprint);

struct RobotProfile {
  std::string id;
  Footprint footprint = DiskFootprint{0.5};
  double kappa_max = 1.0;          // 1/m
  double sigma_max = 1.0;          // 1/m^2, curvature rate bound
  double connection_radius = 10.0; // m
  int roadmap_size = 30;

  bool operator==(const RobotProfile&) const = default;
};

/// Throws std::invalid_argument when a profile violates its invariants.
void validate(const RobotProfile& profile);

template <typename Scalar>
struct OrientedBox {
  Vec2<Scalar> center = Vec2<Scalar>::Zero();
  Vec2<Scalar> axis = Vec2<Scalar>::UnitX();  // unit vector along the length
  Scalar half_length = 0;
  Scalar half_width = 0;

  Vec2<Scalar> normal() const { return {-axis.y(), axis.x()}; }

  std::array<Vec2<Scalar>, 4> corners() const {
    const Vec2<Scalar> u = axis * half_length;
    const Vec2<Scalar> v = normal() * half_width;
    return {center - u - v, center + u - v, center + u + v, center - u + v};
  }
};

template <typename Scalar>
struct Disk {
  Vec2<Scalar> center = Vec2<Scalar>::Zero();
  Scalar radius = 0;
};

/// Strictly convex polygon, counter-clockwise winding.
template <typename Scalar>
struct ConvexPolygon {
  std::vector<Vec2<Scalar>> vertices;
};

using OrientedShape = std::variant<OrientedBox<double>, Disk<double>>;
using Obstacle = std::variant<ConvexPolygon<double>, Disk<double>>;

/// Builds a polygon obstacle, throwing std::invalid_argument unless the vertices
/// form a strictly convex counter-clockwise polygon.
ConvexPolygon<double> make_polygon(std::vector<Vec2d> vertices);

/// Axis-aligned rectangle obstacle [x0,x1]x[y0,y1].
ConvexPolygon<double> make_rectangle(double x0, double y0, double x1, double y1);

/// Footprint at pose q, grown by `margin` on every side (a rectangle grows to the
/// enclosing box of its Minkowski sum with a disk of radius `margin`).
OrientedShape footprint_at(const RobotProfile& profile, const Configuration& q,
                           double margin = 0.0);

bool shapes_intersect(const OrientedShape& a, const OrientedShape& b);
bool shape_hits_obstacle(const OrientedShape& shape, const Obstacle& obstacle);

/// Axis-aligned bounds as (min, max) corners.
struct Aabb {
  Vec2d lo = Vec2d::Constant(std::numeric_limits<double>::infinity());
  Vec2d hi = Vec2d::Constant(-std::numeric_limits<double>::infinity());

  void extend(const Aabb& o) {
    lo = lo.cwiseMin(o.lo);
    hi = hi.cwiseMax(o.hi);
  }
  bool overlaps(const Aabb& o) const {
    return lo.x() <= o.hi.x() && o.lo.x() <= hi.x() && lo.y() <= o.hi.y() && o.lo.y() <= hi.y();
  }
};

Aabb bounds(const OrientedShape& shape);
Aabb bounds(const Obstacle& obstacle);

// ---------------------------------------------------------------------------
// Scalar-generic primitives. Closed shapes: touching counts as intersecting.

namespace detail {

template <typename Scalar>
Scalar cross(const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// Projection half-extent of a box onto a unit axis.
template <typename Scalar>
Scalar project_radius(const OrientedBox<Scalar>& box, const Vec2<Scalar>& axis) {
  return box.half_length * std::abs(box.axis.dot(axis)) +
         box.half_width * std::abs(box.normal().dot(axis));
}

template <typename Scalar>
bool separated_on_axis(const OrientedBox<Scalar>& a, const OrientedBox<Scalar>& b,
                       const Vec2<Scalar>& axis) {
  const Scalar distance = std::abs((b.center - a.center).dot(axis));
  return distance > project_radius(a, axis) + project_radius(b, axis);
}

template <typename Scalar>
Vec2<Scalar> closest_point_on_segment(const Vec2<Scalar>& p, const Vec2<Scalar>& a,
                                      const Vec2<Scalar>& b) {
  const Vec2<Scalar> ab = b - a;
  const Scalar len2 = ab.squaredNorm();
  if (len2 <= Scalar(0)) return a;
  const Scalar t = std::clamp((p - a).dot(ab) / len2, Scalar(0), Scalar(1));
  return a + t * ab;
}

}  // namespace detail

template <typename Scalar>
bool intersects(const Disk<Scalar>& a, const Disk<Scalar>& b) {
  const Scalar r = a.radius + b.radius;
  return (a.center - b.center).squaredNorm() <= r * r;
}

template <typename Scalar>
bool intersects(const OrientedBox<Scalar>& a, const OrientedBox<Scalar>& b) {
  for (const Vec2<Scalar>& axis : {a.axis, a.normal(), b.axis, b.normal()}) {
    if (detail::separated_on_axis(a, b, axis)) return false;
  }
  return true;
}

template <typename Scalar>
bool intersects(const OrientedBox<Scalar>& box, const Disk<Scalar>& disk) {
  const Vec2<Scalar> d = disk.center - box.center;
  const Scalar u = std::clamp(d.dot(box.axis), -box.half_length, box.half_length);
  const Scalar v = std::clamp(d.dot(box.normal()), -box.half_width, box.half_width);
  const Vec2<Scalar> closest = box.center + u * box.axis + v * box.normal();
  return (disk.center - closest).squaredNorm() <= disk.radius * disk.radius;
}

template <typename Scalar>
bool intersects(const Disk<Scalar>& disk, const OrientedBox<Scalar>& box) {
  return intersects(box, disk);
}

template <typename Scalar>
bool contains(const ConvexPolygon<Scalar>& poly, const Vec2<Scalar>& p) {
  const std::size_t n = poly.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2<Scalar>& a = poly.vertices[i];
    const Vec2<Scalar>& b = poly.vertices[(i + 1) % n];
    if (detail::cross<Scalar>(b - a, p - a) < Scalar(0)) return false;
  }
  return true;
}

template <typename Scalar>
bool intersects(const ConvexPolygon<Scalar>& poly, const Disk<Scalar>& disk) {
  if (contains(poly, disk.center)) return true;
  const std::size_t n = poly.vertices.size();
  const Scalar r2 = disk.radius * disk.radius;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2<Scalar> c = detail::closest_point_on_segment(
        disk.center, poly.vertices[i], poly.vertices[(i + 1) % n]);
    if ((c - disk.center).squaredNorm() <= r2) return true;
  }
  return false;
}

template <typename Scalar>
bool intersects(const ConvexPolygon<Scalar>& poly, const OrientedBox<Scalar>& box) {
  const std::size_t n = poly.vertices.size();
  auto separated = [&](const Vec2<Scalar>& axis) {
    Scalar lo = std::numeric_limits<Scalar>::infinity();
    Scalar hi = -lo;
    for (const auto& v : poly.vertices) {
      const Scalar p = v.dot(axis);
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    const Scalar c = box.center.dot(axis);
    const Scalar r = detail::project_radius(box, axis);
    return c - r > hi || c + r < lo;
  };
  if (separated(box.axis) || separated(box.normal())) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2<Scalar> e = poly.vertices[(i + 1) % n] - poly.vertices[i];
    const Scalar len = e.norm();
    if (len <= Scalar(0)) continue;
    if (separated(Vec2<Scalar>(e.y() / len, -e.x() / len))) return false;
  }
  return true;
}

template <typename Scalar>
bool intersects(const Disk<Scalar>& disk, const ConvexPolygon<Scalar>& poly) {
  return intersects(poly, disk);
}

template <typename Scalar>
bool intersects(const OrientedBox<Scalar>& box, const ConvexPolygon<Scalar>& poly) {
  return intersects(poly, box);
}

}  // namespace fdrrt
