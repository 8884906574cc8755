#include "fdrrt/geometry.hpp"

#include <stdexcept>

#include "overloaded.hpp"

namespace fdrrt {

using detail::overloaded;

double circumradius(const Footprint& footprint) {
  return std::visit(overloaded{
                        [](const RectangleFootprint& r) { return 0.5 * std::hypot(r.length, r.width); },
                        [](const DiskFootprint& d) { return d.radius; },
                    },
                    footprint);
}

double min_dimension(const Footprint& footprint) {
  return std::visit(overloaded{
                        [](const RectangleFootprint& r) { return std::min(r.length, r.width); },
                        [](const DiskFootprint& d) { return 2.0 * d.radius; },
                    },
                    footprint);
}

void validate(const RobotProfile& profile) {
  const bool footprint_ok = std::visit(
      overloaded{
          [](const RectangleFootprint& r) { return r.length > 0.0 && r.width > 0.0; },
          [](const DiskFootprint& d) { return d.radius > 0.0; },
      },
      profile.footprint);
  if (!footprint_ok) throw std::invalid_argument("footprint dimensions must be positive");
  if (!(profile.kappa_max > 0.0)) throw std::invalid_argument("kappa_max must be positive");
  if (!(profile.sigma_max > 0.0)) throw std::invalid_argument("sigma_max must be positive");
  if (!(profile.connection_radius > 0.0))
    throw std::invalid_argument("connection_radius must be positive");
  if (profile.roadmap_size < 2) throw std::invalid_argument("roadmap_size must be at least 2");
}

ConvexPolygon<double> make_polygon(std::vector<Vec2d> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2d& a = vertices[i];
    const Vec2d& b = vertices[(i + 1) % n];
    const Vec2d& c = vertices[(i + 2) % n];
    if (!(detail::cross<double>(b - a, c - b) > 0.0))
      throw std::invalid_argument("polygon must be strictly convex and counter-clockwise");
  }
  // Total turning of exactly 2*pi rules out star-shaped self-intersections.
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2d e0 = vertices[(i + 1) % n] - vertices[i];
    const Vec2d e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    turning += std::atan2(detail::cross<double>(e0, e1), e0.dot(e1));
  }
  if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6)
    throw std::invalid_argument("polygon winds more than once");
  return ConvexPolygon<double>{std::move(vertices)};
}

ConvexPolygon<double> make_rectangle(double x0, double y0, double x1, double y1) {
  return make_polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

OrientedShape footprint_at(const RobotProfile& profile, const Configuration& q, double margin) {
  return std::visit(overloaded{
                        [&](const RectangleFootprint& r) -> OrientedShape {
                          OrientedBox<double> box;
                          box.center = q.position();
                          box.axis = q.heading();
                          box.half_length = 0.5 * r.length + margin;
                          box.half_width = 0.5 * r.width + margin;
                          return box;
                        },
                        [&](const DiskFootprint& d) -> OrientedShape {
                          return Disk<double>{q.position(), d.radius + margin};
                        },
                    },
                    profile.footprint);
}

bool shapes_intersect(const OrientedShape& a, const OrientedShape& b) {
  return std::visit([](const auto& lhs, const auto& rhs) { return intersects(lhs, rhs); }, a, b);
}

bool shape_hits_obstacle(const OrientedShape& shape, const Obstacle& obstacle) {
  return std::visit([](const auto& lhs, const auto& rhs) { return intersects(lhs, rhs); }, shape,
                    obstacle);
}

Aabb bounds(const OrientedShape& shape) {
  return std::visit(overloaded{
                        [](const OrientedBox<double>& box) {
                          const Vec2d extent(detail::project_radius(box, Vec2d(Vec2d::UnitX())),
                                             detail::project_radius(box, Vec2d(Vec2d::UnitY())));
                          return Aabb{box.center - extent, box.center + extent};
                        },
                        [](const Disk<double>& d) {
                          const Vec2d r = Vec2d::Constant(d.radius);
                          return Aabb{d.center - r, d.center + r};
                        },
                    },
                    shape);
}

Aabb bounds(const Obstacle& obstacle) {
  return std::visit(overloaded{
                        [](const ConvexPolygon<double>& p) {
                          Aabb box;
                          for (const auto& v : p.vertices) box.extend(Aabb{v, v});
                          return box;
                        },
                        [](const Disk<double>& d) {
                          const Vec2d r = Vec2d::Constant(d.radius);
                          return Aabb{d.center - r, d.center + r};
                        },
                    },
                    obstacle);
}

}  // namespace fdrrt
