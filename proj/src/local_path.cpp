#include "fdrrt/local_path.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace fdrrt {

namespace {

constexpr int kQuadratureOrder = 10;
// Largest heading variation integrated by one quadrature panel.
constexpr double kPanelPhase = 1.0;

struct GaussLegendre {
  std::array<double, kQuadratureOrder> nodes{};    // on [0, 1]
  std::array<double, kQuadratureOrder> weights{};  // sum to 1

  GaussLegendre() {
    constexpr int n = kQuadratureOrder;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = 0.5 * (1.0 - x);
      weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

const GaussLegendre& quadrature() {
  static const GaussLegendre rule;
  return rule;
}

// Displacement of the clothoid theta(t) = theta0 + k0 t + sigma t^2 / 2 over [0, ds].
Vec2d clothoid_displacement(double theta0, double k0, double sigma, double ds) {
  const double variation = std::abs(k0) * ds + 0.5 * std::abs(sigma) * ds * ds;
  const int panels = std::max(1, static_cast<int>(std::ceil(variation / kPanelPhase)));
  const double h = ds / panels;
  const auto& rule = quadrature();
  Vec2d sum = Vec2d::Zero();
  for (int p = 0; p < panels; ++p) {
    const double t0 = p * h;
    Vec2d panel = Vec2d::Zero();
    for (int i = 0; i < kQuadratureOrder; ++i) {
      const double t = t0 + rule.nodes[i] * h;
      const double phase = theta0 + k0 * t + 0.5 * sigma * t * t;
      panel += rule.weights[i] * Vec2d(std::cos(phase), std::sin(phase));
    }
    sum += panel * h;
  }
  return sum;
}

// sin(x)/x, stable near zero.
double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

Configuration advance(const Configuration& q, const Segment& seg, double ds) {
  Vec2d delta;
  if (seg.sigma == 0.0) {
    // Chord of a circular arc (degenerates to a line for kappa0 = 0).
    const double half_turn = 0.5 * seg.kappa0 * ds;
    const double chord = ds * sinc(half_turn);
    const double dir = q.theta + half_turn;
    delta = chord * Vec2d(std::cos(dir), std::sin(dir));
  } else {
    delta = clothoid_displacement(q.theta, seg.kappa0, seg.sigma, ds);
  }
  Configuration out;
  out.x = q.x + delta.x();
  out.y = q.y + delta.y();
  out.theta = normalize_angle(q.theta + seg.heading_change(ds));
  out.kappa = seg.kappa0 + seg.sigma * ds;
  return out;
}

Configuration LocalPath::at(double s) const {
  if (s <= 0.0) return start;
  if (s >= total_length) return end;
  Configuration q = start;
  double offset = 0.0;
  for (const Segment& seg : segments) {
    if (s <= offset + seg.length) return advance(q, seg, s - offset);
    q = advance(q, seg, seg.length);
    offset += seg.length;
  }
  return end;
}

std::vector<Configuration> sample_path(const LocalPath& path, double ds) {
  if (!(ds > 0.0)) throw std::invalid_argument("sample spacing must be positive");
  std::vector<Configuration> out;
  out.push_back(path.start);
  if (path.total_length <= 0.0) {
    if (!(path.end == path.start)) out.push_back(path.end);
    return out;
  }
  const auto count = static_cast<std::size_t>(std::floor(path.total_length / ds));
  out.reserve(count + 2);
  std::size_t seg_index = 0;
  double seg_offset = 0.0;
  Configuration seg_start = path.start;
  for (std::size_t k = 1; k <= count; ++k) {
    const double s = static_cast<double>(k) * ds;
    if (s >= path.total_length) break;
    while (seg_index + 1 < path.segments.size() &&
           s > seg_offset + path.segments[seg_index].length) {
      seg_start = advance(seg_start, path.segments[seg_index], path.segments[seg_index].length);
      seg_offset += path.segments[seg_index].length;
      ++seg_index;
    }
    const Segment& seg = path.segments[seg_index];
    out.push_back(advance(seg_start, seg, std::min(s - seg_offset, seg.length)));
  }
  out.push_back(path.end);
  return out;
}

LocalPath concatenate(const std::vector<LocalPath>& pieces) {
  if (pieces.empty()) throw std::invalid_argument("nothing to concatenate");
  LocalPath out;
  out.start = pieces.front().start;
  out.end = pieces.back().end;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (i > 0 && !(pieces[i].start == pieces[i - 1].end))
      throw std::invalid_argument("paths do not meet");
    out.segments.insert(out.segments.end(), pieces[i].segments.begin(), pieces[i].segments.end());
    out.total_length += pieces[i].total_length;
  }
  return out;
}

}  // namespace fdrrt
