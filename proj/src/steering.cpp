#include "fdrrt/steering.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace fdrrt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Turns are limited to one full revolution each.
constexpr double kMaxDeflection = kTwoPi;
constexpr double kTableStep = 0.004;
constexpr double kScanStep = 0.02;

Vec2d rotate(const Vec2d& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

double cross(const Vec2d& a, const Vec2d& b) { return a.x() * b.y() - a.y() * b.x(); }

double sign(double v) { return v < 0.0 ? -1.0 : 1.0; }

/// Symmetric continuous-curvature turn of signed deflection delta, starting and
/// ending at zero curvature. Displacements are in the frame of the start heading.
class TurnModel {
 public:
  TurnModel(double kappa_max, double sigma)
      : kappa_max_(kappa_max),
        sigma_(sigma),
        delta_min_(kappa_max * kappa_max / sigma),
        ramp_length_(kappa_max / sigma) {
    full_ramp_ = displacement_of(Segment::clothoid(0.0, sigma_, ramp_length_));
    const int half = static_cast<int>(std::ceil(kMaxDeflection / kTableStep));
    table_.reserve(2 * half + 1);
    for (int i = -half; i <= half; ++i) table_.push_back(displacement(i * kTableStep));
    table_half_ = half;
  }

  Vec2d displacement(double delta) const {
    if (delta == 0.0) return Vec2d::Zero();
    const double s = sign(delta);
    const double a = std::abs(delta);
    Vec2d ramp;
    Vec2d middle = Vec2d::Zero();
    if (a >= delta_min_) {
      ramp = full_ramp_;
      const double arc_length = (a - delta_min_) / kappa_max_;
      const Configuration arc_start{0.0, 0.0, s * 0.5 * delta_min_, 0.0};
      const Configuration arc_end = advance(arc_start, Segment::arc(s * kappa_max_, arc_length), arc_length);
      middle = arc_end.position();
    } else {
      const double l = std::sqrt(a / sigma_);
      ramp = displacement_of(Segment::clothoid(0.0, sigma_, l));
    }
    // The exit clothoid is the entry clothoid mirrored and rotated by delta.
    const Vec2d entry(ramp.x(), s * ramp.y());
    const Vec2d exit = rotate(Vec2d(ramp.x(), -s * ramp.y()), delta);
    return entry + middle + exit;
  }

  Vec2d approx(double delta) const {
    const double u = delta / kTableStep + table_half_;
    const int i = std::clamp(static_cast<int>(std::floor(u)), 0, 2 * table_half_ - 1);
    const double t = u - i;
    return (1.0 - t) * table_[i] + t * table_[i + 1];
  }

  double length(double delta) const {
    const double a = std::abs(delta);
    if (a >= delta_min_) return 2.0 * ramp_length_ + (a - delta_min_) / kappa_max_;
    return 2.0 * std::sqrt(a / sigma_);
  }

  void append_segments(double delta, std::vector<Segment>& out) const {
    if (delta == 0.0) return;
    const double s = sign(delta);
    const double a = std::abs(delta);
    if (a >= delta_min_) {
      out.push_back(Segment::clothoid(0.0, s * sigma_, ramp_length_));
      const double arc_length = (a - delta_min_) / kappa_max_;
      if (arc_length > 0.0) out.push_back(Segment::arc(s * kappa_max_, arc_length));
      out.push_back(Segment::clothoid(s * kappa_max_, -s * sigma_, ramp_length_));
    } else {
      const double l = std::sqrt(a / sigma_);
      out.push_back(Segment::clothoid(0.0, s * sigma_, l));
      out.push_back(Segment::clothoid(s * sigma_ * l, -s * sigma_, l));
    }
  }

 private:
  static Vec2d displacement_of(const Segment& seg) {
    return advance(Configuration{}, seg, seg.length).position();
  }

  double kappa_max_;
  double sigma_;
  double delta_min_;
  double ramp_length_;
  Vec2d full_ramp_;
  std::vector<Vec2d> table_;
  int table_half_ = 0;
};

const TurnModel& turn_model(double kappa_max, double sigma) {
  static std::mutex mutex;
  static std::map<std::pair<double, double>, std::unique_ptr<TurnModel>> cache;
  const std::lock_guard lock(mutex);
  auto& slot = cache[{kappa_max, sigma}];
  if (!slot) slot = std::make_unique<TurnModel>(kappa_max, sigma);
  return *slot;
}

struct TurnLineTurn {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double line = 0.0;
  double length = 0.0;
};

struct Bracket {
  double lo;
  double hi;
  double total;
  double estimate;
};

/// All turn-line-turn words joining two zero-curvature states with length at
/// most `budget`, shortest first.
std::vector<TurnLineTurn> solve_turn_line_turn(const TurnModel& model, double kappa_max,
                                               const Configuration& qa, const Configuration& qb,
                                               double budget) {
  const Vec2d d = rotate(qb.position() - qa.position(), -qa.theta);
  double heading = std::fmod(qb.theta - qa.theta, kTwoPi);
  if (heading < 0.0) heading += kTwoPi;

  // Perpendicular closure error with the first turn fixed; `line` receives the
  // along-track distance still to cover.
  auto residual = [&](double d1, double total, bool exact, double* line) {
    const double d2 = total - d1;
    const Vec2d p1 = exact ? model.displacement(d1) : model.approx(d1);
    const Vec2d p2 = exact ? model.displacement(d2) : model.approx(d2);
    const Vec2d r = d - p1 - rotate(p2, d1);
    const Vec2d u(std::cos(d1), std::sin(d1));
    if (line) *line = u.dot(r);
    return cross(u, r);
  };

  std::vector<TurnLineTurn> found;
  auto accept = [&](double d1, double total, double line) {
    if (line < -1e-9) return;
    line = std::max(line, 0.0);
    const double d2 = total - d1;
    TurnLineTurn w{d1, d2, line, model.length(d1) + line + model.length(d2)};
    if (w.length <= budget) found.push_back(w);
  };

  // Any turn of deflection a is at least a / kappa_max long.
  const double angle_budget = kappa_max * budget;
  std::vector<Bracket> brackets;
  for (int k = -2; k <= 1; ++k) {
    const double total = heading + k * kTwoPi;
    if (std::abs(total) > angle_budget) continue;
    const double slack = 0.5 * (angle_budget - std::abs(total));
    double lo = std::max(-kMaxDeflection, total - kMaxDeflection);
    double hi = std::min(kMaxDeflection, total + kMaxDeflection);
    lo = std::max(lo, std::min(0.0, total) - slack);
    hi = std::min(hi, std::max(0.0, total) + slack);
    if (lo > hi) continue;

    // Single-turn and straight words sit exactly on these points.
    for (double d1 : {0.0, total}) {
      if (d1 < lo || d1 > hi) continue;
      double line = 0.0;
      if (std::abs(residual(d1, total, true, &line)) <= 1e-12) accept(d1, total, line);
    }
    if (hi - lo <= 0.0) continue;

    const int n = std::max(2, static_cast<int>(std::ceil((hi - lo) / kScanStep)));
    const double step = (hi - lo) / n;
    double prev = residual(lo, total, false, nullptr);
    for (int i = 1; i <= n; ++i) {
      const double x = (i == n) ? hi : lo + i * step;
      const double cur = residual(x, total, false, nullptr);
      if ((prev < 0.0) != (cur < 0.0)) {
        const double mid = x - 0.5 * step;
        double line = 0.0;
        residual(mid, total, false, &line);
        const double estimate = model.length(mid) + std::max(line, 0.0) + model.length(total - mid);
        if (line > -0.5 && estimate <= budget + 1.0)
          brackets.push_back({x - step, x, total, estimate});
      }
      prev = cur;
    }
  }

  std::sort(brackets.begin(), brackets.end(),
            [](const Bracket& a, const Bracket& b) { return a.estimate < b.estimate; });

  double best = std::numeric_limits<double>::infinity();
  for (const TurnLineTurn& w : found) best = std::min(best, w.length);

  for (const Bracket& br : brackets) {
    if (br.estimate > best + 1.0) break;
    double a = br.lo;
    double b = br.hi;
    double fa = residual(a, br.total, true, nullptr);
    double fb = residual(b, br.total, true, nullptr);
    if ((fa < 0.0) == (fb < 0.0) && fa != 0.0 && fb != 0.0) continue;
    // Illinois variant of regula falsi.
    double root = std::abs(fa) < std::abs(fb) ? a : b;
    int side = 0;
    for (int iter = 0; iter < 200; ++iter) {
      const double c = (fa * b - fb * a) / (fa - fb);
      const double fc = residual(c, br.total, true, nullptr);
      root = c;
      if (std::abs(fc) <= 1e-13 || std::abs(b - a) <= 1e-15) break;
      if ((fc < 0.0) == (fb < 0.0)) {
        b = c;
        fb = fc;
        if (side == -1) fa *= 0.5;
        side = -1;
      } else {
        a = c;
        fa = fc;
        if (side == +1) fb *= 0.5;
        side = +1;
      }
    }
    double line = 0.0;
    residual(root, br.total, true, &line);
    const std::size_t before = found.size();
    accept(root, br.total, line);
    if (found.size() > before) best = std::min(best, found.back().length);
  }

  std::sort(found.begin(), found.end(),
            [](const TurnLineTurn& a, const TurnLineTurn& b) { return a.length < b.length; });
  return found;
}

// Clothoid taking curvature `from` to zero at the steepest allowed rate.
Segment ramp_down(double from, double sigma) {
  return Segment::clothoid(from, -sign(from) * sigma, std::abs(from) / sigma);
}

Segment ramp_up(double to, double sigma) {
  return Segment::clothoid(0.0, sign(to) * sigma, std::abs(to) / sigma);
}

bool closes(const Configuration& reached, const Configuration& target) {
  return std::hypot(reached.x - target.x, reached.y - target.y) <= kClosurePosition &&
         std::abs(normalize_angle(reached.theta - target.theta)) <= kClosureAngle &&
         std::abs(reached.kappa - target.kappa) <= 1e-9;
}

}  // namespace

std::optional<LocalPath> steer(const Configuration& from, const Configuration& to,
                               const RobotProfile& profile, double max_length) {
  if (from == to) return LocalPath{from, to, {}, 0.0};
  const double kappa_max = profile.kappa_max;
  const double sigma = profile.sigma_max;
  if (std::abs(from.kappa) > kappa_max * (1.0 + 1e-12) ||
      std::abs(to.kappa) > kappa_max * (1.0 + 1e-12))
    return std::nullopt;

  std::vector<Segment> head;
  Configuration qa = from;
  if (from.kappa != 0.0) {
    head.push_back(ramp_down(from.kappa, sigma));
    qa = advance(from, head.back(), head.back().length);
    qa.kappa = 0.0;
  }

  std::vector<Segment> tail;
  Configuration qb = to;
  if (to.kappa != 0.0) {
    const Segment ramp = ramp_up(to.kappa, sigma);
    tail.push_back(ramp);
    const double start_heading = to.theta - ramp.heading_change(ramp.length);
    const Vec2d offset = advance(Configuration{0.0, 0.0, start_heading, 0.0}, ramp, ramp.length).position();
    qb = Configuration{to.x - offset.x(), to.y - offset.y(), normalize_angle(start_heading), 0.0};
  }

  double ramps = 0.0;
  for (const Segment& s : head) ramps += s.length;
  for (const Segment& s : tail) ramps += s.length;
  const double budget = max_length - ramps;
  if (budget < (qb.position() - qa.position()).norm()) return std::nullopt;

  const TurnModel& model = turn_model(kappa_max, sigma);
  for (const TurnLineTurn& word : solve_turn_line_turn(model, kappa_max, qa, qb, budget)) {
    LocalPath path;
    path.start = from;
    path.end = to;
    path.segments = head;
    model.append_segments(word.delta1, path.segments);
    if (word.line > 0.0) path.segments.push_back(Segment::line(word.line));
    model.append_segments(word.delta2, path.segments);
    path.segments.insert(path.segments.end(), tail.begin(), tail.end());

    Configuration reached = from;
    path.total_length = 0.0;
    for (const Segment& seg : path.segments) {
      reached = advance(reached, seg, seg.length);
      path.total_length += seg.length;
    }
    if (path.total_length > max_length) continue;
    if (closes(reached, to)) return path;
  }
  return std::nullopt;
}

bool may_be_reachable(const Configuration& from, const Configuration& to, double r) {
  const Vec2d d = to.position() - from.position();
  const double dist = d.norm();
  if (dist <= 0.0 || dist > r) return false;
  return (d / dist).dot(from.heading()) > 0.0;
}

bool is_reachable(const Configuration& from, const Configuration& to, const LocalPath& path,
                  double r) {
  return path.total_length <= r && may_be_reachable(from, to, r);
}

}  // namespace fdrrt
