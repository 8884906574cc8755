#include "fdrrt/kcprm.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <random>

#include "fdrrt/collision.hpp"
#include "fdrrt/steering.hpp"

namespace fdrrt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDuplicateTolerance = 1e-6;

bool near_duplicate(const Configuration& a, const Configuration& b) {
  return std::abs(a.x - b.x) <= kDuplicateTolerance && std::abs(a.y - b.y) <= kDuplicateTolerance &&
         std::abs(normalize_angle(a.theta - b.theta)) <= kDuplicateTolerance &&
         std::abs(a.kappa - b.kappa) <= kDuplicateTolerance;
}

}  // namespace

void validate(const SamplingParams& params) {
  if (params.lateral_noise_sigma < 0.0 || params.heading_noise_sigma < 0.0 ||
      params.curvature_noise_sigma < 0.0)
    throw std::invalid_argument("sampling noise levels must be non-negative");
}

void LocalRoadmap::rebuild_adjacency() {
  out_edges.assign(vertices.size(), {});
  in_edges.assign(vertices.size(), {});
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    out_edges[edges[e].from].push_back(e);
    in_edges[edges[e].to].push_back(e);
  }
}

std::optional<int> LocalRoadmap::find_edge(int from, int to) const {
  for (int e : out_edges[from]) {
    if (edges[e].to == to) return e;
  }
  return std::nullopt;
}

LocalPath reference_path(const Configuration& q_init, const Configuration& q_goal,
                         const RobotProfile& profile, std::span<const Configuration> via_points,
                         std::span<const Obstacle> obstacles) {
  std::vector<Configuration> stops;
  stops.push_back(q_init);
  stops.insert(stops.end(), via_points.begin(), via_points.end());
  stops.push_back(q_goal);

  std::vector<LocalPath> legs;
  for (std::size_t i = 0; i + 1 < stops.size(); ++i) {
    // A spine leg never doubles back: its target must lie ahead of its start.
    const Vec2d ahead = stops[i + 1].position() - stops[i].position();
    if (ahead.dot(stops[i].heading()) <= 0.0)
      throw RoadmapError(RoadmapError::Code::no_reference_path,
                         "no reference path: leg " + std::to_string(i) + " target is behind");
    auto leg = steer(stops[i], stops[i + 1], profile);
    if (!leg) throw RoadmapError(RoadmapError::Code::no_reference_path, "no reference path: leg " +
                                                                            std::to_string(i) +
                                                                            " cannot be steered");
    legs.push_back(std::move(*leg));
  }
  LocalPath spine = concatenate(legs);
  if (path_in_collision(profile, spine, obstacles, default_step(profile)))
    throw RoadmapError(RoadmapError::Code::no_reference_path,
                       "no reference path: spine collides with obstacles");
  return spine;
}

Configuration random_config(const LocalPath& spine, const SamplingParams& params,
                            std::uint64_t draw_index, double kappa_max) {
  std::seed_seq seq{static_cast<std::uint32_t>(params.rng_seed),
                    static_cast<std::uint32_t>(params.rng_seed >> 32),
                    static_cast<std::uint32_t>(draw_index),
                    static_cast<std::uint32_t>(draw_index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> along(0.0, spine.total_length);
  auto noise = [&rng](double sigma) {
    if (sigma <= 0.0) return 0.0;
    return std::normal_distribution<double>(0.0, sigma)(rng);
  };

  Configuration q = spine.at(along(rng));
  const double lateral = noise(params.lateral_noise_sigma);
  const double heading = noise(params.heading_noise_sigma);
  const double curvature = noise(params.curvature_noise_sigma);
  q.x -= std::sin(q.theta) * lateral;
  q.y += std::cos(q.theta) * lateral;
  q.theta = normalize_angle(q.theta + heading);
  q.kappa = std::clamp(q.kappa + curvature, -kappa_max, kappa_max);
  return q;
}

std::vector<double> cost_to_goal(const LocalRoadmap& roadmap) {
  const int n = roadmap.size();
  std::vector<double> dist(n, kInf);
  if (roadmap.goal_vertex < 0 || roadmap.goal_vertex >= n) return dist;

  std::vector<std::vector<std::pair<int, double>>> reverse(n);
  for (const RoadmapEdge& e : roadmap.edges) reverse[e.to].emplace_back(e.from, e.length);

  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist[roadmap.goal_vertex] = 0.0;
  open.emplace(0.0, roadmap.goal_vertex);
  while (!open.empty()) {
    const auto [d, v] = open.top();
    open.pop();
    if (d > dist[v]) continue;
    for (const auto& [u, w] : reverse[v]) {
      const double candidate = d + w;
      if (candidate < dist[u]) {
        dist[u] = candidate;
        open.emplace(candidate, u);
      }
    }
  }
  return dist;
}

LocalRoadmap prune_dead_nodes(const LocalRoadmap& roadmap) {
  if (roadmap.heuristic.size() != roadmap.vertices.size())
    throw std::invalid_argument("heuristic not computed");
  if (roadmap.vertices.empty() || !std::isfinite(roadmap.heuristic[0]))
    throw RoadmapError(RoadmapError::Code::goal_unreachable, "start vertex cannot reach the goal");

  LocalRoadmap out = roadmap;
  out.vertices.clear();
  out.heuristic.clear();
  out.edges.clear();

  std::vector<int> remap(roadmap.vertices.size(), -1);
  for (std::size_t v = 0; v < roadmap.vertices.size(); ++v) {
    if (!std::isfinite(roadmap.heuristic[v])) continue;
    remap[v] = static_cast<int>(out.vertices.size());
    out.vertices.push_back(roadmap.vertices[v]);
    out.heuristic.push_back(roadmap.heuristic[v]);
  }
  for (const RoadmapEdge& e : roadmap.edges) {
    if (remap[e.from] < 0 || remap[e.to] < 0) continue;
    RoadmapEdge kept = e;
    kept.from = remap[e.from];
    kept.to = remap[e.to];
    out.edges.push_back(std::move(kept));
  }
  out.goal_vertex = remap[roadmap.goal_vertex];
  out.rebuild_adjacency();
  return out;
}

LocalRoadmap build_roadmap(const Configuration& q_init, const Configuration& q_goal,
                           const RobotProfile& profile, std::span<const Obstacle> obstacles,
                           const SamplingParams& params, std::span<const Configuration> via_points,
                           const BuildOptions& options) {
  validate(profile);
  validate(params);
  const LocalPath spine = reference_path(q_init, q_goal, profile, via_points, obstacles);

  LocalRoadmap roadmap;
  roadmap.profile = profile;
  roadmap.sampling = params;
  roadmap.collision_step = default_step(profile);
  roadmap.vertices = {q_init, q_goal};
  roadmap.goal_vertex = 1;

  const double r = profile.connection_radius;
  const double step = roadmap.collision_step;
  const double margin = sampling_margin(profile, step);

  auto connect = [&](const Configuration& a, const Configuration& b) -> std::optional<LocalPath> {
    if (!may_be_reachable(a, b, r)) return std::nullopt;
    auto path = steer(a, b, profile, r);
    if (!path || !is_reachable(a, b, *path, r)) return std::nullopt;
    if (path_in_collision(profile, *path, obstacles, step, margin)) return std::nullopt;
    return path;
  };

  if (auto p = connect(q_init, q_goal)) roadmap.edges.push_back({0, 1, p->total_length, *p});
  if (auto p = connect(q_goal, q_init)) roadmap.edges.push_back({1, 0, p->total_length, *p});

  const std::uint64_t max_draws =
      static_cast<std::uint64_t>(profile.roadmap_size) * std::max(1, options.draws_per_vertex);
  for (std::uint64_t draw = 0; roadmap.size() < profile.roadmap_size && draw < max_draws; ++draw) {
    const Configuration q = random_config(spine, params, draw, profile.kappa_max);
    if (std::any_of(roadmap.vertices.begin(), roadmap.vertices.end(),
                    [&](const Configuration& v) { return near_duplicate(v, q); }))
      continue;
    // Every edge samples its endpoints, so a colliding sample can never connect.
    if (configuration_in_collision(profile, q, obstacles, margin)) continue;

    const int index = roadmap.size();
    std::vector<RoadmapEdge> fresh;
    for (int v = 0; v < index; ++v) {
      if (auto p = connect(roadmap.vertices[v], q)) fresh.push_back({v, index, p->total_length, *p});
      if (auto p = connect(q, roadmap.vertices[v])) fresh.push_back({index, v, p->total_length, *p});
    }
    if (fresh.empty()) continue;
    roadmap.vertices.push_back(q);
    for (auto& e : fresh) roadmap.edges.push_back(std::move(e));
  }

  roadmap.rebuild_adjacency();
  roadmap.heuristic = cost_to_goal(roadmap);
  if (!std::isfinite(roadmap.heuristic[0]))
    throw RoadmapError(RoadmapError::Code::goal_unreachable,
                       "goal unreachable after " + std::to_string(roadmap.size()) + " vertices");
  return prune_dead_nodes(roadmap);
}

}  // namespace fdrrt
