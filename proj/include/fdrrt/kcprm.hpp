#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fdrrt/geometry.hpp"
#include "fdrrt/local_path.hpp"

namespace fdrrt {

/// Gaussian perturbation applied to samples drawn along the reference path.
struct SamplingParams {
  double lateral_noise_sigma = 0.3;     // m, perpendicular to the path tangent
  double heading_noise_sigma = 0.1;     // rad
  double curvature_noise_sigma = 0.05;  // 1/m
  std::uint64_t rng_seed = 0;

  bool operator==(const SamplingParams&) const = default;
};

/// Throws std::invalid_argument on negative noise levels.
void validate(const SamplingParams& params);

struct RoadmapEdge {
  int from = 0;
  int to = 0;
  double length = 0.0;
  LocalPath path;

  bool operator==(const RoadmapEdge&) const = default;
};

/// Directed roadmap of one robot. Vertex 0 is the start; `goal_vertex` the goal.
/// `heuristic[v]` is the shortest directed path length from v to the goal.
struct LocalRoadmap {
  std::vector<Configuration> vertices;
  std::vector<RoadmapEdge> edges;
  std::vector<double> heuristic;
  int goal_vertex = 1;

  // Provenance of the build.
  RobotProfile profile;
  SamplingParams sampling;
  double collision_step = 0.1;

  // Derived adjacency (edge indices); rebuilt by rebuild_adjacency().
  std::vector<std::vector<int>> out_edges;
  std::vector<std::vector<int>> in_edges;

  int size() const { return static_cast<int>(vertices.size()); }
  void rebuild_adjacency();
  /// Index of the edge from -> to, if present.
  std::optional<int> find_edge(int from, int to) const;

  /// Compares stored content; adjacency is derived and ignored.
  bool operator==(const LocalRoadmap& o) const {
    return vertices == o.vertices && edges == o.edges && heuristic == o.heuristic &&
           goal_vertex == o.goal_vertex && profile == o.profile && sampling == o.sampling &&
           collision_step == o.collision_step;
  }
};

class RoadmapError : public std::runtime_error {
 public:
  enum class Code { no_reference_path, goal_unreachable };

  RoadmapError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// Ideal path from start to goal through the via points, obstacle free.
/// Throws RoadmapError{no_reference_path} when a leg's target lies behind its
/// start, a leg cannot be steered, or the result collides.
LocalPath reference_path(const Configuration& q_init, const Configuration& q_goal,
                         const RobotProfile& profile,
                         std::span<const Configuration> via_points = {},
                         std::span<const Obstacle> obstacles = {});

/// Sample `draw_index` of the stream seeded by params.rng_seed: a uniform point
/// on the spine with Gaussian lateral, heading and curvature noise. Pure function
/// of its arguments.
Configuration random_config(const LocalPath& spine, const SamplingParams& params,
                            std::uint64_t draw_index, double kappa_max);

struct BuildOptions {
  /// Draws allowed per requested vertex before giving up on reaching N.
  int draws_per_vertex = 40;
};

/// Goal-biased directed roadmap: samples along the reference path, connects
/// each accepted sample to and from every vertex it can reach, then computes
/// cost-to-goal and prunes vertices that cannot reach the goal.
/// Throws RoadmapError{goal_unreachable} if the start has no path to the goal.
LocalRoadmap build_roadmap(const Configuration& q_init, const Configuration& q_goal,
                           const RobotProfile& profile, std::span<const Obstacle> obstacles,
                           const SamplingParams& params,
                           std::span<const Configuration> via_points = {},
                           const BuildOptions& options = {});

/// Exact shortest directed path length from each vertex to the goal (edge
/// lengths as weights); infinity where the goal is unreachable.
std::vector<double> cost_to_goal(const LocalRoadmap& roadmap);

/// Drops vertices with infinite heuristic and their edges, renumbering the
/// survivors in order. Throws RoadmapError{goal_unreachable} if vertex 0 dies.
LocalRoadmap prune_dead_nodes(const LocalRoadmap& roadmap);

}  // namespace fdrrt
