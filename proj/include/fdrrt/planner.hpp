#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fdrrt/kcprm.hpp"

namespace fdrrt {

namespace detail {
class MotionCache;
}

/// One roadmap vertex index per robot.
using CompositeVertex = std::vector<int>;

struct CompositeVertexHash {
  std::size_t operator()(const CompositeVertex& v) const noexcept;
};

/// Tree over composite vertices rooted at node 0. A robot moves on the edge into
/// a node iff its index differs from the parent's.
class SearchTree {
 public:
  explicit SearchTree(CompositeVertex root);

  int add(CompositeVertex v, int parent, double cost);
  /// Moves node k under `parent` with the given cost; descendants shift by the
  /// same amount. The caller guarantees `parent` is not in k's subtree.
  void reparent(int k, int parent, double cost);
  std::optional<int> find(const CompositeVertex& v) const;

  int size() const { return static_cast<int>(nodes_.size()); }
  const CompositeVertex& node(int k) const { return nodes_[k]; }
  int parent(int k) const { return parents_[k]; }
  double cost(int k) const { return costs_[k]; }
  /// Tree nodes whose robot `robot` sits at roadmap vertex `v`.
  const std::vector<int>& with_vertex(int robot, int v) const;

 private:
  std::vector<CompositeVertex> nodes_;
  std::vector<int> parents_;
  std::vector<double> costs_;
  std::vector<std::vector<int>> children_;
  std::unordered_map<CompositeVertex, int, CompositeVertexHash> index_;
  std::vector<std::unordered_map<int, std::vector<int>>> by_vertex_;
};

/// Per-robot local priorities for one forced transition. `deadlocked[i]` holds
/// robots whose start blocks i's path while i's start blocks theirs.
struct PriorityLedger {
  std::vector<std::vector<int>> higher;
  std::vector<std::vector<int>> lower;
  std::vector<std::vector<int>> undetermined;
  std::vector<std::vector<int>> deadlocked;
};

/// Per-robot trajectory: waypoint t is the configuration at time step t and
/// steps[t] the local path from waypoint t to t + 1, or nullopt for a hold.
struct RobotTrajectory {
  std::vector<Configuration> waypoints;
  std::vector<std::optional<LocalPath>> steps;
};

struct CompositePlan {
  std::vector<CompositeVertex> vertices;
  std::vector<RobotTrajectory> robots;
  double cost = 0.0;  // summed length of all moves

  int steps() const { return static_cast<int>(vertices.size()) - 1; }
};

enum class Algorithm { fdrrt, drrt_star };

struct PlannerOptions {
  Algorithm algorithm = Algorithm::fdrrt;
  int max_iterations = 100000;
  double max_wall_time = 60.0;  // s
  std::uint64_t seed = 0;
  /// Per composite edge, M = max(min_samples, ceil(longest move / sample_spacing)).
  double sample_spacing = 0.1;
  int min_samples = 10;
};

struct PlanStats {
  int tree_size = 0;
  int iterations = 0;
  double wall_time = 0.0;  // s
  int forced_connections = 0;
  int reparented = 0;
  /// Smallest sum of per-robot heuristics over the tree.
  double best_heuristic = 0.0;
};

struct PlanResult {
  std::optional<CompositePlan> plan;
  PlanStats stats;
  /// Empty on success; "iteration_limit" or "time_limit" otherwise.
  std::string failure_reason;
};

/// Samples per composite edge for moves from `from` to `to`.
int motion_samples(std::span<const LocalRoadmap> roadmaps, const CompositeVertex& from,
                   const CompositeVertex& to, const PlannerOptions& options = {});

/// Synchronized check: every moving robot sits at fraction m/M of its edge at
/// sample m, held robots stay put. Footprints are grown to cover motion between
/// samples. Obstacles are not re-checked.
bool composite_edge_collision_free(std::span<const LocalRoadmap> roadmaps, const CompositeVertex& from,
                                   const CompositeVertex& to, int samples);

class Planner {
 public:
  /// Roadmaps must outlive the planner. Starts are vertex 0, goals goal_vertex.
  Planner(std::span<const LocalRoadmap> roadmaps, PlannerOptions options = {});
  ~Planner();
  Planner(const Planner&) = delete;
  Planner& operator=(const Planner&) = delete;

  PlanResult solve();

  // Building blocks, public for testing. All share the planner's rng and caches.

  /// One Expand call; the result becomes the next call's `last`.
  std::optional<CompositeVertex> expand(const std::optional<CompositeVertex>& last);
  CompositeVertex direction_oracle(const CompositeVertex& near, bool greedy);
  int nearest(const CompositeVertex& target) const;
  PriorityLedger priority_ledger(const CompositeVertex& v1, const CompositeVertex& v2);
  std::optional<CompositeVertex> force_connect(const CompositeVertex& v1, const CompositeVertex& v2);
  bool edge_free(const CompositeVertex& from, const CompositeVertex& to);
  CompositePlan trace(int node) const;

  const SearchTree& tree() const { return tree_; }
  const CompositeVertex& start() const { return start_; }
  const CompositeVertex& goal() const { return goal_; }
  std::mt19937_64& rng() { return rng_; }

 private:
  double heuristic_sum(const CompositeVertex& v) const;
  double move_cost(const CompositeVertex& from, const CompositeVertex& to) const;
  std::vector<int> parent_candidates(const CompositeVertex& v_new) const;

  std::span<const LocalRoadmap> roadmaps_;
  PlannerOptions options_;
  CompositeVertex start_;
  CompositeVertex goal_;
  SearchTree tree_;
  std::mt19937_64 rng_;
  std::vector<double> positions_;  // flattened (x, y) per robot per tree node
  std::unique_ptr<detail::MotionCache> motions_;
  int forced_ = 0;
  int reparented_ = 0;
};

/// Convenience wrapper: Planner(roadmaps, options).solve().
PlanResult plan(std::span<const LocalRoadmap> roadmaps, const PlannerOptions& options = {});

}  // namespace fdrrt
