#include "fdrrt/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "fdrrt/collision.hpp"

namespace fdrrt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Footprint samples of one robot over one composite step.
struct Motion {
  std::vector<OrientedShape> shapes;
  std::vector<Aabb> boxes;
  Aabb sweep;

  const OrientedShape& at(int m) const { return shapes[std::min<std::size_t>(m, shapes.size() - 1)]; }
  const Aabb& box(int m) const { return boxes[std::min<std::size_t>(m, boxes.size() - 1)]; }
};

Motion make_motion(std::vector<OrientedShape> shapes) {
  Motion out;
  out.shapes = std::move(shapes);
  out.boxes.reserve(out.shapes.size());
  for (const auto& s : out.shapes) out.boxes.push_back(bounds(s));
  out.sweep = out.boxes.front();
  for (const auto& b : out.boxes) out.sweep.extend(b);
  return out;
}

const RoadmapEdge& edge_between(const LocalRoadmap& g, int from, int to) {
  const auto e = g.find_edge(from, to);
  if (!e) throw std::invalid_argument("composite move is not a roadmap edge");
  return g.edges[*e];
}

}  // namespace

namespace detail {

// Per-query cache of swept footprints keyed by (robot, edge, samples).
class MotionCache {
 public:
  explicit MotionCache(std::span<const LocalRoadmap> roadmaps) : roadmaps(roadmaps), moving(roadmaps.size()) {
    for (const auto& g : roadmaps) {
      std::vector<Motion> held;
      held.reserve(g.vertices.size());
      for (const auto& q : g.vertices) held.push_back(make_motion({footprint_at(g.profile, q)}));
      holding.push_back(std::move(held));
    }
  }

  const Motion& get(std::size_t robot, int from, int to, int samples) {
    if (from == to) return holding[robot][from];
    const LocalRoadmap& g = roadmaps[robot];
    const auto e = g.find_edge(from, to);
    if (!e) throw std::invalid_argument("composite move is not a roadmap edge");
    const std::uint64_t key = (static_cast<std::uint64_t>(*e) << 32) | static_cast<std::uint32_t>(samples);
    auto it = moving[robot].find(key);
    if (it != moving[robot].end()) return it->second;

    const LocalPath& path = g.edges[*e].path;
    const double margin = sampling_margin(g.profile, path.total_length / samples);
    std::vector<OrientedShape> shapes;
    shapes.reserve(samples + 1);
    for (int m = 0; m <= samples; ++m) {
      const Configuration q = m == samples ? path.end : path.at(path.total_length * m / samples);
      shapes.push_back(footprint_at(g.profile, q, margin));
    }
    return moving[robot].emplace(key, make_motion(std::move(shapes))).first->second;
  }

  bool pair_free(const Motion& a, const Motion& b, int samples) const {
    if (!a.sweep.overlaps(b.sweep)) return true;
    for (int m = 0; m <= samples; ++m) {
      if (a.box(m).overlaps(b.box(m)) && shapes_intersect(a.at(m), b.at(m))) return false;
    }
    return true;
  }

  bool edge_free(const CompositeVertex& from, const CompositeVertex& to, int samples) {
    const std::size_t n = from.size();
    std::vector<const Motion*> motion(n);
    for (std::size_t i = 0; i < n; ++i) motion[i] = &get(i, from[i], to[i], samples);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        if (from[i] == to[i] && from[j] == to[j]) continue;
        if (!pair_free(*motion[i], *motion[j], samples)) return false;
      }
    return true;
  }

  std::span<const LocalRoadmap> roadmaps;
  std::vector<std::unordered_map<std::uint64_t, Motion>> moving;
  std::vector<std::vector<Motion>> holding;
};

}  // namespace detail

std::size_t CompositeVertexHash::operator()(const CompositeVertex& v) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (int x : v) {
    h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

SearchTree::SearchTree(CompositeVertex root) : by_vertex_(root.size()) { add(std::move(root), -1, 0.0); }

int SearchTree::add(CompositeVertex v, int parent, double cost) {
  const int k = size();
  for (std::size_t r = 0; r < v.size(); ++r) by_vertex_[r][v[r]].push_back(k);
  index_.emplace(v, k);
  nodes_.push_back(std::move(v));
  parents_.push_back(parent);
  costs_.push_back(cost);
  children_.emplace_back();
  if (parent >= 0) children_[parent].push_back(k);
  return k;
}

void SearchTree::reparent(int k, int parent, double cost) {
  auto& siblings = children_[parents_[k]];
  siblings.erase(std::find(siblings.begin(), siblings.end(), k));
  children_[parent].push_back(k);
  parents_[k] = parent;
  const double delta = cost - costs_[k];
  std::vector<int> stack{k};
  while (!stack.empty()) {
    const int n = stack.back();
    stack.pop_back();
    costs_[n] += delta;
    stack.insert(stack.end(), children_[n].begin(), children_[n].end());
  }
}

std::optional<int> SearchTree::find(const CompositeVertex& v) const {
  const auto it = index_.find(v);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::vector<int>& SearchTree::with_vertex(int robot, int v) const {
  static const std::vector<int> none;
  const auto it = by_vertex_[robot].find(v);
  return it == by_vertex_[robot].end() ? none : it->second;
}

int motion_samples(std::span<const LocalRoadmap> roadmaps, const CompositeVertex& from,
                   const CompositeVertex& to, const PlannerOptions& options) {
  double longest = 0.0;
  for (std::size_t i = 0; i < from.size(); ++i) {
    if (from[i] != to[i]) longest = std::max(longest, edge_between(roadmaps[i], from[i], to[i]).length);
  }
  return std::max(options.min_samples, static_cast<int>(std::ceil(longest / options.sample_spacing)));
}

bool composite_edge_collision_free(std::span<const LocalRoadmap> roadmaps, const CompositeVertex& from,
                                   const CompositeVertex& to, int samples) {
  detail::MotionCache cache(roadmaps);
  return cache.edge_free(from, to, samples);
}

Planner::Planner(std::span<const LocalRoadmap> roadmaps, PlannerOptions options)
    : roadmaps_(roadmaps),
      options_(options),
      start_(roadmaps.size(), 0),
      goal_([&] {
        CompositeVertex g;
        for (const auto& r : roadmaps) g.push_back(r.goal_vertex);
        return g;
      }()),
      tree_(start_),
      rng_(options.seed),
      motions_(std::make_unique<detail::MotionCache>(roadmaps)) {
  if (roadmaps.empty()) throw std::invalid_argument("planner needs at least one roadmap");
  for (const auto& g : roadmaps) {
    if (g.heuristic.size() != g.vertices.size() || g.out_edges.size() != g.vertices.size())
      throw std::invalid_argument("roadmap heuristic or adjacency missing");
  }
  for (const auto& g : roadmaps) {
    positions_.push_back(g.vertices[0].x);
    positions_.push_back(g.vertices[0].y);
  }
}

Planner::~Planner() = default;

double Planner::heuristic_sum(const CompositeVertex& v) const {
  double h = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) h += roadmaps_[i].heuristic[v[i]];
  return h;
}

double Planner::move_cost(const CompositeVertex& from, const CompositeVertex& to) const {
  double c = 0.0;
  for (std::size_t i = 0; i < from.size(); ++i) {
    if (from[i] != to[i]) c += edge_between(roadmaps_[i], from[i], to[i]).length;
  }
  return c;
}

bool Planner::edge_free(const CompositeVertex& from, const CompositeVertex& to) {
  return motions_->edge_free(from, to, motion_samples(roadmaps_, from, to, options_));
}

int Planner::nearest(const CompositeVertex& target) const {
  const std::size_t n = roadmaps_.size();
  std::vector<double> tx(n), ty(n);
  for (std::size_t i = 0; i < n; ++i) {
    tx[i] = roadmaps_[i].vertices[target[i]].x;
    ty[i] = roadmaps_[i].vertices[target[i]].y;
  }
  int best = 0;
  double best_d = kInf;
  for (int k = 0; k < tree_.size(); ++k) {
    const double* p = &positions_[2 * n * k];
    double d = 0.0;
    for (std::size_t i = 0; i < n && d < best_d; ++i) d += std::hypot(p[2 * i] - tx[i], p[2 * i + 1] - ty[i]);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

CompositeVertex Planner::direction_oracle(const CompositeVertex& near, bool greedy) {
  CompositeVertex out(near.size());
  for (std::size_t i = 0; i < near.size(); ++i) {
    const LocalRoadmap& g = roadmaps_[i];
    const int v = near[i];
    const auto& outs = g.out_edges[v];
    if (greedy) {
      int best = v;
      double best_cost = v == g.goal_vertex ? 0.0 : kInf;
      for (int e : outs) {
        const int to = g.edges[e].to;
        const double c = g.edges[e].length + g.heuristic[to];
        if (c < best_cost || (c == best_cost && to < best)) {
          best_cost = c;
          best = to;
        }
      }
      out[i] = best;
    } else if (outs.empty()) {
      out[i] = v;
    } else {
      const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, outs.size() - 1)(rng_);
      out[i] = g.edges[outs[pick]].to;
    }
  }
  return out;
}

std::vector<int> Planner::parent_candidates(const CompositeVertex& v_new) const {
  const std::size_t n = v_new.size();
  // Scan the tree nodes of whichever robot narrows the search most.
  std::size_t pivot = 0;
  std::size_t fewest = std::numeric_limits<std::size_t>::max();
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t count = tree_.with_vertex(r, v_new[r]).size();
    for (int e : roadmaps_[r].in_edges[v_new[r]]) count += tree_.with_vertex(r, roadmaps_[r].edges[e].from).size();
    if (count < fewest) {
      fewest = count;
      pivot = r;
    }
  }
  std::vector<int> out;
  auto scan = [&](const std::vector<int>& nodes) {
    for (int k : nodes) {
      const CompositeVertex& v = tree_.node(k);
      bool ok = true;
      for (std::size_t r = 0; r < n && ok; ++r) {
        if (r == pivot || v[r] == v_new[r]) continue;
        ok = roadmaps_[r].find_edge(v[r], v_new[r]).has_value();
      }
      if (ok && v != v_new) out.push_back(k);
    }
  };
  scan(tree_.with_vertex(pivot, v_new[pivot]));
  for (int e : roadmaps_[pivot].in_edges[v_new[pivot]]) scan(tree_.with_vertex(pivot, roadmaps_[pivot].edges[e].from));
  return out;
}

PriorityLedger Planner::priority_ledger(const CompositeVertex& v1, const CompositeVertex& v2) {
  const std::size_t n = v1.size();
  const int samples = motion_samples(roadmaps_, v1, v2, options_);
  std::vector<const Motion*> motion(n);
  for (std::size_t i = 0; i < n; ++i) motion[i] = &motions_->get(i, v1[i], v2[i], samples);

  // Does shape `s` touch any sample of motion `m`?
  auto touches = [](const OrientedShape& s, const Aabb& box, const Motion& m) {
    if (!box.overlaps(m.sweep)) return false;
    for (std::size_t k = 0; k < m.shapes.size(); ++k) {
      if (box.overlaps(m.boxes[k]) && shapes_intersect(s, m.shapes[k])) return true;
    }
    return false;
  };
  auto overlap = [&](const Motion& a, const Motion& b) {
    if (!a.sweep.overlaps(b.sweep)) return false;
    for (std::size_t k = 0; k < a.shapes.size(); ++k) {
      if (touches(a.shapes[k], a.boxes[k], b)) return true;
    }
    return false;
  };

  PriorityLedger ledger;
  ledger.higher.resize(n);
  ledger.lower.resize(n);
  ledger.undetermined.resize(n);
  ledger.deadlocked.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (v1[i] == v2[i] && v1[j] == v2[j]) continue;
      const Motion& a = *motion[i];
      const Motion& b = *motion[j];
      if (!overlap(a, b)) continue;
      const bool i_blocks = touches(a.shapes.front(), a.boxes.front(), b);
      const bool j_blocks = touches(b.shapes.front(), b.boxes.front(), a);
      const int ii = static_cast<int>(i);
      const int jj = static_cast<int>(j);
      if (i_blocks && j_blocks) {
        ledger.deadlocked[i].push_back(jj);
        ledger.deadlocked[j].push_back(ii);
      } else if (i_blocks) {
        ledger.lower[i].push_back(jj);
        ledger.higher[j].push_back(ii);
      } else if (j_blocks) {
        ledger.lower[j].push_back(ii);
        ledger.higher[i].push_back(jj);
      } else {
        ledger.undetermined[i].push_back(jj);
        ledger.undetermined[j].push_back(ii);
      }
    }
  }
  return ledger;
}

std::optional<CompositeVertex> Planner::force_connect(const CompositeVertex& v1, const CompositeVertex& v2) {
  const std::size_t n = v1.size();
  const PriorityLedger ledger = priority_ledger(v1, v2);
  auto cost = [&](std::size_t i) { return ledger.undetermined[i].size(); };

  CompositeVertex hybrid = v1;
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!ledger.higher[i].empty() || !ledger.deadlocked[i].empty()) continue;
    bool admit = true;
    for (int j : ledger.undetermined[i]) {
      // Lower cost wins; equal costs go to the lower index.
      if (std::pair(cost(j), static_cast<std::size_t>(j)) < std::pair(cost(i), i)) {
        admit = false;
        break;
      }
    }
    if (!admit) continue;
    any = true;
    hybrid[i] = v2[i];
  }
  if (!any || hybrid == v1) return std::nullopt;
  if (!edge_free(v1, hybrid)) return std::nullopt;
  return hybrid;
}

std::optional<CompositeVertex> Planner::expand(const std::optional<CompositeVertex>& last) {
  int near_node;
  bool greedy;
  if (!last) {
    CompositeVertex q_rand(roadmaps_.size());
    for (std::size_t i = 0; i < roadmaps_.size(); ++i)
      q_rand[i] = std::uniform_int_distribution<int>(0, roadmaps_[i].size() - 1)(rng_);
    near_node = nearest(q_rand);
    greedy = false;
  } else {
    const auto k = tree_.find(*last);
    if (!k) throw std::invalid_argument("expand: last vertex is not in the tree");
    near_node = *k;
    greedy = true;
  }
  const CompositeVertex v_near = tree_.node(near_node);
  CompositeVertex v_new = direction_oracle(v_near, greedy);
  if (v_new == v_near) return std::nullopt;

  struct Candidate {
    double cost;
    int node;
  };
  std::vector<Candidate> candidates;
  for (int k : parent_candidates(v_new)) candidates.push_back({tree_.cost(k) + move_cost(tree_.node(k), v_new), k});
  if (candidates.empty()) return std::nullopt;
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.cost != b.cost ? a.cost < b.cost : a.node < b.node; });

  // Connect either adds the node or, if it is already in the tree, moves it
  // under a strictly cheaper parent. Costs never decrease along tree edges, so
  // a cheaper parent cannot be a descendant.
  auto connect = [&](const CompositeVertex& v, int parent, double cost) {
    if (const auto k = tree_.find(v)) {
      if (cost < tree_.cost(*k)) {
        tree_.reparent(*k, parent, cost);
        ++reparented_;
      }
      return;
    }
    for (std::size_t i = 0; i < roadmaps_.size(); ++i) {
      positions_.push_back(roadmaps_[i].vertices[v[i]].x);
      positions_.push_back(roadmaps_[i].vertices[v[i]].y);
    }
    tree_.add(v, parent, cost);
  };

  const auto existing = tree_.find(v_new);
  for (const Candidate& c : candidates) {
    // An existing node only needs a parent that would improve it.
    if (existing && c.cost >= tree_.cost(*existing)) break;
    if (edge_free(tree_.node(c.node), v_new)) {
      connect(v_new, c.node, c.cost);
      return v_new;
    }
  }
  if (existing) return v_new;
  if (options_.algorithm == Algorithm::drrt_star) return std::nullopt;

  const int best = candidates.front().node;
  const CompositeVertex v_best = tree_.node(best);
  auto hybrid = force_connect(v_best, v_new);
  if (!hybrid) return std::nullopt;
  ++forced_;
  const bool fresh = !tree_.find(*hybrid);
  connect(*hybrid, best, tree_.cost(best) + move_cost(v_best, *hybrid));
  // Re-entering a known hybrid node would let greedy descent cycle.
  if (!fresh) return std::nullopt;
  return hybrid;
}

CompositePlan Planner::trace(int node) const {
  std::vector<int> chain;
  for (int k = node; k >= 0; k = tree_.parent(k)) chain.push_back(k);
  std::reverse(chain.begin(), chain.end());

  CompositePlan plan;
  const std::size_t n = roadmaps_.size();
  plan.robots.resize(n);
  for (int k : chain) plan.vertices.push_back(tree_.node(k));
  for (std::size_t i = 0; i < n; ++i) {
    const LocalRoadmap& g = roadmaps_[i];
    RobotTrajectory& traj = plan.robots[i];
    for (std::size_t t = 0; t < plan.vertices.size(); ++t) {
      const int v = plan.vertices[t][i];
      traj.waypoints.push_back(g.vertices[v]);
      if (t == 0) continue;
      const int u = plan.vertices[t - 1][i];
      if (u == v) {
        traj.steps.emplace_back();
      } else {
        const RoadmapEdge& e = edge_between(g, u, v);
        traj.steps.emplace_back(std::in_place, e.path);
        plan.cost += e.length;
      }
    }
  }
  return plan;
}

PlanResult Planner::solve() {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  PlanResult result;
  double best_h = heuristic_sum(start_);
  std::optional<CompositeVertex> last = start_;
  int iterations = 0;
  int seen = 1;
  while (!tree_.find(goal_)) {
    if (iterations >= options_.max_iterations) {
      result.failure_reason = "iteration_limit";
      break;
    }
    if (std::chrono::duration<double>(Clock::now() - t0).count() >= options_.max_wall_time) {
      result.failure_reason = "time_limit";
      break;
    }
    ++iterations;
    last = expand(last);
    for (; seen < tree_.size(); ++seen) best_h = std::min(best_h, heuristic_sum(tree_.node(seen)));
  }
  if (const auto k = tree_.find(goal_)) result.plan = trace(*k);
  result.stats.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
  result.stats.tree_size = tree_.size();
  result.stats.iterations = iterations;
  result.stats.forced_connections = forced_;
  result.stats.reparented = reparented_;
  result.stats.best_heuristic = result.plan ? 0.0 : best_h;
  return result;
}

PlanResult plan(std::span<const LocalRoadmap> roadmaps, const PlannerOptions& options) {
  Planner planner(roadmaps, options);
  return planner.solve();
}

}  // namespace fdrrt
