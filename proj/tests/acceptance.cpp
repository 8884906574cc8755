// Acceptance harness: one PASS/FAIL line per criterion, fixed thresholds.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "fdrrt/bench.hpp"
#include "fdrrt/io.hpp"
#include "fdrrt/steering.hpp"
#include "support/audit.hpp"
#include "support/oracles.hpp"

using namespace fdrrt;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const char* const kEnvironments[] = {"intersection", "warehouse", "uav"};

// Segment-wise bound check from the stored segment parameters alone.
int curvature_violations(const LocalPath& p, const RobotProfile& prof) {
  int bad = 0;
  for (const auto& s : p.segments) {
    const double k0 = s.kappa0, k1 = s.kappa0 + s.sigma * s.length;
    if (std::abs(k0) > prof.kappa_max + 1e-6 || std::abs(k1) > prof.kappa_max + 1e-6) ++bad;
    if (std::abs(s.sigma) > prof.sigma_max + 1e-3) ++bad;
  }
  return bad;
}

Outcome soundness() {
  const auto t0 = Clock::now();
  int instances = 0, plans = 0, violations = 0, edges = 0, curvature = 0, skipped = 0;
  std::string first;
  for (const char* env : kEnvironments) {
    int planned = 0;
    for (std::uint64_t seed = 1000; planned < 100; ++seed) {
      const int robots = 2 + static_cast<int>(seed % 5);
      const Scenario s = make_scenario(env, robots, seed);
      std::vector<LocalRoadmap> maps;
      try {
        maps = build_roadmaps(s);
      } catch (const RoadmapError&) {
        ++skipped;
        continue;
      }
      ++planned;
      ++instances;
      for (const auto& g : maps)
        for (const auto& e : g.edges) {
          ++edges;
          curvature += curvature_violations(e.path, g.profile);
        }
      for (auto algo : {Algorithm::fdrrt, Algorithm::drrt_star}) {
        const auto r = plan(maps, {.algorithm = algo, .max_iterations = 20000, .seed = seed});
        if (!r.plan) continue;
        ++plans;
        const auto rep = audit::check_plan(*r.plan, maps, s.obstacles, 4);
        if (!rep.clean()) {
          ++violations;
          if (first.empty()) first = fmt("%s seed %llu: %s", env, (unsigned long long)seed, rep.first.c_str());
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool pass = instances >= 300 && plans > 0 && violations == 0 && curvature == 0 && secs <= 600.0;
  return {pass, fmt("%d instances (%d skipped: roadmap failure), %d plans audited at 4x density, %d violating; "
                    "%d roadmap edges, %d curvature violations; %.0f s (limit 600)%s%s",
                    instances, skipped, plans, violations, edges, curvature, secs, first.empty() ? "" : "; first: ",
                    first.c_str())};
}

Outcome heuristic_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(77);
  double worst = 0.0;
  int mismatched_reachability = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 50)(rng);
    const double density = std::uniform_real_distribution<double>(0.02, 0.3)(rng);
    LocalRoadmap g;
    for (int v = 0; v < n; ++v) g.vertices.push_back({double(v), 0.0, 0.0, 0.0});
    g.goal_vertex = std::uniform_int_distribution<int>(0, n - 1)(rng);
    std::vector<oracle::WeightedEdge> oracle_edges;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b || std::uniform_real_distribution<double>(0, 1)(rng) > density) continue;
        const double w = std::uniform_real_distribution<double>(0.1, 20.0)(rng);
        g.edges.push_back({a, b, w, {}});
        oracle_edges.push_back({a, b, w});
      }
    g.rebuild_adjacency();
    const auto h = cost_to_goal(g);
    const auto ref = oracle::distances_to(n, oracle_edges, g.goal_vertex);
    for (int v = 0; v < n; ++v) {
      if (std::isinf(h[v]) != std::isinf(ref[v])) {
        ++mismatched_reachability;
      } else if (!std::isinf(ref[v])) {
        worst = std::max(worst, std::abs(h[v] - ref[v]));
      }
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {worst <= 1e-9 && mismatched_reachability == 0 && secs <= 10.0,
          fmt("100 random roadmaps (2..50 vertices): max |diff| %.3g (limit 1e-9), %d reachability mismatches; "
              "%.2f s (limit 10)",
              worst, mismatched_reachability, secs)};
}

Outcome steering_closure() {
  const auto t0 = Clock::now();
  struct Env {
    const char* name;
    RobotProfile profile;
    double half_extent;
  };
  const Env envs[] = {{"intersection", IntersectionOptions::default_vehicle(), 30.0},
                      {"warehouse", WarehouseOptions::default_robot(), 10.0},
                      {"uav", UavFieldOptions::default_drone(), 10.0}};
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double worst_pos = 0.0, worst_ang = 0.0;
  std::string counts;
  for (const Env& env : envs) {
    int ok = 0;
    for (int i = 0; i < 1000; ++i) {
      const double e = env.half_extent, k = env.profile.kappa_max;
      const Configuration a{e * unit(rng), e * unit(rng), M_PI * unit(rng), k * unit(rng)};
      const Configuration b{e * unit(rng), e * unit(rng), M_PI * unit(rng), k * unit(rng)};
      const auto path = steer(a, b, env.profile);
      if (!path) continue;
      ++ok;
      const oracle::State end = oracle::rk4_path(*path);
      worst_pos = std::max(worst_pos, std::hypot(end.x - b.x, end.y - b.y));
      worst_ang = std::max(worst_ang, std::abs(oracle::angle_diff(end.theta, b.theta)));
    }
    counts += fmt("%s%s %d/1000", counts.empty() ? "" : ", ", env.name, ok);
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {worst_pos <= 1e-6 && worst_ang <= 1e-6 && secs <= 30.0,
          fmt("steered %s; max closure error %.2g m / %.2g rad (limit 1e-6); %.1f s (limit 30)", counts.c_str(),
              worst_pos, worst_ang, secs)};
}

Outcome completeness() {
  const auto t0 = Clock::now();
  int instances = 0, runs = 0, solved = 0, oversize = 0, infeasible = 0, roadmap_fail = 0;
  for (std::uint64_t seed = 0; instances < 50; ++seed) {
    const char* env = kEnvironments[seed % 3];
    Scenario s = make_scenario(env, 2, seed);
    for (auto& r : s.robots) r.profile.roadmap_size = 14;
    std::vector<LocalRoadmap> maps;
    try {
      maps = build_roadmaps(s);
    } catch (const RoadmapError&) {
      ++roadmap_fail;
      continue;
    }
    if (maps[0].size() * maps[1].size() > 200) {
      ++oversize;
      continue;
    }
    if (!std::isfinite(audit::tensor_dijkstra(maps))) {
      ++infeasible;
      continue;
    }
    ++instances;
    for (std::uint64_t k = 0; k < 2; ++k) {
      ++runs;
      solved += plan(maps, {.max_iterations = 10000, .seed = seed * 2 + k}).plan.has_value();
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const double rate = static_cast<double>(solved) / runs;
  return {rate >= 0.95 && secs <= 300.0,
          fmt("50 feasible 2-robot instances (skipped %d oversize, %d infeasible, %d roadmap failures), "
              "%d/%d seeded runs solved = %.1f%% (limit 95%%); %.1f s (limit 300)",
              oversize, infeasible, roadmap_fail, solved, runs, 100.0 * rate, secs)};
}

struct Paired {
  std::vector<TrialRecord> records;
  double seconds = 0.0;
};

Paired paired_runs(const char* env) {
  const auto t0 = Clock::now();
  BatchSpec spec;
  spec.source.generator = env;
  spec.robot_counts = {6};
  spec.trials = 100;
  spec.base_seed = 2024;
  Paired p;
  p.records = run_batch(spec);
  p.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return p;
}

double median_time(const std::vector<TrialRecord>& rs, Algorithm a) {
  std::vector<double> t;
  for (const auto& r : rs)
    if (r.algorithm == a) t.push_back(*r.wall_time);
  std::sort(t.begin(), t.end());
  return t.size() % 2 ? t[t.size() / 2] : 0.5 * (t[t.size() / 2 - 1] + t[t.size() / 2]);
}

struct Lengths {
  int pairs = 0;
  double fdrrt = 0.0;
  double baseline = 0.0;
  int fdrrt_solved = 0;
  int baseline_solved = 0;
};

Lengths paired_lengths(const std::vector<TrialRecord>& rs) {
  Lengths l;
  for (std::size_t k = 0; k + 1 < rs.size(); k += 2) {
    const TrialRecord& f = rs[k];
    const TrialRecord& b = rs[k + 1];
    l.fdrrt_solved += f.success;
    l.baseline_solved += b.success;
    if (!f.success || !b.success) continue;
    ++l.pairs;
    l.fdrrt += *f.total_path_length;
    l.baseline += *b.total_path_length;
  }
  if (l.pairs) {
    l.fdrrt /= l.pairs;
    l.baseline /= l.pairs;
  }
  return l;
}

Outcome speed(const Paired& inter, const Paired& ware) {
  std::string detail;
  bool pass = true;
  for (const auto* p : {&inter, &ware}) {
    const double f = median_time(p->records, Algorithm::fdrrt);
    const double b = median_time(p->records, Algorithm::drrt_star);
    pass = pass && f < b;
    detail += fmt("%s%s median %.3f ms vs baseline %.3f ms", detail.empty() ? "" : "; ",
                  p->records.front().scenario_name.c_str(), f, b);
  }
  const double secs = inter.seconds + ware.seconds;
  pass = pass && secs <= 900.0;
  return {pass, fmt("6 robots, 100 paired seeds: %s; %.0f s (limit 900)", detail.c_str(), secs)};
}

Outcome quality(const Paired& inter, const Paired& ware, const Paired& uav) {
  std::string detail;
  bool pass = true;
  for (const auto* p : {&inter, &ware}) {
    const Lengths l = paired_lengths(p->records);
    const bool ok = l.pairs > 0 && l.fdrrt >= l.baseline;
    pass = pass && ok;
    detail += fmt("%s%s %d pairs: fdrrt mean %.3f m %s baseline %.3f m (ratio %.4f, solved %d/%d)",
                  detail.empty() ? "" : "; ", p->records.front().scenario_name.c_str(), l.pairs, l.fdrrt,
                  l.fdrrt >= l.baseline ? ">=" : "<", l.baseline, l.fdrrt / l.baseline, l.fdrrt_solved,
                  l.baseline_solved);
  }
  const Lengths u = paired_lengths(uav.records);
  const double ratio = u.fdrrt / u.baseline;
  pass = pass && u.pairs > 0 && ratio >= 0.95 && ratio <= 1.05;
  detail += fmt("; uav %d pairs: ratio %.4f (limit [0.95, 1.05])", u.pairs, ratio);
  return {pass, detail};
}

Outcome determinism(const std::string& cli) {
  auto in_process = [](const char* env, bool timing) {
    BatchSpec spec;
    spec.source.generator = env;
    spec.robot_counts = {2, 4};
    spec.trials = 5;
    spec.base_seed = 99;
    spec.max_iterations = 20000;
    spec.timing = timing;
    std::string text = csv_metadata(spec) + csv_header();
    for (auto r : run_batch(spec)) {
      r.wall_time.reset();  // only meaningful in timing mode
      text += csv_row(r);
    }
    return text;
  };
  int identical = 0, compared = 0;
  for (const char* env : kEnvironments) {
    compared += 2;
    const std::string a = in_process(env, false);
    identical += a == in_process(env, false);
    // Timing mode: every column except wall_time must agree.
    const auto strip_meta = [](const std::string& t) { return t.substr(t.find("scenario_name,")); };
    identical += strip_meta(a) == strip_meta(in_process(env, true));
  }

  bool cli_ok = false;
  std::string cli_note = "cli not run";
  if (!cli.empty()) {
    const auto dir = std::filesystem::temp_directory_path();
    const auto out1 = dir / "fdrrt_accept_1.csv", out2 = dir / "fdrrt_accept_2.csv";
    const std::string args = " bench --scenario generator:warehouse --robots 2,3 --trials 4 --seed 7 --no-timing";
    const int rc1 = std::system((cli + args + " --out " + out1.string()).c_str());
    const int rc2 = std::system((cli + args + " --out " + out2.string()).c_str());
    cli_ok = rc1 == 0 && rc2 == 0 && read_text(out1) == read_text(out2) && !read_text(out1).empty();
    cli_note = fmt("cli bench twice: %s", cli_ok ? "byte-identical" : "DIFFERENT or failed");
    std::filesystem::remove(out1);
    std::filesystem::remove(out2);
  }
  return {identical == compared && cli_ok,
          fmt("in-process batches identical %d/%d (wall_time omitted); %s", identical, compared, cli_note.c_str())};
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_config(const Configuration& a, const Configuration& b) {
  return same_bits(a.x, b.x) && same_bits(a.y, b.y) && same_bits(a.theta, b.theta) && same_bits(a.kappa, b.kappa);
}

Outcome round_trip() {
  int roadmaps = 0, scenarios = 0, bad = 0;
  for (const char* env : kEnvironments)
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const Scenario s = make_scenario(env, 3, seed);
      const std::string stext = save_scenario(s);
      const Scenario sb = load_scenario(stext);
      ++scenarios;
      bool ok = sb == s && save_scenario(sb) == stext && sb.robots.size() == s.robots.size();
      for (std::size_t i = 0; ok && i < s.robots.size(); ++i)
        ok = same_config(sb.robots[i].q_init, s.robots[i].q_init) &&
             same_config(sb.robots[i].q_goal, s.robots[i].q_goal);
      bad += !ok;
      for (const auto& g : build_roadmaps(s)) {
        const std::string text = save_roadmap(g);
        const LocalRoadmap b = load_roadmap(text);
        ++roadmaps;
        bool same = b == g && save_roadmap(b) == text && b.vertices.size() == g.vertices.size() &&
                    b.edges.size() == g.edges.size();
        for (std::size_t v = 0; same && v < g.vertices.size(); ++v)
          same = same_config(b.vertices[v], g.vertices[v]) && same_bits(b.heuristic[v], g.heuristic[v]);
        for (std::size_t e = 0; same && e < g.edges.size(); ++e) {
          same = same_bits(b.edges[e].length, g.edges[e].length) &&
                 b.edges[e].path.segments.size() == g.edges[e].path.segments.size();
          for (std::size_t k = 0; same && k < g.edges[e].path.segments.size(); ++k) {
            const Segment &x = b.edges[e].path.segments[k], &y = g.edges[e].path.segments[k];
            same = x.kind == y.kind && same_bits(x.kappa0, y.kappa0) && same_bits(x.sigma, y.sigma) &&
                   same_bits(x.length, y.length);
          }
        }
        bad += !same;
      }
    }
  return {bad == 0, fmt("%d roadmaps and %d scenarios across all environments; %d not bit-exact", roadmaps,
                        scenarios, bad)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  int failures = 0;
  auto report = [&](int n, const char* name, const Outcome& o) {
    std::printf("criterion %d %-24s %s  %s\n", n, name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };
  report(1, "soundness", soundness());
  report(2, "heuristic-oracle", heuristic_oracle());
  report(3, "steering-closure", steering_closure());
  report(4, "small-completeness", completeness());
  const Paired inter = paired_runs("intersection");
  const Paired ware = paired_runs("warehouse");
  const Paired uav = paired_runs("uav");
  report(5, "speed-direction", speed(inter, ware));
  report(6, "quality-direction", quality(inter, ware, uav));
  report(7, "determinism", determinism(cli));
  report(8, "round-trip", round_trip());
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
