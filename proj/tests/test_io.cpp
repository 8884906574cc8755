#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <random>

#include "fdrrt/io.hpp"

using namespace fdrrt;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

// Awkward doubles: signed zero, subnormals, extremes, and values with no short
// decimal form.
std::vector<double> awkward_values() {
  return {-0.0,
          0.0,
          std::numeric_limits<double>::denorm_min(),
          -std::numeric_limits<double>::denorm_min(),
          std::numeric_limits<double>::min(),
          std::numeric_limits<double>::max(),
          std::nextafter(1.0, 2.0),
          0.1 + 0.2,
          M_PI,
          -1e-300,
          123456789.123456789};
}

}  // namespace

TEST_CASE("roadmap round-trip is bit exact") {
  for (const char* name : {"intersection", "warehouse", "uav"}) {
    const Scenario s = make_scenario(name, 2, 9);
    for (const auto& g : build_roadmaps(s)) {
      const std::string text = save_roadmap(g);
      const LocalRoadmap back = load_roadmap(text);
      CHECK(back == g);
      CHECK(back.out_edges == g.out_edges);
      CHECK(back.in_edges == g.in_edges);
      CHECK(save_roadmap(back) == text);
    }
  }
}

TEST_CASE("roadmap round-trip preserves awkward doubles and infinite heuristics") {
  const auto values = awkward_values();
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
  for (int trial = 0; trial < 50; ++trial) {
    LocalRoadmap g;
    g.profile.id = "r\"x\n";
    g.sampling.rng_seed = std::numeric_limits<std::uint64_t>::max() - trial;
    g.collision_step = values[pick(rng)];
    for (int v = 0; v < 4; ++v) {
      g.vertices.push_back({values[pick(rng)], values[pick(rng)], values[pick(rng)], values[pick(rng)]});
      g.heuristic.push_back(v == 3 ? std::numeric_limits<double>::infinity() : values[pick(rng)]);
    }
    RoadmapEdge e{0, 2, values[pick(rng)], {}};
    e.path.start = g.vertices[0];
    e.path.end = g.vertices[2];
    e.path.total_length = values[pick(rng)];
    e.path.segments = {Segment::clothoid(values[pick(rng)], values[pick(rng)], values[pick(rng)]),
                       Segment::arc(values[pick(rng)], values[pick(rng)]), Segment::line(values[pick(rng)])};
    g.edges.push_back(e);
    g.rebuild_adjacency();

    const LocalRoadmap back = load_roadmap(save_roadmap(g));
    REQUIRE(back.vertices.size() == g.vertices.size());
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
      CHECK(same_bits(back.vertices[v].x, g.vertices[v].x));
      CHECK(same_bits(back.vertices[v].y, g.vertices[v].y));
      CHECK(same_bits(back.vertices[v].theta, g.vertices[v].theta));
      CHECK(same_bits(back.vertices[v].kappa, g.vertices[v].kappa));
      CHECK(same_bits(back.heuristic[v], g.heuristic[v]));
    }
    for (std::size_t k = 0; k < g.edges[0].path.segments.size(); ++k) {
      CHECK(same_bits(back.edges[0].path.segments[k].kappa0, g.edges[0].path.segments[k].kappa0));
      CHECK(same_bits(back.edges[0].path.segments[k].sigma, g.edges[0].path.segments[k].sigma));
      CHECK(same_bits(back.edges[0].path.segments[k].length, g.edges[0].path.segments[k].length));
    }
    CHECK(same_bits(back.collision_step, g.collision_step));
    CHECK(back.profile.id == g.profile.id);
    CHECK(back.sampling.rng_seed == g.sampling.rng_seed);
  }
}

TEST_CASE("roadmap bundles round-trip") {
  const auto maps = build_roadmaps(make_scenario("warehouse", 3, 2));
  CHECK(load_roadmaps(save_roadmaps(maps)) == maps);
}

TEST_CASE("scenario round-trip is exact") {
  for (const char* name : {"intersection", "warehouse", "uav"}) {
    for (std::uint64_t seed : {0u, 1u, 77u}) {
      Scenario s = make_scenario(name, 5, seed);
      s.seed = std::numeric_limits<std::uint64_t>::max() - seed;
      const std::string text = save_scenario(s);
      const Scenario back = load_scenario(text);
      CHECK(back == s);
      CHECK(save_scenario(back) == text);
    }
  }
  Scenario d = make_uav_field(1, 0);
  d.obstacles.push_back(Disk<double>{{-0.0, 1e-310}, 0.1 + 0.2});
  const Scenario back = load_scenario(save_scenario(d));
  CHECK(back == d);
  CHECK(std::signbit(std::get<Disk<double>>(back.obstacles[0]).center.x()));
}

TEST_CASE("malformed documents raise FormatError") {
  CHECK_THROWS_AS(load_roadmap("{"), FormatError);
  CHECK_THROWS_AS(load_roadmap("{}"), FormatError);
  CHECK_THROWS_AS(load_scenario(save_roadmap(LocalRoadmap{{{0, 0, 0, 0}, {1, 0, 0, 0}}, {}, {}, 1})),
                  FormatError);
  std::string text = save_scenario(make_uav_field(1, 0));
  const auto pos = text.find("\"version\": 1");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 12, "\"version\": 2");
  CHECK_THROWS_AS(load_scenario(text), FormatError);
  // Clockwise polygon.
  CHECK_THROWS_AS(load_scenario(R"({"format":"fdrrt-scenario","version":1,"name":"x","seed":0,
    "sampling":{"lateral_noise_sigma":0.3,"heading_noise_sigma":0.1,"curvature_noise_sigma":0.05,"rng_seed":0},
    "obstacles":[{"type":"polygon","vertices":[[0,0],[0,1],[1,1],[1,0]]}],"robots":[]})"),
                  FormatError);
}

TEST_CASE("files") {
  const auto path = std::filesystem::temp_directory_path() / "fdrrt_io_test.json";
  const Scenario s = make_warehouse(2, 4);
  write_text(path, save_scenario(s));
  CHECK(load_scenario(read_text(path)) == s);
  std::filesystem::remove(path);
  CHECK_THROWS(read_text(path));
}
