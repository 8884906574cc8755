#include "fdrrt/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "overloaded.hpp"

namespace fdrrt {

using nlohmann::json;

namespace {

constexpr int kVersion = 1;

json write(const Configuration& q) { return json::array({q.x, q.y, q.theta, q.kappa}); }

Configuration read_configuration(const json& j) {
  if (!j.is_array() || j.size() != 4) throw FormatError("configuration must be [x, y, theta, kappa]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

json write(const Footprint& f) {
  return std::visit(detail::overloaded{
                        [](const RectangleFootprint& r) {
                          return json{{"type", "rectangle"}, {"length", r.length}, {"width", r.width}};
                        },
                        [](const DiskFootprint& d) { return json{{"type", "disk"}, {"radius", d.radius}}; },
                    },
                    f);
}

Footprint read_footprint(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "rectangle") return RectangleFootprint{j.at("length").get<double>(), j.at("width").get<double>()};
  if (type == "disk") return DiskFootprint{j.at("radius").get<double>()};
  throw FormatError("unknown footprint type: " + type);
}

json write(const RobotProfile& p) {
  return {{"id", p.id},
          {"footprint", write(p.footprint)},
          {"kappa_max", p.kappa_max},
          {"sigma_max", p.sigma_max},
          {"connection_radius", p.connection_radius},
          {"roadmap_size", p.roadmap_size}};
}

RobotProfile read_profile(const json& j) {
  RobotProfile p;
  p.id = j.at("id").get<std::string>();
  p.footprint = read_footprint(j.at("footprint"));
  p.kappa_max = j.at("kappa_max").get<double>();
  p.sigma_max = j.at("sigma_max").get<double>();
  p.connection_radius = j.at("connection_radius").get<double>();
  p.roadmap_size = j.at("roadmap_size").get<int>();
  validate(p);
  return p;
}

json write(const SamplingParams& s) {
  return {{"lateral_noise_sigma", s.lateral_noise_sigma},
          {"heading_noise_sigma", s.heading_noise_sigma},
          {"curvature_noise_sigma", s.curvature_noise_sigma},
          {"rng_seed", s.rng_seed}};
}

SamplingParams read_sampling(const json& j) {
  SamplingParams s;
  s.lateral_noise_sigma = j.at("lateral_noise_sigma").get<double>();
  s.heading_noise_sigma = j.at("heading_noise_sigma").get<double>();
  s.curvature_noise_sigma = j.at("curvature_noise_sigma").get<double>();
  s.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  validate(s);
  return s;
}

const char* kind_name(SegmentKind k) {
  switch (k) {
    case SegmentKind::line: return "line";
    case SegmentKind::arc: return "arc";
    case SegmentKind::clothoid: return "clothoid";
  }
  return "";
}

json write(const Segment& s) { return json::array({kind_name(s.kind), s.kappa0, s.sigma, s.length}); }

Segment read_segment(const json& j) {
  if (!j.is_array() || j.size() != 4) throw FormatError("segment must be [kind, kappa0, sigma, length]");
  const std::string kind = j[0].get<std::string>();
  Segment s;
  if (kind == "line") s.kind = SegmentKind::line;
  else if (kind == "arc") s.kind = SegmentKind::arc;
  else if (kind == "clothoid") s.kind = SegmentKind::clothoid;
  else throw FormatError("unknown segment kind: " + kind);
  s.kappa0 = j[1].get<double>();
  s.sigma = j[2].get<double>();
  s.length = j[3].get<double>();
  return s;
}

json write(const Vec2d& v) { return json::array({v.x(), v.y()}); }

Vec2d read_point(const json& j) {
  if (!j.is_array() || j.size() != 2) throw FormatError("point must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json write(const Obstacle& o) {
  return std::visit(detail::overloaded{
                        [](const ConvexPolygon<double>& p) {
                          json vs = json::array();
                          for (const auto& v : p.vertices) vs.push_back(write(v));
                          return json{{"type", "polygon"}, {"vertices", vs}};
                        },
                        [](const Disk<double>& d) {
                          return json{{"type", "disk"}, {"center", write(d.center)}, {"radius", d.radius}};
                        },
                    },
                    o);
}

Obstacle read_obstacle(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "polygon") {
    std::vector<Vec2d> vs;
    for (const auto& v : j.at("vertices")) vs.push_back(read_point(v));
    try {
      return make_polygon(std::move(vs));
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
  }
  if (type == "disk") {
    const double r = j.at("radius").get<double>();
    if (!(r > 0.0)) throw FormatError("disk radius must be positive");
    return Disk<double>{read_point(j.at("center")), r};
  }
  throw FormatError("unknown obstacle type: " + type);
}

json roadmap_json(const LocalRoadmap& g) {
  json vertices = json::array();
  for (const auto& q : g.vertices) vertices.push_back(write(q));
  json edges = json::array();
  for (const auto& e : g.edges) {
    json segs = json::array();
    for (const auto& s : e.path.segments) segs.push_back(write(s));
    edges.push_back({{"from", e.from}, {"to", e.to}, {"length", e.length},
                     {"path_length", e.path.total_length}, {"segments", segs}});
  }
  json heuristic = json::array();
  for (double h : g.heuristic) heuristic.push_back(std::isinf(h) ? json(nullptr) : json(h));
  return {{"format", "fdrrt-roadmap"},
          {"version", kVersion},
          {"profile", write(g.profile)},
          {"sampling", write(g.sampling)},
          {"collision_step", g.collision_step},
          {"goal_vertex", g.goal_vertex},
          {"vertices", vertices},
          {"edges", edges},
          {"heuristic", heuristic}};
}

void check_header(const json& j, const char* format) {
  if (!j.is_object() || j.value("format", "") != format)
    throw FormatError(std::string("not a ") + format + " document");
  if (j.at("version").get<int>() != kVersion)
    throw FormatError(std::string(format) + " version " + std::to_string(j.at("version").get<int>()) +
                      " is not supported");
}

LocalRoadmap roadmap_from(const json& j) {
  check_header(j, "fdrrt-roadmap");
  LocalRoadmap g;
  g.profile = read_profile(j.at("profile"));
  g.sampling = read_sampling(j.at("sampling"));
  g.collision_step = j.at("collision_step").get<double>();
  g.goal_vertex = j.at("goal_vertex").get<int>();
  for (const auto& v : j.at("vertices")) g.vertices.push_back(read_configuration(v));
  const int n = g.size();
  if (g.goal_vertex < 0 || g.goal_vertex >= n) throw FormatError("goal_vertex out of range");
  for (const auto& e : j.at("edges")) {
    RoadmapEdge edge;
    edge.from = e.at("from").get<int>();
    edge.to = e.at("to").get<int>();
    if (edge.from < 0 || edge.from >= n || edge.to < 0 || edge.to >= n)
      throw FormatError("edge endpoint out of range");
    edge.length = e.at("length").get<double>();
    edge.path.start = g.vertices[edge.from];
    edge.path.end = g.vertices[edge.to];
    edge.path.total_length = e.at("path_length").get<double>();
    for (const auto& s : e.at("segments")) edge.path.segments.push_back(read_segment(s));
    g.edges.push_back(std::move(edge));
  }
  for (const auto& h : j.at("heuristic"))
    g.heuristic.push_back(h.is_null() ? std::numeric_limits<double>::infinity() : h.get<double>());
  if (!g.heuristic.empty() && static_cast<int>(g.heuristic.size()) != n)
    throw FormatError("heuristic length does not match vertex count");
  g.rebuild_adjacency();
  return g;
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(e.what());
  }
}

// Wraps nlohmann's type and key errors so callers only see FormatError.
template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw FormatError(e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

}  // namespace

std::string save_roadmap(const LocalRoadmap& roadmap) { return roadmap_json(roadmap).dump() + "\n"; }

LocalRoadmap load_roadmap(std::string_view text) {
  return guarded([&] { return roadmap_from(parse(text)); });
}

std::string save_roadmaps(const std::vector<LocalRoadmap>& roadmaps) {
  json list = json::array();
  for (const auto& g : roadmaps) list.push_back(roadmap_json(g));
  return json{{"format", "fdrrt-roadmaps"}, {"version", kVersion}, {"roadmaps", list}}.dump() + "\n";
}

std::vector<LocalRoadmap> load_roadmaps(std::string_view text) {
  return guarded([&] {
    const json j = parse(text);
    check_header(j, "fdrrt-roadmaps");
    std::vector<LocalRoadmap> out;
    for (const auto& g : j.at("roadmaps")) out.push_back(roadmap_from(g));
    return out;
  });
}

std::string save_scenario(const Scenario& s) {
  json obstacles = json::array();
  for (const auto& o : s.obstacles) obstacles.push_back(write(o));
  json robots = json::array();
  for (const auto& r : s.robots) {
    json via = json::array();
    for (const auto& q : r.via_points) via.push_back(write(q));
    robots.push_back({{"profile", write(r.profile)},
                      {"init", write(r.q_init)},
                      {"goal", write(r.q_goal)},
                      {"via_points", via}});
  }
  const json doc{{"format", "fdrrt-scenario"},
                 {"version", kVersion},
                 {"name", s.name},
                 {"seed", s.seed},
                 {"sampling", write(s.sampling)},
                 {"obstacles", obstacles},
                 {"robots", robots}};
  return doc.dump(2) + "\n";
}

Scenario load_scenario(std::string_view text) {
  return guarded([&] {
    const json j = parse(text);
    check_header(j, "fdrrt-scenario");
    Scenario s;
    s.name = j.at("name").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.sampling = read_sampling(j.at("sampling"));
    for (const auto& o : j.at("obstacles")) s.obstacles.push_back(read_obstacle(o));
    for (const auto& r : j.at("robots")) {
      RobotTask t;
      t.profile = read_profile(r.at("profile"));
      t.q_init = read_configuration(r.at("init"));
      t.q_goal = read_configuration(r.at("goal"));
      for (const auto& q : r.at("via_points")) t.via_points.push_back(read_configuration(q));
      s.robots.push_back(std::move(t));
    }
    return s;
  });
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace fdrrt
