#include "fdrrt/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace fdrrt {

namespace {

const char* const kColumns[] = {"scenario_name", "algorithm", "robot_count", "seed",
                                "success", "tree_size", "wall_time", "total_path_length",
                                "iterations", "failure_reason"};

std::string roadmap_code(RoadmapError::Code code) {
  switch (code) {
    case RoadmapError::Code::no_reference_path:
      return "roadmap:no_reference_path";
    case RoadmapError::Code::goal_unreachable:
      return "roadmap:goal_unreachable";
  }
  return "roadmap:error";
}

std::string scenario_code(ScenarioError::Code code) {
  return code == ScenarioError::Code::capacity_exceeded ? "scenario:capacity_exceeded" : "scenario:invalid";
}

void check_field(std::string_view text) {
  if (text.find_first_of(",\n\r") != std::string_view::npos)
    throw std::invalid_argument("CSV field contains a separator: " + std::string(text));
}

template <class T>
T parse_number(std::string_view s, std::string_view column) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::runtime_error("bad " + std::string(column) + ": '" + std::string(s) + "'");
  return value;
}

std::optional<double> parse_optional(std::string_view s, std::string_view column) {
  if (s.empty()) return std::nullopt;
  return parse_number<double>(s, column);
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  return algorithm == Algorithm::fdrrt ? "fdrrt" : "drrt_star";
}

std::optional<Algorithm> parse_algorithm(std::string_view text) {
  if (text == "fdrrt") return Algorithm::fdrrt;
  if (text == "drrt_star" || text == "drrt-star") return Algorithm::drrt_star;
  return std::nullopt;
}

std::string ScenarioSource::name() const { return fixed ? fixed->name : generator; }

Scenario ScenarioSource::make(int robot_count, std::uint64_t seed) const {
  if (!fixed) return make_scenario(generator, robot_count, seed);
  if (robot_count != static_cast<int>(fixed->robots.size()))
    throw ScenarioError(ScenarioError::Code::capacity_exceeded,
                        "scenario '" + fixed->name + "' has " + std::to_string(fixed->robots.size()) + " robots");
  Scenario s = *fixed;
  s.seed = seed;
  return s;
}

std::uint64_t trial_seed(std::uint64_t base_seed, int robot_count, int trial) {
  return base_seed ^ (static_cast<std::uint64_t>(robot_count) << 32) ^ static_cast<std::uint64_t>(trial);
}

TrialRecord run_trial(const std::string& scenario_name, std::span<const LocalRoadmap> roadmaps,
                      Algorithm algorithm, std::uint64_t seed, const BatchSpec& spec,
                      std::optional<CompositePlan>* plan_out) {
  PlannerOptions o;
  o.algorithm = algorithm;
  o.max_iterations = spec.max_iterations;
  o.max_wall_time = spec.timing ? spec.max_wall_time : std::numeric_limits<double>::infinity();
  o.seed = seed;
  PlanResult result = plan(roadmaps, o);

  TrialRecord r;
  r.scenario_name = scenario_name;
  r.algorithm = algorithm;
  r.robot_count = static_cast<int>(roadmaps.size());
  r.seed = seed;
  r.success = result.plan.has_value();
  r.tree_size = result.stats.tree_size;
  r.iterations = result.stats.iterations;
  if (spec.timing) r.wall_time = result.stats.wall_time * 1e3;
  if (result.plan) r.total_path_length = result.plan->cost;
  r.failure_reason = result.failure_reason;
  if (plan_out) *plan_out = std::move(result.plan);
  return r;
}

std::vector<TrialRecord> run_batch(const BatchSpec& spec, const std::function<void(const TrialRecord&)>& sink) {
  if (spec.trials < 1) throw std::invalid_argument("trials must be at least 1");
  check_field(spec.source.name());
  std::vector<TrialRecord> records;
  auto emit = [&](TrialRecord r) {
    if (sink) sink(r);
    records.push_back(std::move(r));
  };
  for (int count : spec.robot_counts) {
    for (int trial = 0; trial < spec.trials; ++trial) {
      const std::uint64_t seed = trial_seed(spec.base_seed, count, trial);
      std::vector<LocalRoadmap> maps;
      std::string error;
      try {
        maps = build_roadmaps(spec.source.make(count, seed));
      } catch (const RoadmapError& e) {
        error = roadmap_code(e.code());
      } catch (const ScenarioError& e) {
        error = scenario_code(e.code());
      }
      for (Algorithm algo : spec.algorithms) {
        if (error.empty()) {
          emit(run_trial(spec.source.name(), maps, algo, seed, spec));
          continue;
        }
        TrialRecord r;
        r.scenario_name = spec.source.name();
        r.algorithm = algo;
        r.robot_count = count;
        r.seed = seed;
        if (spec.timing) r.wall_time = 0.0;
        r.failure_reason = error;
        emit(std::move(r));
      }
    }
  }
  return records;
}

std::string csv_header() {
  std::string s;
  for (const char* c : kColumns) {
    if (!s.empty()) s += ',';
    s += c;
  }
  return s + '\n';
}

std::string csv_row(const TrialRecord& r) {
  check_field(r.scenario_name);
  check_field(r.failure_reason);
  std::ostringstream out;
  out << r.scenario_name << ',' << to_string(r.algorithm) << ',' << r.robot_count << ',' << r.seed << ','
      << (r.success ? 1 : 0) << ',' << r.tree_size << ',' << opt(r.wall_time) << ','
      << opt(r.total_path_length) << ',' << r.iterations << ',' << r.failure_reason << '\n';
  return out.str();
}

std::string csv_metadata(const BatchSpec& spec) {
  std::ostringstream out;
  out << "# fdrrt trial records v1\n";
  out << "# scenario: " << spec.source.name() << (spec.source.fixed ? " (file)" : " (generator)") << '\n';
  out << "# base_seed: " << spec.base_seed << '\n';
  out << "# trials: " << spec.trials << '\n';
  out << "# max_iterations: " << spec.max_iterations << '\n';
  if (spec.timing) {
    out << "# max_wall_time_ms: " << format_double(spec.max_wall_time * 1e3) << '\n';
    out << "# wall_time: ms, planner query only; roadmap construction excluded\n";
  } else {
    out << "# wall_time: not recorded; wall-clock limit disabled\n";
  }
  out << "# total_path_length: m, sum over robots of moved edge lengths\n";
  return out.str();
}

std::vector<TrialRecord> parse_csv(std::string_view text) {
  std::vector<TrialRecord> records;
  bool header = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (std::string(line) + '\n' != csv_header())
        throw std::runtime_error("line " + std::to_string(line_no) + ": unexpected header");
      header = true;
      continue;
    }
    std::vector<std::string_view> f;
    for (std::size_t pos = 0;;) {
      const std::size_t comma = line.find(',', pos);
      f.push_back(line.substr(pos, comma - pos));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (f.size() != std::size(kColumns))
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(std::size(kColumns)) + " fields");
    TrialRecord r;
    r.scenario_name = f[0];
    const auto algo = parse_algorithm(f[1]);
    if (!algo) throw std::runtime_error("line " + std::to_string(line_no) + ": bad algorithm");
    r.algorithm = *algo;
    r.robot_count = parse_number<int>(f[2], kColumns[2]);
    r.seed = parse_number<std::uint64_t>(f[3], kColumns[3]);
    if (f[4] != "0" && f[4] != "1") throw std::runtime_error("line " + std::to_string(line_no) + ": bad success");
    r.success = f[4] == "1";
    r.tree_size = parse_number<int>(f[5], kColumns[5]);
    r.wall_time = parse_optional(f[6], kColumns[6]);
    r.total_path_length = parse_optional(f[7], kColumns[7]);
    r.iterations = parse_number<int>(f[8], kColumns[8]);
    r.failure_reason = f[9];
    if (r.success != r.total_path_length.has_value())
      throw std::runtime_error("line " + std::to_string(line_no) + ": path length must be present iff success");
    records.push_back(std::move(r));
  }
  if (!header) throw std::runtime_error("missing header row");
  return records;
}

Summary summarize(const std::vector<TrialRecord>& records) {
  using Cell = std::tuple<std::string, Algorithm, int>;
  std::map<Cell, std::vector<const TrialRecord*>> cells;
  for (const auto& r : records) cells[{r.scenario_name, r.algorithm, r.robot_count}].push_back(&r);

  Summary out;
  for (const auto& [key, rs] : cells) {
    SummaryRow row;
    std::tie(row.scenario_name, row.algorithm, row.robot_count) = key;
    row.trials = static_cast<int>(rs.size());
    std::vector<double> tree, iters, time, length;
    for (const TrialRecord* r : rs) {
      tree.push_back(r->tree_size);
      iters.push_back(r->iterations);
      if (r->wall_time) time.push_back(*r->wall_time);
      if (r->total_path_length) length.push_back(*r->total_path_length);
    }
    row.success_rate = static_cast<double>(length.size()) / rs.size();
    row.mean_tree_size = mean(tree);
    row.median_tree_size = median(tree);
    row.mean_iterations = mean(iters);
    if (time.size() == rs.size()) {
      row.mean_wall_time = mean(time);
      row.median_wall_time = median(time);
    }
    if (!length.empty()) {
      row.mean_path_length = mean(length);
      row.median_path_length = median(length);
    }
    out.rows.push_back(row);
  }

  using Pair = std::tuple<std::string, int, std::uint64_t>;
  std::map<Pair, std::pair<const TrialRecord*, const TrialRecord*>> pairs;
  for (const auto& r : records) {
    auto& slot = pairs[{r.scenario_name, r.robot_count, r.seed}];
    (r.algorithm == Algorithm::fdrrt ? slot.first : slot.second) = &r;
  }
  std::map<std::pair<std::string, int>, std::vector<std::pair<const TrialRecord*, const TrialRecord*>>> groups;
  for (const auto& [key, p] : pairs) {
    if (!p.first || !p.second || !p.first->success || !p.second->success) continue;
    groups[{std::get<0>(key), std::get<1>(key)}].push_back(p);
  }
  for (const auto& [key, ps] : groups) {
    PairedRow row;
    row.scenario_name = key.first;
    row.robot_count = key.second;
    row.pairs = static_cast<int>(ps.size());
    std::vector<double> fl, bl, ft, bt;
    for (const auto& [f, b] : ps) {
      fl.push_back(*f->total_path_length);
      bl.push_back(*b->total_path_length);
      if (f->wall_time && b->wall_time) {
        ft.push_back(*f->wall_time);
        bt.push_back(*b->wall_time);
      }
    }
    if (mean(bl) > 0.0) row.path_length_ratio = mean(fl) / mean(bl);
    if (ft.size() == ps.size() && mean(bt) > 0.0) row.mean_wall_time_ratio = mean(ft) / mean(bt);
    if (ft.size() == ps.size() && median(bt) > 0.0) row.median_wall_time_ratio = median(ft) / median(bt);
    out.paired.push_back(row);
  }
  return out;
}

std::string format_summary(const Summary& s) {
  std::ostringstream out;
  out << "scenario_name,algorithm,robot_count,trials,success_rate,mean_tree_size,median_tree_size,"
         "mean_iterations,mean_wall_time,median_wall_time,mean_path_length,median_path_length\n";
  for (const auto& r : s.rows)
    out << r.scenario_name << ',' << to_string(r.algorithm) << ',' << r.robot_count << ',' << r.trials << ','
        << format_double(r.success_rate) << ',' << format_double(r.mean_tree_size) << ','
        << format_double(r.median_tree_size) << ',' << format_double(r.mean_iterations) << ','
        << opt(r.mean_wall_time) << ',' << opt(r.median_wall_time) << ',' << opt(r.mean_path_length) << ','
        << opt(r.median_path_length) << '\n';
  out << "\nscenario_name,robot_count,pairs,path_length_ratio,mean_wall_time_ratio,median_wall_time_ratio\n";
  for (const auto& p : s.paired)
    out << p.scenario_name << ',' << p.robot_count << ',' << p.pairs << ',' << opt(p.path_length_ratio) << ','
        << opt(p.mean_wall_time_ratio) << ',' << opt(p.median_wall_time_ratio) << '\n';
  return out.str();
}

std::string plan_waypoints(const CompositePlan& plan, std::span<const LocalRoadmap> roadmaps) {
  std::ostringstream out;
  for (std::size_t i = 0; i < plan.robots.size(); ++i) {
    out << "# robot " << i;
    if (i < roadmaps.size()) out << ' ' << roadmaps[i].profile.id;
    out << "\nt,x,y,theta,kappa\n";
    const auto& w = plan.robots[i].waypoints;
    for (std::size_t t = 0; t < w.size(); ++t)
      out << t << ',' << format_double(w[t].x) << ',' << format_double(w[t].y) << ','
          << format_double(w[t].theta) << ',' << format_double(w[t].kappa) << '\n';
  }
  return out.str();
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

}  // namespace fdrrt
