#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "fdrrt/bench.hpp"
#include "fdrrt/io.hpp"

using namespace fdrrt;

namespace {

constexpr std::string_view kGeneratorPrefix = "generator:";

ScenarioSource resolve(const std::string& scenario) {
  ScenarioSource src;
  if (scenario.starts_with(kGeneratorPrefix)) {
    src.generator = scenario.substr(kGeneratorPrefix.size());
    make_scenario(src.generator, 1, 0);  // rejects unknown names early
  } else {
    src.fixed = load_scenario(read_text(scenario));
  }
  return src;
}

int robot_count(const ScenarioSource& src, int requested) {
  if (!src.fixed) return requested ? requested : 2;
  const int have = static_cast<int>(src.fixed->robots.size());
  if (requested != 0 && requested != have)
    throw std::runtime_error("scenario file has " + std::to_string(have) + " robots");
  return have;
}

// Writes to `path`, or stdout when empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw std::runtime_error("cannot open " + path);
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

struct Common {
  std::string scenario;
  int robots = 0;
  std::uint64_t seed = 0;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--scenario", c.scenario, "Scenario file, or generator:intersection|warehouse|uav")->required();
  cmd->add_option("--robots", c.robots, "Robot count (default 2; a scenario file fixes its own)")
      ->check(CLI::Range(1, 64));
  cmd->add_option("--seed", c.seed, "Seed");
  cmd->add_option("--out", c.out, "Output file (default: stdout)");
}

void add_limits(CLI::App* cmd, BatchSpec& spec, double& max_time_ms) {
  cmd->add_option("--max-iters", spec.max_iterations, "Iteration cap per query")->check(CLI::PositiveNumber);
  cmd->add_option("--max-time-ms", max_time_ms, "Wall-clock cap per query, ms")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-robot planning over kinematically constrained roadmaps"};
  app.require_subcommand(1);

  Common common;
  BatchSpec spec;
  double max_time_ms = spec.max_wall_time * 1e3;
  std::string plan_algo = "fdrrt", bench_algo = "both";
  std::string emit_plan, roadmaps_in, save_scenario_to, summary_in;
  std::string robot_list;
  bool no_timing = false;

  auto* build = app.add_subcommand("build-roadmaps", "Build one roadmap per robot and save them as a bundle");
  add_common(build, common);
  build->add_option("--save-scenario", save_scenario_to, "Also write the scenario document");

  auto* plan_cmd = app.add_subcommand("plan", "Plan one query and print its trial record");
  add_common(plan_cmd, common);
  add_limits(plan_cmd, spec, max_time_ms);
  plan_cmd->add_option("--algo", plan_algo, "fdrrt or drrt-star");
  plan_cmd->add_option("--roadmaps", roadmaps_in, "Prebuilt roadmap bundle");
  plan_cmd->add_option("--emit-plan", emit_plan, "Write the plan waypoint file");

  auto* bench = app.add_subcommand("bench", "Run paired trials and stream CSV records");
  bench->add_option("--scenario", common.scenario, "Scenario file, or generator:intersection|warehouse|uav")
      ->required();
  bench->add_option("--robots", robot_list, "Robot counts, comma separated (default 2)");
  bench->add_option("--seed", common.seed, "Base seed");
  bench->add_option("--out", common.out, "Output file (default: stdout)");
  bench->add_option("--algo", bench_algo, "fdrrt, drrt-star or both");
  bench->add_option("--trials", spec.trials, "Trials per robot count")->check(CLI::PositiveNumber);
  bench->add_flag("--no-timing", no_timing, "Omit wall_time and the wall-clock cap; output is reproducible");
  add_limits(bench, spec, max_time_ms);

  auto* summarize_cmd = app.add_subcommand("summarize", "Summarize a CSV of trial records");
  summarize_cmd->add_option("input", summary_in, "CSV file")->required()->check(CLI::ExistingFile);
  summarize_cmd->add_option("--out", common.out, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    spec.max_wall_time = max_time_ms * 1e-3;
    spec.base_seed = common.seed;
    spec.timing = !no_timing;

    if (*build) {
      const ScenarioSource src = resolve(common.scenario);
      const Scenario s = src.make(robot_count(src, common.robots), common.seed);
      if (!save_scenario_to.empty()) write_text(save_scenario_to, save_scenario(s));
      Output(common.out).stream() << save_roadmaps(build_roadmaps(s)) << '\n';
      return 0;
    }

    if (*plan_cmd) {
      const auto a = parse_algorithm(plan_algo);
      if (!a) throw std::runtime_error("unknown algorithm: " + plan_algo);
      const ScenarioSource src = resolve(common.scenario);
      const Scenario s = src.make(robot_count(src, common.robots), common.seed);
      const auto maps = roadmaps_in.empty() ? build_roadmaps(s) : load_roadmaps(read_text(roadmaps_in));
      if (maps.size() != s.robots.size()) throw std::runtime_error("roadmap bundle does not match the scenario");
      std::optional<CompositePlan> plan;
      const TrialRecord r = run_trial(src.name(), maps, *a, common.seed, spec, &plan);
      Output out(common.out);
      out.stream() << csv_header() << csv_row(r);
      if (plan && !emit_plan.empty()) write_text(emit_plan, plan_waypoints(*plan, maps));
      return r.success ? 0 : 1;
    }

    if (*bench) {
      spec.source = resolve(common.scenario);
      if (bench_algo == "both") {
        spec.algorithms = {Algorithm::fdrrt, Algorithm::drrt_star};
      } else if (const auto a = parse_algorithm(bench_algo)) {
        spec.algorithms = {*a};
      } else {
        throw std::runtime_error("unknown algorithm: " + bench_algo);
      }
      spec.robot_counts.clear();
      std::stringstream ss(robot_list);
      for (std::string item; std::getline(ss, item, ',');)
        spec.robot_counts.push_back(robot_count(spec.source, std::stoi(item)));
      if (spec.robot_counts.empty()) spec.robot_counts.push_back(robot_count(spec.source, 0));
      Output out(common.out);
      std::ostream& os = out.stream();
      os << csv_metadata(spec) << csv_header() << std::flush;
      run_batch(spec, [&](const TrialRecord& r) { os << csv_row(r) << std::flush; });
      return 0;
    }

    if (*summarize_cmd) {
      Output(common.out).stream() << format_summary(summarize(parse_csv(read_text(summary_in))));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
