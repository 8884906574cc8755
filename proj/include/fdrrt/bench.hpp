#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fdrrt/planner.hpp"
#include "fdrrt/scenarios.hpp"

namespace fdrrt {

struct TrialRecord {
  std::string scenario_name;
  Algorithm algorithm = Algorithm::fdrrt;
  int robot_count = 0;
  std::uint64_t seed = 0;
  bool success = false;
  int tree_size = 1;
  std::optional<double> wall_time;  // ms; absent when timing is off
  std::optional<double> total_path_length;  // m; absent on failure
  int iterations = 0;
  /// Empty on success: "iteration_limit", "time_limit", "roadmap:<code>" or
  /// "scenario:<code>".
  std::string failure_reason;

  bool operator==(const TrialRecord&) const = default;
};

std::string_view to_string(Algorithm algorithm);
/// Accepts "fdrrt", "drrt_star" and "drrt-star".
std::optional<Algorithm> parse_algorithm(std::string_view text);

/// Either a named generator or a fixed scenario. A fixed scenario keeps its
/// robots; each trial only reseeds roadmap sampling.
struct ScenarioSource {
  std::string generator;
  std::optional<Scenario> fixed;

  std::string name() const;
  Scenario make(int robot_count, std::uint64_t seed) const;
};

struct BatchSpec {
  ScenarioSource source;
  std::vector<Algorithm> algorithms{Algorithm::fdrrt, Algorithm::drrt_star};
  std::vector<int> robot_counts{2};
  int trials = 1;
  std::uint64_t base_seed = 0;
  int max_iterations = 100000;
  /// Per query, s. Ignored when timing is off so runs stay reproducible.
  double max_wall_time = 60.0;
  bool timing = true;
};

/// base_seed ^ (robot_count << 32) ^ trial.
std::uint64_t trial_seed(std::uint64_t base_seed, int robot_count, int trial);

/// One query: records the outcome of planning on prebuilt roadmaps.
TrialRecord run_trial(const std::string& scenario_name, std::span<const LocalRoadmap> roadmaps,
                      Algorithm algorithm, std::uint64_t seed, const BatchSpec& spec,
                      std::optional<CompositePlan>* plan_out = nullptr);

/// Runs every (robot_count, trial, algorithm) in that order. Roadmaps are built
/// once per (robot_count, trial) and shared by the algorithms. Each record is
/// passed to `sink` as soon as it is complete.
std::vector<TrialRecord> run_batch(const BatchSpec& spec,
                                   const std::function<void(const TrialRecord&)>& sink = {});

// CSV: '#'-prefixed metadata lines, a header row, one record per line.

std::string csv_header();
std::string csv_row(const TrialRecord& record);
std::string csv_metadata(const BatchSpec& spec);
/// Skips metadata and blank lines. Throws std::runtime_error on malformed rows.
std::vector<TrialRecord> parse_csv(std::string_view text);

struct SummaryRow {
  std::string scenario_name;
  Algorithm algorithm = Algorithm::fdrrt;
  int robot_count = 0;
  int trials = 0;
  double success_rate = 0.0;
  // Tree size, iterations and wall time over all trials; path length over successes.
  double mean_tree_size = 0.0;
  double median_tree_size = 0.0;
  double mean_iterations = 0.0;
  std::optional<double> mean_wall_time;
  std::optional<double> median_wall_time;
  std::optional<double> mean_path_length;
  std::optional<double> median_path_length;
};

/// fdrrt against the baseline over seeds where both succeeded.
struct PairedRow {
  std::string scenario_name;
  int robot_count = 0;
  int pairs = 0;
  std::optional<double> path_length_ratio;  // mean fdrrt / mean baseline
  std::optional<double> mean_wall_time_ratio;
  std::optional<double> median_wall_time_ratio;
};

struct Summary {
  std::vector<SummaryRow> rows;
  std::vector<PairedRow> paired;
};

Summary summarize(const std::vector<TrialRecord>& records);
std::string format_summary(const Summary& summary);

/// Waypoint file: per robot a "# robot i <id>" line, a "t,x,y,theta,kappa"
/// header and one line per time step.
std::string plan_waypoints(const CompositePlan& plan, std::span<const LocalRoadmap> roadmaps);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

}  // namespace fdrrt
