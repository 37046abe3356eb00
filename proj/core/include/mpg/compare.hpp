#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mpg/config.hpp"
#include "mpg/experiment.hpp"

namespace mpg::harness {

struct RunCurves {
  std::uint64_t seed = 0;
  std::vector<double> step_rewards;
  std::vector<rl::EpisodeSummary> episodes;
};

struct AlgorithmRuns {
  ExperimentConfig config;
  std::vector<RunCurves> runs;
};

AlgorithmRuns runs_from_summary(const RunSummary& summary);
/// Loads a directory written by run_experiment: config.txt plus each seed's
/// metrics.csv and episodes.csv.
AlgorithmRuns load_runs(const std::filesystem::path& out_dir);

struct AlgorithmReport {
  rl::TargetKind algorithm = rl::TargetKind::Mpg;
  std::vector<std::uint64_t> seeds;
  // Smoothed per-step reward across seeds, truncated to the shortest run.
  std::vector<double> mean, min, max;
  std::vector<double> final_reward;  // per seed, mean episode reward over the final window
  std::vector<double> final_length;  // per seed, mean episode length over the final window
  double final_reward_mean = 0.0;
  double final_length_mean = 0.0;
};

struct ComparisonReport {
  env::Task task = env::Task::Tracking;
  int window = 200;
  int final_window = 50;
  AlgorithmReport first, second;
  double reward_difference = 0.0;  // first - second
  double length_difference = 0.0;  // first - second
};

/// Requires at least two seeds per side and configs that agree on everything
/// except algorithm, seeds and output directory.
ComparisonReport compare_runs(const AlgorithmRuns& first, const AlgorithmRuns& second,
                              int window = 200, int final_window = 50);

/// step,<a>_mean,<a>_min,<a>_max,<b>_mean,<b>_min,<b>_max
std::string comparison_csv(const ComparisonReport& report);
std::string comparison_markdown(const ComparisonReport& report);

}  // namespace mpg::harness
