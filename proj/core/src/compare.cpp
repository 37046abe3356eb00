#include "mpg/compare.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mpg/csv.hpp"
#include "mpg/smoothing.hpp"

namespace mpg::harness {
namespace {

namespace fs = std::filesystem;

ExperimentConfig comparable(ExperimentConfig c) {
  c.algorithm = rl::TargetKind::Mpg;
  c.seeds.clear();
  c.out_dir.clear();
  return c;
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

AlgorithmReport summarise(const AlgorithmRuns& runs, std::size_t aligned, int window,
                          int final_window) {
  AlgorithmReport r;
  r.algorithm = runs.config.algorithm;
  r.mean.assign(aligned, 0.0);
  r.min.assign(aligned, std::numeric_limits<double>::infinity());
  r.max.assign(aligned, -std::numeric_limits<double>::infinity());
  for (const auto& run : runs.runs) {
    r.seeds.push_back(run.seed);
    const auto smooth = smooth_rewards(std::span(run.step_rewards).first(aligned), window);
    for (std::size_t i = 0; i < aligned; ++i) {
      r.mean[i] += smooth[i];
      r.min[i] = std::min(r.min[i], smooth[i]);
      r.max[i] = std::max(r.max[i], smooth[i]);
    }
    const std::size_t n = run.episodes.size();
    const std::size_t from = n > static_cast<std::size_t>(final_window) ? n - final_window : 0;
    double reward = 0.0, length = 0.0;
    for (std::size_t e = from; e < n; ++e) {
      reward += run.episodes[e].total_reward;
      length += run.episodes[e].steps;
    }
    const double count = static_cast<double>(n - from);
    r.final_reward.push_back(reward / count);
    r.final_length.push_back(length / count);
  }
  for (double& m : r.mean) m /= static_cast<double>(runs.runs.size());
  r.final_reward_mean = mean_of(r.final_reward);
  r.final_length_mean = mean_of(r.final_length);
  return r;
}

}  // namespace

AlgorithmRuns runs_from_summary(const RunSummary& summary) {
  AlgorithmRuns out;
  out.config = summary.config;
  for (const auto& s : summary.runs) out.runs.push_back({s.seed, s.step_rewards, s.episodes});
  return out;
}

AlgorithmRuns load_runs(const fs::path& out_dir) {
  AlgorithmRuns out;
  out.config = load_config(out_dir / "config.txt");
  for (std::uint64_t seed : out.config.seeds) {
    const fs::path dir = out_dir / seed_directory_name(out.config, seed);
    RunCurves run;
    run.seed = seed;
    const CsvTable metrics = read_csv(dir / "metrics.csv");
    const auto c_reward = metrics.column("reward");
    for (std::size_t i = 0; i < metrics.rows.size(); ++i) {
      run.step_rewards.push_back(metrics.number(i, c_reward));
    }
    const CsvTable episodes = read_csv(dir / "episodes.csv");
    const auto c_total = episodes.column("total_reward"), c_steps = episodes.column("steps");
    const auto c_term = episodes.column("terminated"), c_v = episodes.column("v_explore");
    for (std::size_t i = 0; i < episodes.rows.size(); ++i) {
      rl::EpisodeSummary e;
      e.total_reward = episodes.number(i, c_total);
      e.steps = static_cast<int>(episodes.integer(i, c_steps));
      e.terminated = episodes.integer(i, c_term) != 0;
      e.final_v_explore = episodes.number(i, c_v);
      run.episodes.push_back(e);
    }
    out.runs.push_back(std::move(run));
  }
  return out;
}

ComparisonReport compare_runs(const AlgorithmRuns& first, const AlgorithmRuns& second, int window,
                              int final_window) {
  if (window < 1) throw std::invalid_argument("smoothing window must be >= 1");
  if (final_window < 1) throw std::invalid_argument("final window must be >= 1");
  if (first.runs.size() < 2 || second.runs.size() < 2) {
    throw std::invalid_argument("comparison needs at least two seeds per algorithm");
  }
  if (!(comparable(first.config) == comparable(second.config))) {
    throw std::invalid_argument(
        "runs were produced with different task/trainer/environment settings");
  }
  std::size_t aligned = std::numeric_limits<std::size_t>::max();
  for (const auto* side : {&first, &second}) {
    for (const auto& run : side->runs) {
      if (run.episodes.empty()) {
        throw std::invalid_argument("seed " + std::to_string(run.seed) + " has no episodes");
      }
      aligned = std::min(aligned, run.step_rewards.size());
    }
  }

  ComparisonReport r;
  r.task = first.config.task;
  r.window = window;
  r.final_window = final_window;
  r.first = summarise(first, aligned, window, final_window);
  r.second = summarise(second, aligned, window, final_window);
  r.reward_difference = r.first.final_reward_mean - r.second.final_reward_mean;
  r.length_difference = r.first.final_length_mean - r.second.final_length_mean;
  return r;
}

std::string comparison_csv(const ComparisonReport& report) {
  const std::string a(rl::to_string(report.first.algorithm));
  const std::string b(rl::to_string(report.second.algorithm));
  std::ostringstream out;
  out << "step," << a << "_mean," << a << "_min," << a << "_max," << b << "_mean," << b << "_min,"
      << b << "_max\n";
  for (std::size_t i = 0; i < report.first.mean.size(); ++i) {
    out << i << ',' << format_double(report.first.mean[i]) << ','
        << format_double(report.first.min[i]) << ',' << format_double(report.first.max[i]) << ','
        << format_double(report.second.mean[i]) << ',' << format_double(report.second.min[i])
        << ',' << format_double(report.second.max[i]) << '\n';
  }
  return out.str();
}

std::string comparison_markdown(const ComparisonReport& report) {
  std::ostringstream out;
  out << "# " << env::to_string(report.task) << ": " << rl::to_string(report.first.algorithm)
      << " vs " << rl::to_string(report.second.algorithm) << "\n\n";
  out << "Smoothing window " << report.window << " steps; final window " << report.final_window
      << " episodes; " << report.first.mean.size() << " aligned steps.\n\n";
  out << "| algorithm | seed | final mean episode reward | final mean episode length |\n";
  out << "|---|---|---|---|\n";
  for (const auto* side : {&report.first, &report.second}) {
    for (std::size_t i = 0; i < side->seeds.size(); ++i) {
      out << "| " << rl::to_string(side->algorithm) << " | " << side->seeds[i] << " | "
          << format_double(side->final_reward[i]) << " | " << format_double(side->final_length[i])
          << " |\n";
    }
    out << "| " << rl::to_string(side->algorithm) << " | mean | "
        << format_double(side->final_reward_mean) << " | "
        << format_double(side->final_length_mean) << " |\n";
  }
  out << "\nDifference (" << rl::to_string(report.first.algorithm) << " - "
      << rl::to_string(report.second.algorithm) << "): reward "
      << format_double(report.reward_difference) << ", episode length "
      << format_double(report.length_difference) << "\n";
  return out.str();
}

}  // namespace mpg::harness
