#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mpg/config.hpp"
#include "mpg/nn.hpp"
#include "mpg/tasks.hpp"
#include "mpg/trainer.hpp"

namespace mpg::harness {

/// Noise-free rollout statistics for one leader pattern.
struct EvalMetrics {
  env::LeaderKind leader = env::LeaderKind::Random;
  int episodes = 0;
  int steps = 0;
  /// Tracking and obstacle tasks: mean ||p_l - p_f|| per step. Unison: mean
  /// per-follower offset error. Consensus: mean per-pair |d_ij - D_ij|.
  double mean_distance = 0.0;
  double mean_reward = 0.0;
  /// Mean error per follower (unison) or per pair (consensus); one entry otherwise.
  std::vector<double> per_slot_error;
  int collisions = 0;         // steps with at least one agent pair closer than C
  int obstacle_contacts = 0;  // steps ending in contact with an obstacle
  int bound_breaches = 0;
  double mean_episode_length = 0.0;
};

struct SeedRun {
  std::uint64_t seed = 0;
  std::vector<rl::EpisodeSummary> episodes;
  std::vector<double> step_rewards;  // every training step, in order
  std::vector<EvalMetrics> evaluations;
  std::filesystem::path directory;
};

struct RunSummary {
  ExperimentConfig config;
  std::vector<SeedRun> runs;
};

/// Leader patterns evaluated after training: the training leader first, plus
/// circle and square for random-leader tracking.
std::vector<env::LeaderKind> evaluation_leaders(const ExperimentConfig& config);

/// Rolls out `actor` without exploration noise for config.eval_episodes
/// episodes. When `trajectory` is non-null, every agent pose is written to it
/// as CSV rows (episode,step,agent_id,role,x,y,theta,reward).
EvalMetrics evaluate_policy(const nn::MlpParams& actor, const ExperimentConfig& config,
                            env::LeaderKind leader, std::uint64_t seed,
                            std::ostream* trajectory = nullptr);

/// Recomputes the aggregate metrics from a trajectory CSV written by
/// evaluate_policy; used to cross-check summaries.
EvalMetrics metrics_from_trajectory(const std::filesystem::path& csv,
                                    const ExperimentConfig& config, env::LeaderKind leader);

/// Trains and evaluates one seed, writing its files under `directory`.
SeedRun run_seed(const ExperimentConfig& config, std::uint64_t seed,
                 const std::filesystem::path& directory);

/// Validates the config, then trains every seed (concurrently when
/// `parallel` is set) and writes per-seed outputs plus an aggregate summary.
RunSummary run_experiment(const ExperimentConfig& config, bool parallel = true);

/// Re-evaluates the checkpointed actor stored in a seed directory.
std::vector<EvalMetrics> evaluate_checkpoint(const ExperimentConfig& config,
                                             const std::filesystem::path& seed_directory,
                                             std::uint64_t seed);

std::string seed_directory_name(const ExperimentConfig& config, std::uint64_t seed);

std::string summary_json(const RunSummary& summary);
std::string eval_json(const std::vector<EvalMetrics>& evals);

}  // namespace mpg::harness
