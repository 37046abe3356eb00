#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mpg/environment.hpp"
#include "mpg/nn.hpp"
#include "mpg/replay_buffer.hpp"
#include "mpg/seeding.hpp"
#include "mpg/target_rule.hpp"

namespace mpg::rl {

/// Gaussian exploration schedule. Values are variances, not standard deviations.
struct NoiseSchedule {
  double v_explore = 2.0;
  double v_min = 0.01;
  double lambda = 0.99;
  double v_train = 0.2;

  friend bool operator==(const NoiseSchedule&, const NoiseSchedule&) = default;
};

/// v_explore <- max(lambda * v_explore, v_min)
NoiseSchedule decay_noise(NoiseSchedule noise);

struct TrainerConfig {
  double gamma = 0.99;
  int batch_size = 16;
  double actor_lr = 1e-3;
  double critic_lr = 1e-2;
  int inner_iters = 2;
  int policy_delay = 2;
  double tau = 0.005;
  std::size_t replay_capacity = 100000;
  std::vector<int> hidden = {400, 300};
  TargetKind rule = TargetKind::Mpg;
  NoiseSchedule noise;
  /// Target-policy smoothing noise is clipped to +-this before use.
  double target_noise_clip = 0.5;

  void validate() const;
  friend bool operator==(const TrainerConfig&, const TrainerConfig&) = default;
};

/// a = clamp(pi(s) + N(0, v_explore), +-v_max) per component.
Eigen::VectorXd select_action(const nn::MlpParams& actor, double v_max,
                              const Eigen::VectorXd& state, const NoiseSchedule& noise, Rng& rng);

/// One Adam step on each critic against the shared target y, using the
/// batch's (state, action) pairs. Returns the summed per-critic MSE measured
/// before the step.
double critic_update(nn::MlpParams& critic1, nn::MlpParams& critic2, const Batch& batch,
                     const Eigen::VectorXd& y, double learning_rate);

/// One Adam step on the actor to raise mean Q1(s, pi(s)); critic1 is read only.
/// Returns the loss -mean Q1(s, pi(s)) measured before the step.
double actor_update(nn::MlpParams& actor, double v_max, const nn::MlpParams& critic1,
                    const Batch& batch, double learning_rate);

/// Stacks states over actions, the critic input layout.
Eigen::MatrixXd critic_input(const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions);

struct StepMetrics {
  int episode = 0;
  int step = 0;
  double reward = 0.0;
  double q1_mean = 0.0;
  double q2_mean = 0.0;
  double delta_adj_mean = 0.0;
  double v_explore = 0.0;
  double loss_critic = 0.0;
  double loss_actor = 0.0;
};

struct EpisodeSummary {
  double total_reward = 0.0;
  int steps = 0;
  bool terminated = false;  // ended before the step limit
  double final_v_explore = 0.0;
};

struct UpdateStats {
  bool performed = false;
  double q1_mean = 0.0;
  double q2_mean = 0.0;
  double delta_adj_mean = 0.0;
  double loss_critic = 0.0;
  double loss_actor = 0.0;
};

using MetricsSink = std::function<void(const StepMetrics&)>;

/// Actor, twin critics, their targets, replay memory and noise state for one
/// training run. Single-threaded; independent trainers share nothing.
class Trainer {
 public:
  Trainer(int observation_dim, int action_dim, double v_max, TrainerConfig config,
          std::uint64_t seed);

  /// Runs one episode of at most `max_steps` environment steps. Each step:
  /// act, decay exploration, store the transition, then (once the buffer holds
  /// a full batch) draw one minibatch and run the inner update loop on it.
  EpisodeSummary train_episode(env::Environment& env, int episode_index, int max_steps,
                               const MetricsSink& sink = {});

  /// Inner loop of target/critic updates on one minibatch, with actor and
  /// target-network updates on every policy_delay-th iteration.
  UpdateStats update(const Batch& batch);

  Eigen::VectorXd act(const Eigen::VectorXd& state) const;
  Eigen::VectorXd explore(const Eigen::VectorXd& state);

  const nn::MlpParams& actor() const { return actor_; }
  const nn::MlpParams& critic1() const { return critic1_; }
  const nn::MlpParams& critic2() const { return critic2_; }
  const nn::MlpParams& critic1_target() const { return critic1_target_; }
  const nn::MlpParams& critic2_target() const { return critic2_target_; }
  nn::MlpParams& actor() { return actor_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  const NoiseSchedule& noise() const { return noise_; }
  const TrainerConfig& config() const { return config_; }
  double v_max() const { return v_max_; }

 private:
  TrainerConfig config_;
  int obs_dim_;
  int act_dim_;
  double v_max_;
  nn::MlpParams actor_;
  nn::MlpParams critic1_, critic2_;
  nn::MlpParams critic1_target_, critic2_target_;
  ReplayBuffer buffer_;
  NoiseSchedule noise_;
  TargetRule rule_;
  Rng explore_rng_;
  Rng replay_rng_;
  Rng target_noise_rng_;
};

}  // namespace mpg::rl
